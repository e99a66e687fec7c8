// Copyright 2026 The gptlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gptlab/protocols.h"

#include <Eigen/SVD>
#include <cmath>
#include <set>
#include <sstream>

namespace gpt {

using Q = Rational;

namespace {

Device<Q> prep_device(const Vec<Q> &v, const SystemList &types, std::vector<int> outputs, std::string label) {
    Device<Q> d;
    d.kind = DeviceKind::Preparation;
    d.label = std::move(label);
    d.out_types = types;
    d.outputs = std::move(outputs);
    d.outcomes = {Mat<Q>(v)};
    return d;
}

Device<Q> measure_device(std::vector<Mat<Q>> effects, const SystemList &types, std::vector<int> inputs, std::string var,
                         std::string label) {
    Device<Q> d;
    d.kind = DeviceKind::Measurement;
    d.label = std::move(label);
    d.in_types = types;
    d.inputs = std::move(inputs);
    d.radices = {static_cast<int>(effects.size())};
    d.outcomes = std::move(effects);
    d.vars = {std::move(var)};
    return d;
}

}  // namespace

// ---------------------------------------------------------------------------

Circuit<Q> advice_parity_circuit(const TruthTable &f, const std::vector<int> &x) {
    if (static_cast<int>(x.size()) != f.n) {
        throw PreconditionError("advice_parity_eval: input has " + std::to_string(x.size()) + " bits, function has arity " +
                                std::to_string(f.n));
    }
    TheorySpec theory = boxworld_theory();
    const SystemType gbit = theory.systems[0].type;
    Circuit<Q> c;
    c.units = theory.unit_map();
    std::vector<int> wires;
    for (int j = 0; j < f.n; ++j) {
        wires.push_back(c.add_wire("A" + std::to_string(j + 1), gbit));
    }
    c.devices.push_back(prep_device(rho_f(f).coords, SystemList(f.n, gbit), wires, "rho"));
    for (int j = 0; j < f.n; ++j) {
        if (x[j] != 0 && x[j] != 1) {
            throw PreconditionError("advice_parity_eval: input bits must be 0 or 1");
        }
        auto proto = make_measurement(theory, "fiducial", {Q(x[j])}, {gbit});
        c.devices.push_back(measure_device(proto.outcomes, {gbit}, {wires[j]}, "a" + std::to_string(j + 1), "fiducial"));
    }
    c.accept = [](const OutcomeString &z) {
        int p = 0;
        for (int a : z) {
            p ^= a;
        }
        return p == 1;
    };
    return c;
}

AdviceEval advice_parity_eval(const TruthTable &f, const std::vector<int> &x) {
    auto dist = evaluate_closed(advice_parity_circuit(f, x));
    AdviceEval out;
    int seen = -1;
    for (const auto &[z, p] : dist.entries) {
        if (p == 0) {
            continue;
        }
        ++out.support;
        int parity = 0;
        for (int a : z) {
            parity ^= a;
        }
        if (seen >= 0 && parity != seen) {
            out.deterministic = false;
        }
        seen = parity;
    }
    out.bit = std::max(seen, 0);
    return out;
}

// ---------------------------------------------------------------------------

VonNeumannReport von_neumann_bit(const TheorySpec &theory, const GVector<Q> &y, const GEffect<Q> &e0, size_t n_pairs,
                                 uint64_t seed) {
    if (!(y.systems == e0.systems)) {
        throw PreconditionError("von_neumann_bit: state and effect act on different systems");
    }
    VonNeumannReport rep;
    rep.p0 = e0(y);
    if (rep.p0 <= 0 || rep.p0 >= 1) {
        throw PreconditionError("von_neumann_bit: (e0|y) = " + to_string(rep.p0) +
                                " is deterministic; a coin with 0 < p < 1 is required");
    }
    Circuit<Q> c;
    c.units = theory.unit_map();
    RowVec<Q> u = theory.unit(y.systems);
    std::vector<Mat<Q>> effects = {Mat<Q>(e0.coords), Mat<Q>(u - e0.coords)};
    const char *names[] = {"a", "b"};
    for (int k = 0; k < 2; ++k) {
        std::vector<int> wires;
        for (const auto &t : y.systems) {
            wires.push_back(c.add_wire(std::string(1, 'Y') + std::to_string(k), t));
        }
        c.devices.push_back(prep_device(y.coords, y.systems, wires, "y"));
        c.devices.push_back(measure_device(effects, y.systems, wires, names[k], "e0"));
    }
    auto dist = evaluate_closed(c);
    auto samples = sample(dist, seed, n_pairs);
    rep.seed = seed;
    rep.pairs = n_pairs;
    size_t zeros = 0;
    for (const auto &z : samples) {
        if (z[0] == 0 && z[1] == 1) {
            rep.bits.push_back(0);
            ++zeros;
        } else if (z[0] == 1 && z[1] == 0) {
            rep.bits.push_back(1);
        }
    }
    rep.kept = rep.bits.size();
    rep.expected_keep_rate = to_double(Q(2) * rep.p0 * (1 - rep.p0));
    rep.keep_rate = n_pairs ? static_cast<double>(rep.kept) / static_cast<double>(n_pairs) : 0.0;
    rep.keep_bound =
        n_pairs ? 3 * std::sqrt(rep.expected_keep_rate * (1 - rep.expected_keep_rate) / static_cast<double>(n_pairs)) : 0.0;
    rep.keep_ok = n_pairs > 0 && std::abs(rep.keep_rate - rep.expected_keep_rate) <= rep.keep_bound;
    if (rep.kept > 0) {
        rep.p_hat0 = static_cast<double>(zeros) / static_cast<double>(rep.kept);
        rep.bias_bound = 4 * std::sqrt(1.0 / (4.0 * static_cast<double>(rep.kept)));
        rep.bias_ok = std::abs(rep.p_hat0 - 0.5) <= rep.bias_bound;
    }
    return rep;
}

VonNeumannReport von_neumann_bit(const Q &p, size_t n_pairs, uint64_t seed) {
    TheorySpec theory = classical_theory(2);
    const SystemType bit = theory.systems[0].type;
    Vec<Q> y(2);
    y << p, 1 - p;
    RowVec<Q> e0(2);
    e0 << 1, 0;
    return von_neumann_bit(theory, {{bit}, y, std::nullopt}, {{bit}, e0}, n_pairs, seed);
}

GTransform<Q> permutation_transform(const std::vector<uint32_t> &image, int n_bits) {
    if (n_bits < 1 || n_bits > 10) {
        throw GuardError("permutation_transform: 1..10 bits supported");
    }
    const size_t size = size_t{1} << n_bits;
    if (image.size() != size) {
        throw PreconditionError("permutation_transform: expected 2^n images");
    }
    std::vector<bool> hit(size, false);
    for (uint32_t y : image) {
        if (y >= size || hit[y]) {
            throw PreconditionError("permutation_transform: function is not a bijection");
        }
        hit[y] = true;
    }
    const SystemType bit = classical_theory(2).systems[0].type;
    Mat<Q> m = Mat<Q>::Zero(size, size);
    for (size_t x = 0; x < size; ++x) {
        m(image[x], x) = 1;
    }
    SystemList sys(n_bits, bit);
    return {sys, sys, std::move(m)};
}

// ---------------------------------------------------------------------------

GVector<Q> measurement_update(const TheorySpec &theory, const GVector<Q> &state, const GEffect<Q> &effect) {
    if (theory.membership != MembershipKind::Psd) {
        throw UnsupportedError("measurement_update: requires the self-dual quantum theory");
    }
    if (!(state.systems == effect.systems) || state.coords.size() != effect.coords.size()) {
        throw PreconditionError("measurement_update: state and effect act on different systems");
    }
    const Q e0 = effect.coords(0);
    const int d = 1 << qubits_for_dim(static_cast<Eigen::Index>(std::llround(std::sqrt(double(state.coords.size())))));
    if (e0 <= 0 || effect.coords.squaredNorm() != Q(d) * e0 * e0) {
        throw PreconditionError("measurement_update: effect is not pure (rank one)");
    }
    const Q prob = effect(state);
    if (prob == 0) {
        throw PostSelectionError("measurement_update: outcome has probability zero");
    }
    if (prob < 0) {
        throw PreconditionError("measurement_update: negative outcome probability");
    }
    GVector<Q> out{state.systems, effect.coords.transpose() / e0, std::nullopt};
    if (!membership(theory, out)) {
        throw PreconditionError("measurement_update: effect is not positive");
    }
    return out;
}

namespace {

Eigen::MatrixXcd random_density(int d, std::mt19937_64 &rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_int_distribution<int> rank_dist(1, d);
    const int rank = rank_dist(rng);
    Eigen::MatrixXcd a(d, rank);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < rank; ++j) {
            a(i, j) = {g(rng), g(rng)};
        }
    }
    Eigen::MatrixXcd rho = a * a.adjoint();
    return rho / rho.trace().real();
}

Eigen::VectorXcd random_unit(int d, std::mt19937_64 &rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::VectorXcd v(d);
    for (int i = 0; i < d; ++i) {
        v(i) = {g(rng), g(rng)};
    }
    return v / v.norm();
}

}  // namespace

GentleReport gentle_measurement_check(size_t n_trials, uint64_t seed, const std::vector<int> &dims, double tol) {
    for (int d : dims) {
        if (d < 2 || d > 8) {
            throw PreconditionError("gentle_measurement_check: dimensions 2..8 supported");
        }
    }
    GentleReport rep;
    rep.seed = seed;
    rep.dims = dims;
    rep.trials_per_dim.assign(dims.size(), 0);
    rep.tolerance = tol;
    std::mt19937_64 rng(seed);
    for (size_t t = 0; t < n_trials; ++t) {
        const size_t which = t % dims.size();
        const int d = dims[which];
        Eigen::MatrixXcd rho = random_density(d, rng);
        Eigen::VectorXcd psi = random_unit(d, rng);
        if (t % 10 == 9) {
            // Nearly orthogonal: the least likely eigenvector plus a small tilt.
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
            psi = es.eigenvectors().col(0) + 1e-3 * psi;
            psi /= psi.norm();
        }
        const double fidelity = (psi.adjoint() * rho * psi)(0, 0).real();
        const double eps = std::max(0.0, 1.0 - fidelity);
        Eigen::MatrixXcd rho0 = psi * psi.adjoint();
        const double lhs = hermitian_norms(rho - rho0).phy_norm;
        const double rhs = std::sqrt(static_cast<double>(d)) * std::sqrt(2 * eps);
        if (rhs > 0) {
            rep.max_ratio = std::max(rep.max_ratio, lhs / rhs);
        }
        if (lhs > rhs + tol) {
            ++rep.violations;
        }
        ++rep.trials_per_dim[which];
        ++rep.trials;
    }
    // Exact eps = 0 cases: stabilizer product states with their dual effect.
    TheorySpec q = quantum_theory(2);
    const auto &spec = q.systems[0];
    for (int d : dims) {
        if (d != 2 && d != 4) {
            continue;
        }
        const int nq = d == 2 ? 1 : 2;
        for (size_t i = 0; i < spec.states.size(); ++i) {
            for (size_t j = 0; j < (nq == 2 ? spec.states.size() : 1); ++j) {
                Vec<Q> r = nq == 1 ? spec.states[i] : Vec<Q>(kron<Q>(spec.states[i], spec.states[j]));
                SystemList sys(nq, spec.type);
                RowVec<Q> e = r.transpose() / Q(d);
                GVector<Q> rho{sys, r, std::nullopt};
                GVector<Q> out = measurement_update(q, rho, {sys, e});
                Vec<Q> diff = rho.coords - out.coords;
                const double lhs = norms(q, GVector<Q>{sys, diff, std::nullopt}.cast<double>()).phy_norm;
                const bool eps_zero = e.dot(r) == 1;
                ++rep.zero_eps_cases;
                if (!eps_zero || !all_zero<Q>(Mat<Q>(diff)) || lhs != 0.0) {
                    rep.zero_eps_exact = false;
                }
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------

Q majority_tail(const Q &p, int k) {
    Q total(0);
    for (int j = k / 2 + 1; j <= k; ++j) {
        Integer binom = 1;
        for (int i = 0; i < j; ++i) {
            binom = binom * (k - i) / (i + 1);
        }
        Q term = Q(binom);
        for (int i = 0; i < j; ++i) {
            term *= p;
        }
        for (int i = 0; i < k - j; ++i) {
            term *= 1 - p;
        }
        total += term;
    }
    return total;
}

// ---------------------------------------------------------------------------

DistillResult advice_distillation(const AdviceFamily &family, int t_max) {
    if (family.theory.membership != MembershipKind::Psd) {
        throw UnsupportedError("advice_distillation: quantum families only");
    }
    if (family.inputs.empty() || family.inputs.size() > 8) {
        throw GuardError("advice_distillation: between 1 and 8 inputs");
    }
    SystemList aux = family.inputs[0].aux_types();
    if (aux.empty() || aux.size() > 2) {
        throw GuardError("advice_distillation: advice register must be 1 or 2 qubits");
    }
    std::vector<RowVec<Q>> rows;
    for (const auto &c : family.inputs) {
        if (!(c.aux_types() == aux)) {
            throw PreconditionError("advice_distillation: inputs disagree on the advice register");
        }
        rows.push_back(acceptance_row(c));
    }
    DistillResult res;
    res.t_max = t_max > 0 ? t_max : 8 * static_cast<int>(family.inputs.size());
    if (family.initial) {
        res.final_state = *family.initial;
    } else {
        Vec<Q> mixed = Vec<Q>::Zero(total_dim(aux));
        mixed(0) = 1;
        res.final_state = {aux, mixed, std::nullopt};
    }
    auto success = [&](const GVector<Q> &s) {
        std::vector<Q> out;
        for (const auto &r : rows) {
            out.push_back(r.dot(s.coords.transpose()));
        }
        return out;
    };
    while (true) {
        auto probs = success(res.final_state);
        int bad = -1;
        for (size_t i = 0; i < probs.size(); ++i) {
            if (probs[i] < family.alpha) {
                bad = static_cast<int>(i);
                break;
            }
        }
        res.final_success = probs;
        if (bad < 0) {
            res.complete = true;
            break;
        }
        if (res.iterations >= res.t_max || probs[bad] == 0) {
            break;
        }
        DistillStep step;
        step.iteration = res.iterations + 1;
        step.input = bad;
        step.success = probs;
        step.postselect_probability = probs[bad];
        res.final_state = measurement_update(family.theory, res.final_state, {aux, rows[bad]});
        res.trace.push_back(std::move(step));
        ++res.iterations;
    }
    return res;
}

// ---------------------------------------------------------------------------

double sigma_max(const Eigen::MatrixXd &m) {
    if (m.size() == 0) {
        throw PreconditionError("sigma_max: empty matrix");
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues()(0);
}

double sigma_max(const Mat<Q> &m) {
    if (m.size() == 0) {
        throw PreconditionError("sigma_max: empty matrix");
    }
    return sigma_max(Eigen::MatrixXd(m.cast<double>()));
}

SigmaBounds exact_sigma_bounds(const Mat<Q> &m, int iterations) {
    if (m.size() == 0) {
        throw PreconditionError("exact_sigma_bounds: empty matrix");
    }
    Mat<Q> a = m.transpose() * m;
    SigmaBounds b;
    Q best(0);
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        best = std::max(best, a(i, i));
    }
    Vec<Q> x = Vec<Q>::Ones(a.rows());
    for (int k = 0; k < iterations; ++k) {
        x = a * x;
    }
    Q xx = x.squaredNorm();
    if (xx != 0) {
        best = std::max(best, x.dot(a * x) / xx);
    }
    b.lower = std::sqrt(to_double(best));
    Mat<Q> p = a;
    int power = 1;
    for (int k = 0; k < iterations; ++k) {
        p = p * p;
        power *= 2;
    }
    b.upper = std::pow(to_double(p.trace()), 1.0 / (2.0 * power));
    return b;
}

Q gap_trace(const Mat<Q> &m, int d) {
    if (m.rows() != m.cols() || m.size() == 0) {
        throw PreconditionError("gap_trace: matrix must be square and nonempty");
    }
    if (d < 1) {
        throw PreconditionError("gap_trace: exponent must be positive");
    }
    if (m.rows() > kMaxGapDim || d > kMaxGapExponent) {
        throw GuardError("gap_trace: matrix dimension or exponent above the cost guard");
    }
    Mat<Q> base = m.transpose() * m;
    Mat<Q> acc = Mat<Q>::Identity(m.rows(), m.cols());
    bool first = true;
    for (int e = d; e > 0; e >>= 1) {
        if (e & 1) {
            acc = first ? base : Mat<Q>(acc * base);
            first = false;
        }
        if (e > 1) {
            base = base * base;
        }
    }
    return acc.trace();
}

// ---------------------------------------------------------------------------

Reparam reparametrise(const TheorySpec &theory, const SystemType &system) {
    const auto &spec = theory.system(system);
    const Eigen::Index dim = system.dim;
    Reparam rep;
    rep.system = system.name;
    Eigen::VectorXd u = spec.unit.cast<double>().transpose();
    Vec<Q> c = Vec<Q>::Zero(dim);
    for (const auto &s : spec.states) {
        c += s;
    }
    c /= Q(static_cast<int>(spec.states.size()));
    rep.center = c;
    Eigen::VectorXd cd = c.cast<double>();

    // Orthonormal basis of the complement of u, by Gram-Schmidt.
    std::vector<Eigen::VectorXd> basis{u / u.norm()};
    for (Eigen::Index k = 0; k < dim && static_cast<Eigen::Index>(basis.size()) < dim; ++k) {
        Eigen::VectorXd v = Eigen::VectorXd::Unit(dim, k);
        for (const auto &b : basis) {
            v -= b.dot(v) * b;
        }
        if (v.norm() > 1e-9) {
            basis.push_back(v / v.norm());
        }
    }
    Eigen::MatrixXd B(dim, dim - 1);
    for (Eigen::Index k = 1; k < dim; ++k) {
        B.col(k - 1) = basis[k];
    }

    if (theory.membership == MembershipKind::Psd) {
        const int d = 1 << qubits_for_dim(static_cast<Eigen::Index>(std::llround(std::sqrt(double(dim)))));
        rep.radius = 1.0 / std::sqrt(static_cast<double>(d - 1));
    } else {
        std::vector<RowVec<Q>> facets = spec.facets;
        if (facets.empty() && theory.membership == MembershipKind::Simplex) {
            for (Eigen::Index k = 0; k < dim; ++k) {
                RowVec<Q> f = RowVec<Q>::Zero(dim);
                f(k) = 1;
                facets.push_back(f);
            }
        }
        if (facets.empty()) {
            throw UnsupportedError("reparametrise: system '" + system.name + "' lists no facets");
        }
        double r = std::numeric_limits<double>::infinity();
        for (const auto &f : facets) {
            Eigen::VectorXd fd = f.cast<double>().transpose();
            double norm = (B.transpose() * fd).norm();
            if (norm > 1e-12) {
                r = std::min(r, fd.dot(cd) / norm);
            }
        }
        rep.radius = r;
    }
    rep.phi.resize(dim, dim);
    rep.phi.row(0) = u.transpose();
    Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(dim, dim) - cd * u.transpose();
    rep.phi.bottomRows(dim - 1) = B.transpose() * proj / rep.radius;
    rep.phi_inv.resize(dim, dim);
    rep.phi_inv.col(0) = cd;
    rep.phi_inv.rightCols(dim - 1) = rep.radius * B;
    return rep;
}

MaxAccept max_accept(const TheorySpec &theory, const SystemList &systems, const RowVec<Q> &a) {
    if (a.size() != total_dim(systems)) {
        throw PreconditionError("max_accept: acceptance row has the wrong dimension");
    }
    MaxAccept out;
    switch (theory.membership) {
        case MembershipKind::Simplex: {
            Eigen::Index best = 0;
            for (Eigen::Index i = 1; i < a.size(); ++i) {
                if (a(i) > a(best)) {
                    best = i;
                }
            }
            out.exact = a(best);
            out.value = to_double(a(best));
            out.witness = Eigen::VectorXd::Unit(a.size(), best);
            out.method = "vertex";
            return out;
        }
        case MembershipKind::Psd: {
            Eigen::MatrixXcd e = extract_effect<Q>(a).to_complex();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(e);
            const auto last = es.eigenvalues().size() - 1;
            out.value = es.eigenvalues()(last);
            Eigen::VectorXcd v = es.eigenvectors().col(last);
            Eigen::MatrixXcd rho = v * v.adjoint();
            const int n = qubits_for_dim(rho.rows());
            auto basis = pauli_basis<double>(n);
            out.witness.resize(static_cast<Eigen::Index>(basis.size()));
            for (size_t k = 0; k < basis.size(); ++k) {
                out.witness(static_cast<Eigen::Index>(k)) = (basis[k].to_complex() * rho).trace().real();
            }
            out.method = "eigen";
            return out;
        }
        case MembershipKind::Polytope: {
            if (systems.size() == 1) {
                const auto &st = theory.system(systems[0]).states;
                size_t best = 0;
                for (size_t k = 1; k < st.size(); ++k) {
                    if (a.dot(st[k].transpose()) > a.dot(st[best].transpose())) {
                        best = k;
                    }
                }
                out.exact = a.dot(st[best].transpose());
                out.value = to_double(*out.exact);
                out.witness = st[best].cast<double>();
                out.method = "vertex";
                return out;
            }
            if (systems.size() > 4) {
                throw GuardError("max_accept: composite polytope LP limited to 4 systems");
            }
            // v = y+ - y-; product effects nonnegative; unit effect one.
            auto effects = product_effects(theory, systems);
            RowVec<Q> u = theory.unit(systems);
            const int dim = static_cast<int>(a.size());
            LPProblem lp;
            lp.num_vars = 2 * dim;
            auto split = [&](const RowVec<Q> &row) {
                std::vector<Q> c(lp.num_vars);
                for (int t = 0; t < dim; ++t) {
                    c[t] = row(t);
                    c[dim + t] = -row(t);
                }
                return c;
            };
            for (const auto &e : effects) {
                lp.add(split(e), Sense::GreaterEq, Q(0));
            }
            lp.add(split(u), Sense::Equal, Q(1));
            lp.objective = split(a);
            LPResult r = solve(lp);
            if (r.status != LPStatus::Optimal) {
                throw PreconditionError("max_accept: state-space LP did not reach an optimum");
            }
            out.exact = r.objective;
            out.value = to_double(r.objective);
            out.witness.resize(dim);
            for (int t = 0; t < dim; ++t) {
                out.witness(t) = to_double(r.x[t] - r.x[dim + t]);
            }
            out.method = "lp";
            return out;
        }
    }
    throw UnsupportedError("max_accept: unknown theory tag");
}

SigmaBoundReport verify_sigma_bound(const Circuit<Q> &c, const TheorySpec &theory, double tol) {
    if (c.aux_ports.empty()) {
        throw PreconditionError("verify_sigma_bound: circuit has no auxiliary ports");
    }
    SigmaBoundReport rep;
    rep.acceptance = acceptance_row(c);
    const SystemList systems = c.aux_types();
    rep.accept = max_accept(theory, systems, rep.acceptance);
    rep.sigma_raw = sigma_max(pad_square(Mat<Q>(rep.acceptance)));
    rep.raw_holds = rep.accept.value <= rep.sigma_raw + tol;

    Eigen::MatrixXd phi_inv = Eigen::MatrixXd::Ones(1, 1);
    double rescale = 1;
    try {
        for (const auto &t : systems) {
            Reparam r = reparametrise(theory, t);
            rep.radii.push_back(r.radius);
            double best = 0;
            for (const auto &s : theory.system(t).states) {
                best = std::max(best, (r.phi * s.cast<double>()).norm());
            }
            rescale *= best;
            phi_inv = kron<double>(phi_inv, r.phi_inv);
        }
    } catch (const UnsupportedError &e) {
        rep.verdict = Verdict::Inconclusive;
        rep.note = e.what();
        return rep;
    }
    rep.rescale = rescale;
    Eigen::RowVectorXd row = rescale * rep.acceptance.cast<double>() * phi_inv;
    rep.sigma_tilde = sigma_max(Eigen::MatrixXd(pad_square<double>(Mat<double>(row))));
    rep.holds = rep.accept.value <= rep.sigma_tilde + tol;
    const bool certified = theory.membership != MembershipKind::Polytope || systems.size() == 1 || theory.name == "boxworld";
    if (!rep.holds) {
        rep.verdict = Verdict::Fail;
        rep.note = "max_accept exceeds sigma_max after re-parametrisation";
    } else if (!certified) {
        rep.verdict = Verdict::Inconclusive;
        rep.note = "rescale taken over product states only";
    } else {
        rep.verdict = Verdict::Pass;
        rep.note = rep.raw_holds ? "" : "raw coordinates violate the bound (informative)";
    }
    return rep;
}

// ---------------------------------------------------------------------------

int default_d_rule(int n) {
    return (n + 2) / 2;
}

void check_d_rule(int n, int d) {
    if (n < 0 || d < 1 || n + 1 > 2 * d) {
        throw PreconditionError("d_rule: 2^(n+1) <= 4^d fails for n = " + std::to_string(n) + ", d = " + std::to_string(d));
    }
}

std::string to_string(Classification c) {
    switch (c) {
        case Classification::AcceptSide:
            return "accept-side";
        case Classification::RejectSide:
            return "reject-side";
        case Classification::Violation:
            return "violation";
    }
    return "unknown";
}

namespace {

Q qpow(Q base, int e) {
    Q r(1);
    for (int i = 0; i < e; ++i) {
        r *= base;
    }
    return r;
}

}  // namespace

BoundReport gma_bound(const TheorySpec &theory, const ProofInput &in, const DRule &d_rule, double tol) {
    BoundReport rep;
    rep.input = in.name;
    rep.n = in.n;
    rep.d = d_rule(in.n);
    check_d_rule(rep.n, rep.d);
    Mat<Q> m = pad_square(accept_map(in.circuit).matrix);
    rep.N = m.rows();
    rep.sigma_max = sigma_max(m);
    rep.accept = max_accept(theory, in.circuit.aux_types(), acceptance_row(in.circuit));
    rep.gap_trace = gap_trace(m, rep.d);
    rep.accept_threshold = qpow(Q(4, 9), rep.d);
    rep.reject_threshold = rep.accept_threshold / 2;
    if (rep.gap_trace >= rep.accept_threshold) {
        rep.classification = Classification::AcceptSide;
    } else if (rep.gap_trace <= rep.reject_threshold) {
        rep.classification = Classification::RejectSide;
    }
    const double f = to_double(rep.gap_trace);
    const double s2d = std::pow(rep.sigma_max, 2.0 * rep.d);
    const double slack = 1e-6;
    rep.sandwich = s2d <= f * (1 + slack) + tol && f <= static_cast<double>(rep.N) * s2d * (1 + slack) + tol;
    rep.chain_trace = f <= static_cast<double>(rep.N) * s2d * (1 + slack) + tol;
    rep.chain_sigma = rep.sigma_max <= 1.0 / 3.0 + tol;
    rep.chain_final = Q(static_cast<long>(rep.N)) * qpow(Q(1, 9), rep.d) <= rep.reject_threshold;
    return rep;
}

std::vector<BoundReport> gma_threshold_report(const ProofExperiment &exp, double tol) {
    std::vector<BoundReport> out;
    for (const auto &in : exp.inputs) {
        out.push_back(gma_bound(exp.theory, in, exp.d_rule, tol));
    }
    return out;
}

std::string gma_fixture_text(const std::vector<int> &x, bool reject_side) {
    std::ostringstream s;
    s << "theory classical\n";
    for (size_t j = 0; j < x.size(); ++j) {
        s << "aux X" << j + 1 << " : bit\n";
    }
    if (reject_side) {
        s << "system C : bit\n";
        s << "prepare state(2/3, 1/3) -> C\n";
    }
    for (size_t j = 0; j < x.size(); ++j) {
        s << "measure basis() X" << j + 1 << " -> x" << j + 1 << "\n";
    }
    if (reject_side) {
        s << "measure basis() C -> c\n";
    }
    s << "accept ";
    for (size_t j = 0; j < x.size(); ++j) {
        s << (j ? " and " : "") << "x" << j + 1 << " == " << x[j];
    }
    if (reject_side) {
        s << " and c == 1";
    }
    s << "\n";
    return s.str();
}

// ---------------------------------------------------------------------------

PostBgpReport postbgp_check(const Circuit<Q> &c, const OutcomePredicate &s, int D, int w) {
    if (D < 1 || w < 0) {
        throw PreconditionError("postbgp_check: need D >= 1 and w >= 0");
    }
    auto dist = evaluate_closed(c);
    PostBgpReport rep;
    rep.p_s = dist.probability_of(s);
    if (rep.p_s == 0) {
        throw PostSelectionError("postbgp_check: post-selection event has probability zero");
    }
    rep.bound = Q(1) / qpow(Q(D), w);
    rep.clause_postselect = rep.p_s >= rep.bound;
    OutcomePredicate acc = c.accept;
    rep.p_accept_given_s = dist.probability_of([&](const OutcomeString &z) { return s(z) && acc(z); }) / rep.p_s;
    if (rep.p_accept_given_s >= Q(2, 3)) {
        rep.outcome = "accept";
    } else if (rep.p_accept_given_s <= Q(1, 3)) {
        rep.outcome = "reject";
    } else {
        rep.outcome = "gap";
    }
    if (!rep.clause_postselect) {
        rep.failed_clause = "postselection-probability";
    } else if (rep.outcome == "gap") {
        rep.failed_clause = "threshold-gap";
    }
    return rep;
}

// ---------------------------------------------------------------------------

namespace {

int uniform(std::mt19937_64 &rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

ExprPtr random_expr(const std::vector<std::string> &vars, int depth, std::mt19937_64 &rng) {
    if (depth == 0 || uniform(rng, 0, 3) == 0) {
        if (vars.empty() || uniform(rng, 0, 4) == 0) {
            return Expr::lit(uniform(rng, 0, 1));
        }
        return Expr::var(vars[uniform(rng, 0, static_cast<int>(vars.size()) - 1)]);
    }
    switch (uniform(rng, 0, 5)) {
        case 0:
            return Expr::unary(Expr::Kind::Not, random_expr(vars, depth - 1, rng));
        case 1:
            return Expr::binary(Expr::Kind::And, random_expr(vars, depth - 1, rng), random_expr(vars, depth - 1, rng));
        case 2:
            return Expr::binary(Expr::Kind::Or, random_expr(vars, depth - 1, rng), random_expr(vars, depth - 1, rng));
        case 3:
            return Expr::binary(Expr::Kind::Xor, random_expr(vars, depth - 1, rng), random_expr(vars, depth - 1, rng));
        case 4:
            return Expr::binary(Expr::Kind::Eq, random_expr(vars, depth - 1, rng), random_expr(vars, depth - 1, rng));
        default:
            return Expr::binary(Expr::Kind::Ne, random_expr(vars, depth - 1, rng), random_expr(vars, depth - 1, rng));
    }
}

Q random_rational(std::mt19937_64 &rng, int range, int den) {
    return Q(uniform(rng, -range, range), uniform(rng, 1, den));
}

std::string random_state_ctor(const TheorySpec &theory, std::mt19937_64 &rng) {
    const auto &st = theory.systems[0].states;
    if (theory.membership == MembershipKind::Simplex) {
        int a = uniform(rng, 0, 8);
        return "state(" + to_string(Q(a, 8)) + ", " + to_string(Q(8 - a, 8)) + ")";
    }
    if (uniform(rng, 0, 3) == 0) {
        return "mixed()";
    }
    return "extremal(" + std::to_string(uniform(rng, 0, static_cast<int>(st.size()) - 1)) + ")";
}

std::string random_measure_ctor(const TheorySpec &theory, std::mt19937_64 &rng) {
    if (theory.name == "boxworld") {
        return "fiducial(" + std::to_string(uniform(rng, 0, 1)) + ")";
    }
    const auto &ms = theory.systems[0].measurements;
    return ms[uniform(rng, 0, static_cast<int>(ms.size()) - 1)].name + "()";
}

}  // namespace

std::string random_aux_circuit_text(const TheorySpec &theory, int max_aux, std::mt19937_64 &rng) {
    const std::string type = theory.systems[0].type.name;
    const int n_aux = uniform(rng, 1, max_aux);
    std::ostringstream s;
    s << "theory " << theory.name << "\n";
    std::vector<std::string> wires;
    for (int k = 0; k < n_aux; ++k) {
        wires.push_back("A" + std::to_string(k + 1));
        s << "aux " << wires.back() << " : " << type << "\n";
    }
    if (uniform(rng, 0, 1) == 0) {
        s << "system B : " << type << "\n";
        s << "prepare " << random_state_ctor(theory, rng) << " -> B\n";
        wires.push_back("B");
    }
    const int n_gates = uniform(rng, 0, 4);
    for (int g = 0; g < n_gates; ++g) {
        const auto &gen = theory.generators[uniform(rng, 0, static_cast<int>(theory.generators.size()) - 1)];
        if (gen.systems.size() > wires.size()) {
            continue;
        }
        std::vector<std::string> pool = wires, picked;
        for (size_t k = 0; k < gen.systems.size(); ++k) {
            int i = uniform(rng, 0, static_cast<int>(pool.size()) - 1);
            picked.push_back(pool[i]);
            pool.erase(pool.begin() + i);
        }
        s << "apply " << gen.name;
        for (const auto &w : picked) {
            s << " " << w;
        }
        s << " ->";
        for (const auto &w : picked) {
            s << " " << w;
        }
        s << "\n";
    }
    std::vector<std::string> vars;
    const bool leave_one = wires.size() > 1 && uniform(rng, 0, 3) == 0;
    for (size_t k = 0; k + (leave_one ? 1 : 0) < wires.size(); ++k) {
        vars.push_back("m" + std::to_string(k + 1));
        s << "measure " << random_measure_ctor(theory, rng) << " " << wires[k] << " -> " << vars.back() << "\n";
    }
    s << "accept " << print(*random_expr(vars, 3, rng)) << "\n";
    return s.str();
}

Mat<Q> random_rational_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64 &rng, int range, int den) {
    Mat<Q> m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = random_rational(rng, range, den);
        }
    }
    return m;
}

CircuitAST random_ast(std::mt19937_64 &rng, int max_devices) {
    CircuitAST ast;
    ast.theory = "classical";
    auto stmt = [&](auto node) { ast.stmts.push_back(Stmt{std::move(node), {}}); };
    std::vector<std::string> live, vars;
    int n_sys = 0;
    const int devices = uniform(rng, 1, max_devices);
    for (int k = 0; k < devices; ++k) {
        int choice = live.empty() ? 0 : uniform(rng, 0, 3);
        if (choice == 0) {
            std::string name = "S" + std::to_string(++n_sys);
            if (uniform(rng, 0, 2) == 0) {
                stmt(AuxDecl{name, "bit"});
            } else {
                stmt(SystemDecl{name, "bit"});
                int a = uniform(rng, 0, 6);
                Ctor c = uniform(rng, 0, 1) ? Ctor{"basis", {Q(uniform(rng, 0, 1))}} : Ctor{"state", {Q(a, 6), Q(6 - a, 6)}};
                stmt(Prepare{c, {name}});
            }
            live.push_back(name);
        } else if (choice == 1) {
            if (live.size() >= 2 && uniform(rng, 0, 1)) {
                std::string a = live[0], b = live[1];
                stmt(Apply{uniform(rng, 0, 1) ? "CNOT" : "SWAP", {a, b}, {a, b}});
            } else {
                std::string a = live[uniform(rng, 0, static_cast<int>(live.size()) - 1)];
                stmt(Apply{"NOT", {a}, {a}});
            }
        } else if (choice == 2) {
            int i = uniform(rng, 0, static_cast<int>(live.size()) - 1);
            std::string v = uniform(rng, 0, 5) == 0 ? "_" : "v" + std::to_string(vars.size() + 1);
            stmt(Measure{{"basis", {}}, {live[i]}, {v}});
            if (v != "_") {
                vars.push_back(v);
            }
            live.erase(live.begin() + i);
        } else if (!vars.empty()) {
            stmt(PostSelect{random_expr(vars, 2, rng)});
        }
    }
    ast.accept = random_expr(vars, 3, rng);
    return ast;
}

}  // namespace gpt
