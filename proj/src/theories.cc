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

#include "gptlab/theories.h"

#include <algorithm>
#include <stdexcept>

namespace gpt {

using Q = Rational;

std::string to_string(MembershipKind kind) {
    switch (kind) {
        case MembershipKind::Simplex:
            return "simplex";
        case MembershipKind::Psd:
            return "psd";
        case MembershipKind::Polytope:
            return "polytope";
    }
    return "unknown";
}

MembershipKind membership_kind_from_string(const std::string &text) {
    if (text == "simplex") {
        return MembershipKind::Simplex;
    }
    if (text == "psd") {
        return MembershipKind::Psd;
    }
    if (text == "polytope") {
        return MembershipKind::Polytope;
    }
    throw UnsupportedError("unknown membership tag '" + text + "'");
}

const SystemSpec &TheorySpec::system(const std::string &type_name) const {
    for (const auto &s : systems) {
        if (s.type.name == type_name) {
            return s;
        }
    }
    throw UnsupportedError("theory '" + name + "' has no system type '" + type_name + "'");
}

bool TheorySpec::has_system(const std::string &type_name) const {
    return std::any_of(systems.begin(), systems.end(), [&](const SystemSpec &s) { return s.type.name == type_name; });
}

const Generator *TheorySpec::generator(const std::string &gen_name) const {
    for (const auto &g : generators) {
        if (g.name == gen_name) {
            return &g;
        }
    }
    return nullptr;
}

RowVec<Q> TheorySpec::unit(const SystemList &list) const {
    Mat<Q> u = Mat<Q>::Ones(1, 1);
    for (const auto &t : list) {
        u = kron<Q>(u, Mat<Q>(system(t).unit));
    }
    return u;
}

std::map<std::string, RowVec<Q>> TheorySpec::unit_map() const {
    std::map<std::string, RowVec<Q>> out;
    for (const auto &s : systems) {
        out[s.type.name] = s.unit;
    }
    return out;
}

TruthTable::TruthTable(int arity, std::vector<uint8_t> values) : n(arity), bits(std::move(values)) {
    if (arity < 0 || arity > 30 || bits.size() != (size_t{1} << arity)) {
        throw PreconditionError("truth table must have exactly 2^n entries");
    }
    for (auto &b : bits) {
        b = b ? 1 : 0;
    }
}

namespace {

Vec<Q> basis_vec(int dim, int k) {
    Vec<Q> v = Vec<Q>::Zero(dim);
    v(k) = 1;
    return v;
}

RowVec<Q> row(std::initializer_list<Q> xs) {
    RowVec<Q> r(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (const auto &x : xs) {
        r(i++) = x;
    }
    return r;
}

Vec<Q> col(std::initializer_list<Q> xs) {
    return row(xs).transpose();
}

Mat<Q> swap_matrix(int d) {
    Mat<Q> m = Mat<Q>::Zero(d * d, d * d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            m(j * d + i, i * d + j) = 1;
        }
    }
    return m;
}

Mat<Q> permutation_matrix(const std::vector<int> &image) {
    const auto n = static_cast<Eigen::Index>(image.size());
    Mat<Q> m = Mat<Q>::Zero(n, n);
    for (Eigen::Index x = 0; x < n; ++x) {
        m(image[x], x) = 1;
    }
    return m;
}

}  // namespace

TheorySpec classical_theory(int n_levels) {
    if (n_levels < 2) {
        throw PreconditionError("classical_theory: need at least two levels");
    }
    std::string type_name = n_levels == 2 ? "bit" : n_levels == 3 ? "trit" : "dit" + std::to_string(n_levels);
    SystemSpec s;
    s.type = {type_name, n_levels};
    Measurement basis{"basis", {}};
    for (int k = 0; k < n_levels; ++k) {
        s.states.push_back(basis_vec(n_levels, k));
        RowVec<Q> e = basis_vec(n_levels, k).transpose();
        s.effects.push_back(e);
        basis.effects.push_back(e);
        s.facets.push_back(e);
    }
    s.measurements.push_back(basis);
    s.unit = RowVec<Q>::Ones(n_levels);

    TheorySpec t;
    t.name = "classical";
    t.membership = MembershipKind::Simplex;
    t.max_systems = 20;
    t.systems.push_back(s);
    for (int i = 0; i < n_levels; ++i) {
        for (int j = i + 1; j < n_levels; ++j) {
            std::vector<int> image(n_levels);
            for (int k = 0; k < n_levels; ++k) {
                image[k] = k == i ? j : k == j ? i : k;
            }
            std::string gname = n_levels == 2 ? "NOT" : "T" + std::to_string(i) + std::to_string(j);
            t.generators.push_back({gname, {type_name}, permutation_matrix(image)});
        }
    }
    t.generators.push_back({"SWAP", {type_name, type_name}, swap_matrix(n_levels)});
    if (n_levels == 2) {
        t.generators.push_back({"CNOT", {"bit", "bit"}, permutation_matrix({0, 1, 3, 2})});
        t.generators.push_back({"TOFFOLI", {"bit", "bit", "bit"}, permutation_matrix({0, 1, 2, 3, 4, 5, 7, 6})});
    }
    return t;
}

TheorySpec quantum_theory(int n_qubits) {
    if (n_qubits < 1 || n_qubits > 5) {
        throw GuardError("quantum_theory: supported register sizes are 1..5 qubits");
    }
    SystemSpec s;
    s.type = {"qubit", 4};
    // Stabilizer states |0>,|1>,|+>,|->,|+i>,|-i>.
    const std::vector<Vec<Q>> states = {col({1, 0, 0, 1}), col({1, 0, 0, -1}), col({1, 1, 0, 0}),
                                        col({1, -1, 0, 0}), col({1, 0, 1, 0}),  col({1, 0, -1, 0})};
    const char *names[] = {"z", "x", "y"};
    const int order[] = {0, 2, 4};
    for (const auto &st : states) {
        s.states.push_back(st);
        s.effects.push_back(st.transpose() / Q(2));
    }
    for (int m = 0; m < 3; ++m) {
        s.measurements.push_back({names[m], {s.effects[order[m]], s.effects[order[m] + 1]}});
    }
    s.unit = row({1, 0, 0, 0});

    TheorySpec t;
    t.name = "quantum";
    t.membership = MembershipKind::Psd;
    t.max_systems = n_qubits;
    t.systems.push_back(s);

    CMat<Q> h = CMat<Q>::real((Mat<Q>(2, 2) << 1, 1, 1, -1).finished());
    CMat<Q> sg = CMat<Q>::identity(2);
    sg.re(1, 1) = 0;
    sg.im(1, 1) = 1;
    CMat<Q> x = pauli<Q>(1), z = pauli<Q>(3);
    t.generators.push_back({"H", {"qubit"}, transfer_matrix(h, Q(2))});
    t.generators.push_back({"S", {"qubit"}, transfer_matrix(sg, Q(1))});
    t.generators.push_back({"X", {"qubit"}, transfer_matrix(x, Q(1))});
    t.generators.push_back({"Z", {"qubit"}, transfer_matrix(z, Q(1))});
    if (n_qubits >= 2) {
        CMat<Q> cnot = CMat<Q>::real(permutation_matrix({0, 1, 3, 2}));
        CMat<Q> swap = CMat<Q>::real(swap_matrix(2));
        t.generators.push_back({"CNOT", {"qubit", "qubit"}, transfer_matrix(cnot, Q(1))});
        t.generators.push_back({"SWAP", {"qubit", "qubit"}, transfer_matrix(swap, Q(1))});
    }
    return t;
}

RowVec<Q> gbit_effect(int x, int a) {
    Q sign = a ? Q(-1) : Q(1);
    RowVec<Q> e(3);
    e << Q(1, 2), x == 0 ? sign / 2 : Q(0), x == 1 ? sign / 2 : Q(0);
    return e;
}

RowVec<Q> gbit_product_effect(const std::vector<int> &xs, const std::vector<int> &as) {
    Mat<Q> e = Mat<Q>::Ones(1, 1);
    for (size_t j = 0; j < xs.size(); ++j) {
        e = kron<Q>(e, Mat<Q>(gbit_effect(xs[j], as[j])));
    }
    return e;
}

TheorySpec boxworld_theory() {
    SystemSpec s;
    s.type = {"gbit", 3};
    for (int a0 : {1, -1}) {
        for (int a1 : {1, -1}) {
            s.states.push_back(col({1, a0, a1}));
        }
    }
    for (int x = 0; x < 2; ++x) {
        Measurement m{"fiducial" + std::to_string(x), {gbit_effect(x, 0), gbit_effect(x, 1)}};
        s.effects.push_back(m.effects[0]);
        s.effects.push_back(m.effects[1]);
        s.measurements.push_back(m);
    }
    s.unit = row({1, 0, 0});
    s.facets = {row({1, 1, 0}), row({1, -1, 0}), row({1, 0, 1}), row({1, 0, -1})};

    TheorySpec t;
    t.name = "boxworld";
    t.membership = MembershipKind::Polytope;
    t.max_systems = kMaxRhoArity;
    t.systems.push_back(s);
    Mat<Q> swapx = permutation_matrix({0, 2, 1});
    Mat<Q> flip0 = Mat<Q>::Identity(3, 3);
    flip0(1, 1) = -1;
    Mat<Q> flip1 = Mat<Q>::Identity(3, 3);
    flip1(2, 2) = -1;
    t.generators.push_back({"SWAPX", {"gbit"}, swapx});
    t.generators.push_back({"FLIP0", {"gbit"}, flip0});
    t.generators.push_back({"FLIP1", {"gbit"}, flip1});
    t.generators.push_back({"SWAP", {"gbit", "gbit"}, swap_matrix(3)});
    return t;
}

TheorySpec builtin_theory(const std::string &name) {
    if (name == "classical") {
        return classical_theory(2);
    }
    if (name == "quantum") {
        return quantum_theory(5);
    }
    if (name == "boxworld") {
        return boxworld_theory();
    }
    throw UnsupportedError("unknown theory '" + name + "'");
}

GVector<Q> rho_f(const TruthTable &f) {
    const int n = f.n;
    if (n < 1 || n > kMaxRhoArity) {
        throw GuardError("rho_f: arity must be between 1 and " + std::to_string(kMaxRhoArity));
    }
    Eigen::Index dim = 1;
    for (int j = 0; j < n; ++j) {
        dim *= 3;
    }
    Vec<Q> v = Vec<Q>::Zero(dim);
    v(0) = 1;
    for (uint32_t x = 0; x < (uint32_t{1} << n); ++x) {
        Eigen::Index idx = 0;
        for (int j = 0; j < n; ++j) {
            int bit = (x >> (n - 1 - j)) & 1;
            idx = idx * 3 + 1 + bit;
        }
        v(idx) = f(x) ? Q(-1) : Q(1);
    }
    SystemList systems(n, SystemType{"gbit", 3});
    return {systems, v, std::nullopt};
}

GVector<Q> pr_state() {
    return rho_f(TruthTable(2, {0, 0, 0, 1}));
}

namespace {

template <class S>
bool polytope_products_nonnegative(const TheorySpec &theory, const SystemList &systems, const Vec<S> &v, double tol) {
    // Contract one system at a time with every extremal effect.
    struct Frame {
        Vec<S> rest;
        size_t pos;
    };
    std::vector<Frame> stack{{v, 0}};
    while (!stack.empty()) {
        Frame fr = std::move(stack.back());
        stack.pop_back();
        if (fr.pos == systems.size()) {
            if (!geq<S>(fr.rest(0), S(0), tol)) {
                return false;
            }
            continue;
        }
        const auto &spec = theory.system(systems[fr.pos]);
        const Eigen::Index d = systems[fr.pos].dim;
        const Eigen::Index rest_dim = fr.rest.size() / d;
        for (const auto &e : spec.effects) {
            RowVec<S> es = e.template cast<S>();
            Vec<S> next(rest_dim);
            for (Eigen::Index r = 0; r < rest_dim; ++r) {
                S acc(0);
                for (Eigen::Index k = 0; k < d; ++k) {
                    acc += es(k) * fr.rest(k * rest_dim + r);
                }
                next(r) = acc;
            }
            stack.push_back({std::move(next), fr.pos + 1});
        }
    }
    return true;
}

template <class S>
bool membership_impl(const TheorySpec &theory, const GVector<S> &v, double tol) {
    if (v.systems.empty() || v.coords.size() != total_dim(v.systems)) {
        throw PreconditionError("membership: malformed vector");
    }
    for (const auto &t : v.systems) {
        if (!(theory.system(t).type == t)) {
            throw PreconditionError("membership: system type '" + t.name + "' has a different dimension in theory");
        }
    }
    RowVec<S> u = theory.unit(v.systems).template cast<S>();
    if (!nearly_equal<S>(u.dot(v.coords.transpose()), S(1), tol)) {
        return false;
    }
    switch (theory.membership) {
        case MembershipKind::Simplex:
            if (v.systems.size() == 1) {
                for (const auto &f : theory.system(v.systems[0]).facets) {
                    if (!geq<S>(f.template cast<S>().dot(v.coords.transpose()), S(0), tol)) {
                        return false;
                    }
                }
                return true;
            }
            for (Eigen::Index i = 0; i < v.coords.size(); ++i) {
                if (!geq<S>(v.coords(i), S(0), tol)) {
                    return false;
                }
            }
            return true;
        case MembershipKind::Psd: {
            if (v.systems.size() > 5) {
                throw GuardError("membership: at most 5 qubits");
            }
            Eigen::VectorXd ev = density_eigenvalues<S>(v.coords);
            return ev.minCoeff() >= -std::max(tol, 1e-12);
        }
        case MembershipKind::Polytope:
            if (v.systems.size() == 1) {
                const auto &spec = theory.system(v.systems[0]);
                const auto &rows = spec.facets.empty() ? spec.effects : spec.facets;
                for (const auto &f : rows) {
                    if (!geq<S>(f.template cast<S>().dot(v.coords.transpose()), S(0), tol)) {
                        return false;
                    }
                }
                return true;
            }
            if (v.systems.size() > 8) {
                throw GuardError("membership: composite polytope check limited to 8 systems");
            }
            // The full product table is positive. Its marginals are defined by
            // the lower-order components, so no-signalling holds identically.
            return polytope_products_nonnegative<S>(theory, v.systems, v.coords, tol);
    }
    throw UnsupportedError("membership: unknown theory tag");
}

}  // namespace

bool membership(const TheorySpec &theory, const GVector<Q> &v) {
    return membership_impl<Q>(theory, v, 0.0);
}

bool membership(const TheorySpec &theory, const GVector<double> &v, double tol) {
    return membership_impl<double>(theory, v, tol);
}

GVector<Q> embed_quantum_state(const CMat<Q> &rho) {
    const Eigen::Index d = rho.rows();
    int n = qubits_for_dim(d);
    if ((Eigen::Index{1} << n) != d || rho.re.cols() != d) {
        throw UnsupportedError("embed: dimension is not a power of two");
    }
    if (rho.re != rho.re.transpose() || rho.im != Mat<Q>(-rho.im.transpose())) {
        throw UnsupportedError("embed: matrix is not Hermitian");
    }
    if (rho.re.trace() != 1) {
        throw UnsupportedError("embed: trace is not one");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.to_complex(), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kTolerance) {
        throw UnsupportedError("embed: matrix is not positive semidefinite");
    }
    return {SystemList(n, SystemType{"qubit", 4}), embed_density<Q>(rho), std::nullopt};
}

// ---------------------------------------------------------------------------
// JSON

namespace {

using Json = nlohmann::ordered_json;

Json vec_json(const Mat<Q> &m) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        a.push_back(to_string(m.data()[i]));
    }
    return a;
}

Json mat_json(const Mat<Q> &m) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json r = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            r.push_back(to_string(m(i, j)));
        }
        a.push_back(r);
    }
    return a;
}

Q json_scalar(const Json &j) {
    if (j.is_string()) {
        return parse_rational(j.get<std::string>());
    }
    if (j.is_number_integer()) {
        return Q(j.get<long long>());
    }
    throw std::invalid_argument("theory JSON: numbers must be integers or \"p/q\" strings");
}

std::vector<Q> json_list(const Json &j) {
    std::vector<Q> out;
    for (const auto &x : j) {
        out.push_back(json_scalar(x));
    }
    return out;
}

RowVec<Q> json_row(const Json &j, Eigen::Index dim) {
    auto xs = json_list(j);
    if (static_cast<Eigen::Index>(xs.size()) != dim) {
        throw std::invalid_argument("theory JSON: vector has wrong length");
    }
    RowVec<Q> r(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        r(i) = xs[i];
    }
    return r;
}

}  // namespace

Json theory_to_json(const TheorySpec &theory) {
    Json j;
    j["name"] = theory.name;
    j["membership"] = to_string(theory.membership);
    j["max_systems"] = theory.max_systems;
    Json systems = Json::array(), states, effects, measurements, unit, facets;
    for (const auto &s : theory.systems) {
        systems.push_back({{"name", s.type.name}, {"dim", s.type.dim}});
        Json st = Json::array(), ef = Json::array(), ms = Json::array(), fc = Json::array();
        for (const auto &v : s.states) {
            st.push_back(vec_json(v));
        }
        for (const auto &e : s.effects) {
            ef.push_back(vec_json(e));
        }
        for (const auto &m : s.measurements) {
            Json es = Json::array();
            for (const auto &e : m.effects) {
                es.push_back(vec_json(e));
            }
            ms.push_back({{"name", m.name}, {"effects", es}});
        }
        for (const auto &f : s.facets) {
            fc.push_back(vec_json(f));
        }
        states[s.type.name] = st;
        effects[s.type.name] = ef;
        measurements[s.type.name] = ms;
        unit[s.type.name] = vec_json(s.unit);
        facets[s.type.name] = fc;
    }
    j["systems"] = systems;
    j["states"] = states;
    j["effects"] = effects;
    j["measurements"] = measurements;
    j["unit"] = unit;
    Json gens = Json::array();
    for (const auto &g : theory.generators) {
        gens.push_back({{"name", g.name}, {"systems", g.systems}, {"matrix", mat_json(g.matrix)}});
    }
    j["generators"] = gens;
    j["facets"] = facets;
    return j;
}

TheorySpec theory_from_json(const Json &j) {
    TheorySpec t;
    t.name = j.at("name").get<std::string>();
    t.membership = membership_kind_from_string(j.at("membership").get<std::string>());
    t.max_systems = j.value("max_systems", 12);
    for (const auto &sj : j.at("systems")) {
        SystemSpec s;
        s.type = {sj.at("name").get<std::string>(), sj.at("dim").get<int>()};
        if (s.type.dim <= 0) {
            throw std::invalid_argument("theory JSON: system dimension must be positive");
        }
        const std::string &n = s.type.name;
        const Eigen::Index d = s.type.dim;
        if (j.contains("states") && j["states"].contains(n)) {
            for (const auto &v : j["states"][n]) {
                s.states.push_back(json_row(v, d).transpose());
            }
        }
        if (j.contains("effects") && j["effects"].contains(n)) {
            for (const auto &v : j["effects"][n]) {
                s.effects.push_back(json_row(v, d));
            }
        }
        if (j.contains("measurements") && j["measurements"].contains(n)) {
            for (const auto &mj : j["measurements"][n]) {
                Measurement m{mj.at("name").get<std::string>(), {}};
                for (const auto &v : mj.at("effects")) {
                    m.effects.push_back(json_row(v, d));
                }
                s.measurements.push_back(std::move(m));
            }
        }
        s.unit = json_row(j.at("unit").at(n), d);
        if (j.contains("facets") && j["facets"].contains(n)) {
            for (const auto &v : j["facets"][n]) {
                s.facets.push_back(json_row(v, d));
            }
        }
        t.systems.push_back(std::move(s));
    }
    if (j.contains("generators")) {
        for (const auto &gj : j["generators"]) {
            Generator g;
            g.name = gj.at("name").get<std::string>();
            g.systems = gj.at("systems").get<std::vector<std::string>>();
            Eigen::Index d = 1;
            for (const auto &sn : g.systems) {
                d *= t.system(sn).type.dim;
            }
            const auto &rows = gj.at("matrix");
            if (static_cast<Eigen::Index>(rows.size()) != d) {
                throw std::invalid_argument("theory JSON: generator '" + g.name + "' has wrong size");
            }
            g.matrix.resize(d, d);
            for (Eigen::Index i = 0; i < d; ++i) {
                g.matrix.row(i) = json_row(rows[i], d);
            }
            t.generators.push_back(std::move(g));
        }
    }
    return t;
}

// ---------------------------------------------------------------------------
// Constructors for the circuit language

namespace {

void expect_args(const std::string &ctor, const std::vector<Q> &args, size_t n) {
    if (args.size() != n) {
        throw PreconditionError(ctor + ": expected " + std::to_string(n) + " argument(s), got " +
                                std::to_string(args.size()));
    }
}

int small_int(const std::string &ctor, const Q &x, int lo, int hi) {
    if (denominator(x) != 1 || x < lo || x > hi) {
        throw PreconditionError(ctor + ": argument must be an integer in [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "]");
    }
    return numerator(x).convert_to<int>();
}

Vec<Q> coords_from(const std::vector<Q> &args) {
    Vec<Q> v(static_cast<Eigen::Index>(args.size()));
    for (size_t i = 0; i < args.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = args[i];
    }
    return v;
}

DevicePrototype state_prototype(const TheorySpec &theory, const std::string &ctor, const SystemList &out, Vec<Q> v) {
    if (v.size() != total_dim(out)) {
        throw PreconditionError(ctor + ": state has dimension " + std::to_string(v.size()) + " but the output register has " +
                                std::to_string(total_dim(out)));
    }
    if (!membership(theory, GVector<Q>{out, v, std::nullopt})) {
        throw PreconditionError(ctor + ": not a physical normalised state of theory '" + theory.name + "'");
    }
    return {{}, out, {Mat<Q>(v)}, {}};
}

/// Same single-system state on every output wire.
Vec<Q> per_wire(const SystemList &out, const std::function<Vec<Q>(const SystemType &)> &make) {
    Mat<Q> v = Mat<Q>::Ones(1, 1);
    for (const auto &t : out) {
        v = kron<Q>(v, Mat<Q>(make(t)));
    }
    return v;
}

Vec<Q> quantum_named(const std::string &ctor) {
    if (ctor == "zero") return col({1, 0, 0, 1});
    if (ctor == "one") return col({1, 0, 0, -1});
    if (ctor == "plus") return col({1, 1, 0, 0});
    if (ctor == "minus") return col({1, -1, 0, 0});
    if (ctor == "plusi") return col({1, 0, 1, 0});
    if (ctor == "minusi") return col({1, 0, -1, 0});
    return {};
}

}  // namespace

DevicePrototype make_state(const TheorySpec &theory, const std::string &ctor, const std::vector<Q> &args,
                           const SystemList &out) {
    if (out.empty()) {
        throw PreconditionError(ctor + ": preparation needs at least one output");
    }
    if (static_cast<int>(out.size()) > theory.max_systems) {
        throw GuardError(ctor + ": register larger than the theory's guard");
    }
    for (const auto &t : out) {
        if (!(theory.system(t).type == t)) {
            throw PreconditionError(ctor + ": system type mismatch");
        }
    }
    if (ctor == "coords" || ctor == "state" || ctor == "vertex" || ctor == "gbit" || ctor == "pauli") {
        return state_prototype(theory, ctor, out, coords_from(args));
    }
    if (ctor == "extremal") {
        expect_args(ctor, args, out.size());
        size_t i = 0;
        Vec<Q> v = per_wire(out, [&](const SystemType &t) {
            const auto &st = theory.system(t).states;
            return st.at(small_int(ctor, args[i++], 0, static_cast<int>(st.size()) - 1));
        });
        return state_prototype(theory, ctor, out, v);
    }
    if (ctor == "mixed") {
        expect_args(ctor, args, 0);
        Vec<Q> v = per_wire(out, [&](const SystemType &t) {
            const auto &st = theory.system(t).states;
            Vec<Q> m = Vec<Q>::Zero(t.dim);
            for (const auto &s : st) {
                m += s;
            }
            return Vec<Q>(m / Q(static_cast<int>(st.size())));
        });
        return state_prototype(theory, ctor, out, v);
    }
    if (ctor == "basis" && theory.name == "classical") {
        expect_args(ctor, args, 1);
        int dim = static_cast<int>(total_dim(out));
        Vec<Q> v = Vec<Q>::Zero(dim);
        v(small_int(ctor, args[0], 0, dim - 1)) = 1;
        return state_prototype(theory, ctor, out, v);
    }
    if (theory.name == "quantum") {
        if (ctor == "basis") {
            expect_args(ctor, args, 1);
            const int d = 1 << out.size();
            int k = small_int(ctor, args[0], 0, d - 1);
            CMat<Q> rho = CMat<Q>::zero(d);
            rho.re(k, k) = 1;
            return state_prototype(theory, ctor, out, embed_density(rho));
        }
        if (quantum_named(ctor).size() != 0) {
            expect_args(ctor, args, 0);
            return state_prototype(theory, ctor, out, per_wire(out, [&](const SystemType &) { return quantum_named(ctor); }));
        }
    }
    if (theory.name == "boxworld") {
        if (ctor == "pr") {
            expect_args(ctor, args, 0);
            return state_prototype(theory, ctor, out, pr_state().coords);
        }
        if (ctor == "rho") {
            const int n = static_cast<int>(out.size());
            std::vector<uint8_t> bits;
            for (const auto &a : args) {
                bits.push_back(static_cast<uint8_t>(small_int(ctor, a, 0, 1)));
            }
            if (bits.size() != (size_t{1} << n)) {
                throw PreconditionError("rho: expected 2^n truth-table bits for n = " + std::to_string(n) + " outputs");
            }
            return state_prototype(theory, ctor, out, rho_f(TruthTable(n, bits)).coords);
        }
    }
    throw UnsupportedError("unknown state constructor '" + ctor + "' in theory '" + theory.name + "'");
}

DevicePrototype make_gate(const TheorySpec &theory, const std::string &name, const SystemList &in) {
    for (const auto &g : theory.generators) {
        if (g.name != name) {
            continue;
        }
        if (g.systems.size() != in.size()) {
            throw WiringError("gate " + name + " acts on " + std::to_string(g.systems.size()) + " system(s), got " +
                              std::to_string(in.size()));
        }
        for (size_t k = 0; k < in.size(); ++k) {
            if (g.systems[k] != in[k].name) {
                throw WiringError("type mismatch: gate " + name + " expects " + g.systems[k] + " on port " +
                                  std::to_string(k) + ", wire is " + in[k].name);
            }
        }
        return {in, in, {g.matrix}, {}};
    }
    throw UnsupportedError("unknown gate '" + name + "' in theory '" + theory.name + "'");
}

DevicePrototype make_measurement(const TheorySpec &theory, const std::string &ctor, const std::vector<Q> &args,
                                 const SystemList &in) {
    if (in.empty()) {
        throw PreconditionError(ctor + ": measurement needs at least one input");
    }
    for (const auto &t : in) {
        if (!(theory.system(t).type == t)) {
            throw PreconditionError(ctor + ": system type mismatch");
        }
    }
    if (ctor == "unit") {
        expect_args(ctor, args, 0);
        return {in, {}, {Mat<Q>(theory.unit(in))}, {}};
    }
    // One measurement per wire, combined as a product.
    std::vector<const Measurement *> parts;
    std::vector<Measurement> owned;
    owned.reserve(in.size());
    auto by_name = [&](const SystemType &t, const std::string &mname) -> const Measurement * {
        for (const auto &m : theory.system(t).measurements) {
            if (m.name == mname) {
                return &m;
            }
        }
        return nullptr;
    };
    if (ctor == "fiducial" && theory.name == "boxworld") {
        if (args.size() != 1 && args.size() != in.size()) {
            throw PreconditionError("fiducial: expected one setting, or one per wire");
        }
        for (size_t k = 0; k < in.size(); ++k) {
            int x = small_int(ctor, args.size() == 1 ? args[0] : args[k], 0, 1);
            parts.push_back(by_name(in[k], "fiducial" + std::to_string(x)));
        }
    } else if (ctor == "measurement") {
        if (args.size() != 1 && args.size() != in.size()) {
            throw PreconditionError("measurement: expected one index, or one per wire");
        }
        for (size_t k = 0; k < in.size(); ++k) {
            const auto &ms = theory.system(in[k]).measurements;
            int i = small_int(ctor, args.size() == 1 ? args[0] : args[k], 0, static_cast<int>(ms.size()) - 1);
            parts.push_back(&ms[i]);
        }
    } else if (ctor == "projector" && theory.name == "quantum") {
        if (in.size() != 1) {
            throw PreconditionError("projector: acts on a single qubit");
        }
        expect_args(ctor, args, 4);
        Vec<Q> r = coords_from(args);
        if (!membership(theory, GVector<Q>{in, r, std::nullopt})) {
            throw PreconditionError("projector: coordinates are not a qubit state");
        }
        RowVec<Q> e = r.transpose() / Q(2);
        owned.push_back({"projector", {e, theory.unit(in) - e}});
        parts.push_back(&owned.back());
    } else {
        expect_args(ctor, args, 0);
        for (const auto &t : in) {
            parts.push_back(by_name(t, ctor));
        }
    }
    for (const auto *p : parts) {
        if (p == nullptr) {
            throw UnsupportedError("unknown measurement '" + ctor + "' in theory '" + theory.name + "'");
        }
    }
    DevicePrototype proto{in, {}, {Mat<Q>::Ones(1, 1)}, {}};
    for (const auto *p : parts) {
        std::vector<Mat<Q>> next;
        for (const auto &prev : proto.outcomes) {
            for (const auto &e : p->effects) {
                next.push_back(kron<Q>(prev, Mat<Q>(e)));
            }
        }
        proto.outcomes = std::move(next);
        proto.factor_radices.push_back(static_cast<int>(p->effects.size()));
    }
    return proto;
}

}  // namespace gpt
