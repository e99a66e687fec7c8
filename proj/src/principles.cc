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

#include "gptlab/principles.h"

#include <cmath>
#include <deque>
#include <sstream>
#include <unordered_set>

namespace gpt {

using Q = Rational;

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass:
            return "pass";
        case Verdict::Fail:
            return "fail";
        case Verdict::Inconclusive:
            return "inconclusive";
    }
    return "unknown";
}

namespace {

std::string vec_str(const Mat<Q> &m) {
    std::string s = "(";
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        s += (i ? "," : "") + to_string(m.data()[i]);
    }
    return s + ")";
}

}  // namespace

CausalityReport check_causality(const TheorySpec &theory) {
    CausalityReport rep;
    for (const auto &sys : theory.systems) {
        const std::string where = "system '" + sys.type.name + "'";
        for (size_t k = 0; k < sys.states.size(); ++k) {
            if (sys.unit.dot(sys.states[k].transpose()) != 1) {
                rep.witnesses.push_back(where + ": extremal state " + std::to_string(k) + " is not normalised");
            }
        }
        std::vector<RowVec<Q>> sums;
        for (const auto &m : sys.measurements) {
            RowVec<Q> sum = RowVec<Q>::Zero(sys.type.dim);
            for (const auto &e : m.effects) {
                sum += e;
            }
            sums.push_back(sum);
            if (sum != sys.unit) {
                rep.witnesses.push_back(where + ": measurement '" + m.name + "' sums to " + vec_str(sum) +
                                        " instead of the unit effect " + vec_str(sys.unit));
            }
        }
        // Preparation marginals: the total probability of any measurement on
        // each extremal state must not depend on which measurement is chosen.
        for (size_t k = 0; k < sys.states.size(); ++k) {
            for (size_t a = 0; a < sums.size(); ++a) {
                for (size_t b = a + 1; b < sums.size(); ++b) {
                    Q pa = sums[a].dot(sys.states[k].transpose());
                    Q pb = sums[b].dot(sys.states[k].transpose());
                    if (pa != pb) {
                        rep.witnesses.push_back(where + ": state " + std::to_string(k) + " has marginal " + to_string(pa) +
                                                " under '" + sys.measurements[a].name + "' but " + to_string(pb) +
                                                " under '" + sys.measurements[b].name + "'");
                    }
                }
            }
        }
    }
    rep.verdict = rep.witnesses.empty() ? Verdict::Pass : Verdict::Fail;
    return rep;
}

int exact_rank(const std::vector<Vec<Q>> &vectors) {
    if (vectors.empty()) {
        return 0;
    }
    const auto cols = vectors[0].size();
    std::vector<Vec<Q>> rows = vectors;
    int rank = 0;
    for (Eigen::Index c = 0; c < cols && rank < static_cast<int>(rows.size()); ++c) {
        int piv = -1;
        for (int r = rank; r < static_cast<int>(rows.size()); ++r) {
            if (rows[r](c) != 0) {
                piv = r;
                break;
            }
        }
        if (piv < 0) {
            continue;
        }
        std::swap(rows[rank], rows[piv]);
        for (int r = rank + 1; r < static_cast<int>(rows.size()); ++r) {
            if (rows[r](c) != 0) {
                Q f = rows[r](c) / rows[rank](c);
                rows[r] -= f * rows[rank];
            }
        }
        ++rank;
    }
    return rank;
}

LocalityReport check_tomographic_locality(const TheorySpec &theory, const SystemType &a, const SystemType &b) {
    const auto &sa = theory.system(a);
    const auto &sb = theory.system(b);
    std::vector<Vec<Q>> states, effects;
    for (const auto &x : sa.states) {
        for (const auto &y : sb.states) {
            states.push_back(Eigen::kroneckerProduct(x, y).eval());
        }
    }
    for (const auto &x : sa.effects) {
        for (const auto &y : sb.effects) {
            effects.push_back(Eigen::kroneckerProduct(x, y).eval().transpose());
        }
    }
    LocalityReport rep;
    rep.expected = a.dim * b.dim;
    rep.state_rank = exact_rank(states);
    rep.effect_rank = exact_rank(effects);
    rep.verdict = rep.state_rank == rep.expected && rep.effect_rank == rep.expected ? Verdict::Pass : Verdict::Fail;
    return rep;
}

std::vector<RowVec<Q>> product_effects(const TheorySpec &theory, const SystemList &systems) {
    std::vector<Mat<Q>> acc{Mat<Q>::Ones(1, 1)};
    for (const auto &t : systems) {
        std::vector<Mat<Q>> next;
        for (const auto &p : acc) {
            for (const auto &e : theory.system(t).effects) {
                next.push_back(kron<Q>(p, Mat<Q>(e)));
            }
        }
        acc = std::move(next);
    }
    std::vector<RowVec<Q>> out;
    for (auto &m : acc) {
        out.emplace_back(m);
    }
    return out;
}

DistinguishResult find_distinguishing_measurement(const TheorySpec &theory, const SystemList &systems,
                                                  const std::vector<Vec<Q>> &states) {
    if (states.empty() || states.size() > kMaxDistinguishStates) {
        throw GuardError("find_distinguishing_measurement: between 1 and 8 states");
    }
    const Eigen::Index dim = total_dim(systems);
    for (const auto &s : states) {
        if (s.size() != dim) {
            throw PreconditionError("find_distinguishing_measurement: state has the wrong dimension");
        }
    }
    auto effects = product_effects(theory, systems);
    const int k = static_cast<int>(states.size());
    const int m = static_cast<int>(effects.size());
    if (static_cast<long long>(k) * m > 4096) {
        throw GuardError("find_distinguishing_measurement: LP too large");
    }
    RowVec<Q> u = theory.unit(systems);
    DistinguishResult res;
    LPProblem &lp = res.problem;
    lp.num_vars = k * m;
    auto var = [&](int i, int l) { return i * m + l; };
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            std::vector<Q> row(lp.num_vars);
            for (int l = 0; l < m; ++l) {
                row[var(i, l)] = effects[l].dot(states[j].transpose());
            }
            lp.add(std::move(row), Sense::Equal, Q(i == j ? 1 : 0));
        }
    }
    for (Eigen::Index t = 0; t < dim; ++t) {
        std::vector<Q> row(lp.num_vars);
        for (int i = 0; i < k; ++i) {
            for (int l = 0; l < m; ++l) {
                row[var(i, l)] = effects[l](t);
            }
        }
        lp.add(std::move(row), Sense::Equal, u(t));
    }
    LPResult r = solve(lp);
    if (r.status == LPStatus::Infeasible) {
        res.feasible = false;
        res.farkas = r.farkas;
        res.certificate_verified = verify_farkas(lp, r.farkas);
        return res;
    }
    res.feasible = true;
    res.certificate_verified = verify_feasible(lp, r.x);
    for (int i = 0; i < k; ++i) {
        RowVec<Q> e = RowVec<Q>::Zero(dim);
        for (int l = 0; l < m; ++l) {
            if (r.x[var(i, l)] != 0) {
                e += r.x[var(i, l)] * effects[l];
            }
        }
        res.effects.push_back(e);
    }
    return res;
}

MixedStateReport completely_mixed(const TheorySpec &theory, const SystemType &system) {
    const auto &spec = theory.system(system);
    if (spec.states.empty()) {
        throw PreconditionError("completely_mixed: no extremal states listed");
    }
    MixedStateReport rep;
    Vec<Q> c = Vec<Q>::Zero(system.dim);
    for (const auto &s : spec.states) {
        c += s;
    }
    c /= Q(static_cast<int>(spec.states.size()));
    rep.state = {{system}, c, std::nullopt};
    for (const auto &g : theory.generators) {
        if (g.systems.size() == 1 && g.systems[0] == system.name && g.matrix * c != c) {
            rep.invariant = false;
            rep.non_invariant_generators.push_back(g.name);
        }
    }
    for (const auto &rho : spec.states) {
        if (theory.membership == MembershipKind::Psd) {
            // I/d - p rho is PSD iff p <= 1 / (d lambda_max(rho)).
            const int d = 1 << qubits_for_dim(static_cast<Eigen::Index>(std::llround(std::sqrt(double(system.dim)))));
            Q purity = rho.squaredNorm() / Q(d);
            if (purity == 1) {
                rep.refinement.push_back(Q(1, d));
            } else {
                double lmax = density_eigenvalues<Q>(rho).maxCoeff();
                rep.refinement.push_back(rational_from_double(1.0 / (d * lmax)));
            }
            continue;
        }
        LPProblem lp;
        const int k = static_cast<int>(spec.states.size());
        lp.num_vars = 1 + k;
        for (Eigen::Index t = 0; t < system.dim; ++t) {
            std::vector<Q> row(lp.num_vars);
            row[0] = rho(t);
            for (int j = 0; j < k; ++j) {
                row[1 + j] = spec.states[j](t);
            }
            lp.add(std::move(row), Sense::Equal, c(t));
        }
        std::vector<Q> obj(lp.num_vars);
        obj[0] = 1;
        lp.objective = obj;
        LPResult r = solve(lp);
        rep.refinement.push_back(r.status == LPStatus::Optimal ? r.objective : Q(0));
    }
    return rep;
}

namespace {

std::string matrix_key(const Mat<Q> &m) {
    std::string key;
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        key += to_string(m.data()[i]);
        key += ',';
    }
    return key;
}

Mat<Q> embed_operator(const SystemList &systems, const std::vector<int> &positions, const Mat<Q> &op) {
    std::vector<Wire> wires;
    std::vector<int> live;
    for (size_t k = 0; k < systems.size(); ++k) {
        wires.push_back({"w" + std::to_string(k), systems[k]});
        live.push_back(static_cast<int>(k));
    }
    Eigen::Index d = total_dim(systems);
    Mat<Q> g = Mat<Q>::Identity(d, d);
    detail::apply_local(g, live, wires, positions, op, positions);
    detail::canonicalize(g, live, wires);
    return g;
}

void placements(const TheorySpec &theory, const SystemList &systems, const Generator &g, std::vector<int> &cur,
                std::vector<std::vector<int>> &out) {
    if (cur.size() == g.systems.size()) {
        out.push_back(cur);
        return;
    }
    for (int p = 0; p < static_cast<int>(systems.size()); ++p) {
        if (std::find(cur.begin(), cur.end(), p) != cur.end() || systems[p].name != g.systems[cur.size()]) {
            continue;
        }
        cur.push_back(p);
        placements(theory, systems, g, cur, out);
        cur.pop_back();
    }
}

}  // namespace

std::vector<std::pair<std::string, Mat<Q>>> register_generators(const TheorySpec &theory, const SystemList &systems) {
    std::vector<std::pair<std::string, Mat<Q>>> out;
    std::unordered_set<std::string> seen;
    for (const auto &g : theory.generators) {
        std::vector<std::vector<int>> where;
        std::vector<int> cur;
        placements(theory, systems, g, cur, where);
        for (const auto &pos : where) {
            Mat<Q> m = embed_operator(systems, pos, g.matrix);
            if (!seen.insert(matrix_key(m)).second) {
                continue;
            }
            std::string name = g.name;
            if (systems.size() > 1) {
                name += "@";
                for (size_t k = 0; k < pos.size(); ++k) {
                    name += (k ? "," : "") + std::to_string(pos[k]);
                }
            }
            out.emplace_back(std::move(name), std::move(m));
        }
    }
    return out;
}

SymmetryResult search_symmetry(const TheorySpec &theory, const SystemList &systems, const std::vector<Vec<Q>> &src,
                               const std::vector<Vec<Q>> &dst, int depth) {
    if (src.size() != dst.size()) {
        throw PreconditionError("search_symmetry: source and target tuples differ in length");
    }
    if (depth < 0 || depth > kMaxSymmetryDepth) {
        throw GuardError("search_symmetry: depth must be in [0, 12]");
    }
    auto gens = register_generators(theory, systems);
    const Eigen::Index d = total_dim(systems);
    struct Node {
        Mat<Q> m;
        std::vector<std::string> word;
    };
    auto maps = [&](const Mat<Q> &m) {
        for (size_t i = 0; i < src.size(); ++i) {
            if (m * src[i] != dst[i]) {
                return false;
            }
        }
        return true;
    };
    SymmetryResult res;
    std::unordered_set<std::string> visited;
    std::vector<Node> layer{{Mat<Q>::Identity(d, d), {}}};
    visited.insert(matrix_key(layer[0].m));
    for (int level = 0; level <= depth; ++level) {
        res.depth = level;
        for (const auto &node : layer) {
            ++res.elements_visited;
            if (maps(node.m)) {
                res.found = true;
                res.word = node.word;
                res.transform = {systems, systems, node.m};
                return res;
            }
        }
        if (level == depth) {
            break;
        }
        std::vector<Node> next;
        for (const auto &node : layer) {
            for (const auto &[name, g] : gens) {
                Mat<Q> m = g * node.m;
                if (visited.insert(matrix_key(m)).second) {
                    auto w = node.word;
                    w.push_back(name);
                    next.push_back({std::move(m), std::move(w)});
                }
            }
        }
        if (next.empty()) {
            res.group_exhausted = true;
            return res;
        }
        layer = std::move(next);
    }
    return res;
}

NormReport hermitian_norms(const Eigen::MatrixXcd &v) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(v, Eigen::EigenvaluesOnly);
    double pos = 0, neg = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        double l = es.eigenvalues()(i);
        (l > 0 ? pos : neg) += l;
    }
    NormReport rep;
    rep.phy_norm = 2 * std::max(pos, -neg);
    rep.e_norm = std::sqrt(std::max(0.0, (v * v).trace().real()));
    const double d = static_cast<double>(v.rows());
    rep.c_constant = std::sqrt(d);
    rep.mixed_e_norm = 1 / std::sqrt(d);
    return rep;
}

NormReport norms(const TheorySpec &theory, const GVector<double> &v) {
    for (const auto &t : v.systems) {
        theory.system(t);
    }
    if (v.coords.size() != total_dim(v.systems)) {
        throw PreconditionError("norms: malformed vector");
    }
    NormReport rep;
    switch (theory.membership) {
        case MembershipKind::Psd:
            return hermitian_norms(extract_density<double>(v.coords).to_complex());
        case MembershipKind::Simplex: {
            // Extreme effects of the simplex are the 0/1 vectors.
            double pos = 0, neg = 0;
            for (Eigen::Index i = 0; i < v.coords.size(); ++i) {
                (v.coords(i) > 0 ? pos : neg) += v.coords(i);
            }
            rep.phy_norm = 2 * std::max(pos, -neg);
            return rep;
        }
        case MembershipKind::Polytope: {
            if (v.systems.size() != 1) {
                throw UnsupportedError("norms: composite polytope effect sets are not enumerated");
            }
            const auto &spec = theory.system(v.systems[0]);
            double best = std::abs(spec.unit.cast<double>().dot(v.coords.transpose()));
            for (const auto &e : spec.effects) {
                best = std::max(best, std::abs(e.cast<double>().dot(v.coords.transpose())));
            }
            rep.phy_norm = 2 * best;
            return rep;
        }
    }
    throw UnsupportedError("norms: unknown theory tag");
}

std::vector<PrincipleEntry> verify_theory(const TheorySpec &theory, int symmetry_depth) {
    std::vector<PrincipleEntry> out;
    {
        auto c = check_causality(theory);
        std::string detail = c.witnesses.empty() ? "all measurements sum to the unit effect" : c.witnesses.front();
        out.push_back({"causality", c.verdict, detail});
    }
    for (const auto &sys : theory.systems) {
        const SystemType &t = sys.type;
        const std::string tag = " [" + t.name + "]";
        auto loc = check_tomographic_locality(theory, t, t);
        std::ostringstream ld;
        ld << "product-state rank " << loc.state_rank << ", product-effect rank " << loc.effect_rank << ", expected "
           << loc.expected;
        out.push_back({"tomographic_locality" + tag, loc.verdict, ld.str()});

        // Perfectly distinguishable pairs of extremal states.
        std::vector<std::pair<int, int>> pairs;
        const int ns = static_cast<int>(sys.states.size());
        for (int i = 0; i < ns && pairs.size() < 32; ++i) {
            for (int j = 0; j < ns && pairs.size() < 32; ++j) {
                if (i != j && find_distinguishing_measurement(theory, {t}, {sys.states[i], sys.states[j]}).feasible) {
                    pairs.emplace_back(i, j);
                }
            }
        }
        out.push_back({"distinguishability" + tag, pairs.empty() ? Verdict::Fail : Verdict::Pass,
                       std::to_string(pairs.size()) + " ordered pairs of extremal states are perfectly distinguishable"});

        auto mixed = completely_mixed(theory, t);
        bool refines = std::all_of(mixed.refinement.begin(), mixed.refinement.end(), [](const Q &p) { return p > 0; });
        out.push_back({"completely_mixed" + tag, mixed.invariant && refines ? Verdict::Pass : Verdict::Fail,
                       "state " + vec_str(mixed.state.coords) + (mixed.invariant ? ", invariant" : ", not invariant") +
                           (refines ? ", refined by every extremal state" : ", some extremal state does not refine it")});

        if (pairs.empty()) {
            out.push_back({"bit_symmetry" + tag, Verdict::Inconclusive, "no distinguishable pair"});
        } else {
            Verdict v = Verdict::Pass;
            std::string detail = "every distinguishable pair reached from the first";
            auto [a0, b0] = pairs[0];
            for (auto [a, b] : pairs) {
                auto r = search_symmetry(theory, {t}, {sys.states[a0], sys.states[b0]}, {sys.states[a], sys.states[b]},
                                         symmetry_depth);
                if (!r.found) {
                    v = r.group_exhausted ? Verdict::Fail : Verdict::Inconclusive;
                    detail = "no reversible map sends pair (" + std::to_string(a0) + "," + std::to_string(b0) + ") to (" +
                             std::to_string(a) + "," + std::to_string(b) + ")" +
                             (r.group_exhausted ? ": generated group exhausted (refuted)"
                                                : ": depth " + std::to_string(symmetry_depth) + " exhausted");
                    if (r.group_exhausted) {
                        break;
                    }
                }
            }
            out.push_back({"bit_symmetry" + tag, v, detail});
        }
        out.push_back({"self_duality" + tag,
                       theory.membership == MembershipKind::Psd ? Verdict::Pass : Verdict::Inconclusive,
                       theory.membership == MembershipKind::Psd ? "trace pairing, [rho,rho] = 1 on pure states"
                                                                : "no self-dual pairing provided"});
    }
    return out;
}

}  // namespace gpt
