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


#include <complex>
#include <fstream>
#include <random>

#include <Eigen/Eigenvalues>

#include "gptlab/core.h"
#include "gptlab/protocols.h"
#include "gptlab/quantum.h"
#include "gptlab/theories.h"
#include "gtest/gtest.h"

using namespace gpt;
using Q = Rational;

namespace {

Vec<Q> col(std::initializer_list<Q> xs) {
    Vec<Q> v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (const auto &x : xs) {
        v(i++) = x;
    }
    return v;
}

GVector<Q> state(const SystemList &s, Vec<Q> v) {
    return {s, std::move(v), std::nullopt};
}

const SystemType kBit{"bit", 2};
const SystemType kQubit{"qubit", 4};
const SystemType kGbit{"gbit", 3};

TruthTable random_table(int n, std::mt19937_64 &rng) {
    std::vector<uint8_t> bits(size_t{1} << n);
    for (auto &b : bits) {
        b = static_cast<uint8_t>(rng() & 1);
    }
    return TruthTable(n, bits);
}

}  // namespace

TEST(classical, bit_conventions) {
    TheorySpec t = classical_theory(2);
    const auto &s = t.system(kBit);
    ASSERT_EQ(s.states.size(), 2u);
    EXPECT_EQ(s.states[0], col({1, 0}));
    EXPECT_EQ(s.states[1], col({0, 1}));
    EXPECT_EQ(s.unit, RowVec<Q>::Ones(2));
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            EXPECT_EQ(s.effects[i].dot(s.states[j].transpose()), i == j ? 1 : 0);
        }
    }
    Vec<Q> mixed = col({Q(1, 2), Q(1, 2)});
    for (const auto &g : t.generators) {
        if (g.systems.size() == 1) {
            EXPECT_EQ(Vec<Q>(g.matrix * mixed), mixed) << g.name;
        }
    }
}

TEST(classical, level_count) {
    EXPECT_THROW(classical_theory(1), PreconditionError);
    TheorySpec t = classical_theory(4);
    EXPECT_EQ(t.systems[0].states.size(), 4u);
    // transpositions of four levels
    EXPECT_GE(t.generators.size(), 6u);
}

TEST(quantum, pauli_coordinates) {
    CMat<Q> z0 = CMat<Q>::zero(2);
    z0.re(0, 0) = 1;
    EXPECT_EQ(embed_quantum_state(z0).coords, col({1, 0, 0, 1}));
    CMat<Q> mixed = CMat<Q>::identity(2).scaled(Q(1, 2));
    EXPECT_EQ(embed_quantum_state(mixed).coords, col({1, 0, 0, 0}));
}

TEST(quantum, cnot_against_complex_conjugation) {
    TheorySpec t = quantum_theory(2);
    const auto *cnot = t.generator("CNOT");
    ASSERT_NE(cnot, nullptr);
    Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
    u(0, 0) = u(1, 1) = u(2, 3) = u(3, 2) = 1;
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    rho(2, 2) = 1;  // |10><10|
    Eigen::Matrix4cd out = u * rho * u.adjoint();
    ASSERT_NEAR(std::abs(out(3, 3) - 1.0), 0.0, 1e-12);

    CMat<Q> in = CMat<Q>::zero(4), expected = CMat<Q>::zero(4);
    in.re(2, 2) = 1;
    expected.re(3, 3) = 1;
    Vec<Q> moved = cnot->matrix * embed_quantum_state(in).coords;
    EXPECT_EQ(moved, embed_quantum_state(expected).coords);
}

TEST(quantum, embed_extract_bijection) {
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 50; ++rep) {
        const int d = rep % 2 ? 4 : 2;
        CMat<Q> h = CMat<Q>::zero(d);
        for (int i = 0; i < d; ++i) {
            h.re(i, i) = Q(static_cast<int>(rng() % 7) - 3, 1 + static_cast<int>(rng() % 3));
            for (int j = i + 1; j < d; ++j) {
                Q a(static_cast<int>(rng() % 9) - 4, 1 + static_cast<int>(rng() % 4));
                Q b(static_cast<int>(rng() % 9) - 4, 1 + static_cast<int>(rng() % 4));
                h.re(i, j) = h.re(j, i) = a;
                h.im(i, j) = b;
                h.im(j, i) = -b;
            }
        }
        CMat<Q> back = extract_density<Q>(embed_density(h));
        EXPECT_EQ(back.re, h.re);
        EXPECT_EQ(back.im, h.im);
    }
}

TEST(quantum, register_guard) {
    EXPECT_THROW(quantum_theory(6), GuardError);
}

TEST(boxworld, fiducial_on_vertex) {
    GVector<Q> v = state({kGbit}, col({1, 1, 1}));
    EXPECT_EQ(gbit_effect(0, 0).dot(v.coords.transpose()), 1);
    EXPECT_EQ(gbit_effect(0, 1).dot(v.coords.transpose()), 0);
    for (int x = 0; x < 2; ++x) {
        EXPECT_EQ(RowVec<Q>(gbit_effect(x, 0) + gbit_effect(x, 1)), boxworld_theory().systems[0].unit);
    }
}

TEST(boxworld, vertices_are_deterministic) {
    TheorySpec t = boxworld_theory();
    const auto &vs = t.systems[0].states;
    ASSERT_EQ(vs.size(), 4u);
    for (const auto &v : vs) {
        for (int x = 0; x < 2; ++x) {
            for (int a = 0; a < 2; ++a) {
                Q p = gbit_effect(x, a).dot(v.transpose());
                EXPECT_TRUE(p == 0 || p == 1);
            }
        }
    }
}

TEST(boxworld, pr_table) {
    GVector<Q> pr = pr_state();
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    Q p = gbit_product_effect({x, y}, {a, b}).dot(pr.coords.transpose());
                    EXPECT_EQ(p, (a ^ b) == (x & y) ? Q(1, 2) : Q(0));
                }
            }
        }
    }
}

TEST(boxworld, pr_marginal_is_mixed) {
    GVector<Q> pr = pr_state();
    RowVec<Q> u = boxworld_theory().systems[0].unit;
    // contract the second gbit with u
    Vec<Q> marginal = Vec<Q>::Zero(3);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            marginal(i) += pr.coords(3 * i + j) * u(j);
        }
    }
    EXPECT_EQ(marginal, col({1, 0, 0}));
}

TEST(rho_f, and_is_pr) {
    EXPECT_EQ(rho_f(TruthTable(2, {0, 0, 0, 1})).coords, pr_state().coords);
}

TEST(rho_f, constant_zero_single_party) {
    EXPECT_EQ(rho_f(TruthTable(1, {0, 0})).coords, col({1, 1, 1}));
}

TEST(rho_f, xor3_full_table) {
    TruthTable f(3, {0, 1, 1, 0, 1, 0, 0, 1});
    GVector<Q> rho = rho_f(f);
    for (int x = 0; x < 8; ++x) {
        std::vector<int> xs{(x >> 2) & 1, (x >> 1) & 1, x & 1};
        for (int a = 0; a < 8; ++a) {
            std::vector<int> as{(a >> 2) & 1, (a >> 1) & 1, a & 1};
            Q p = gbit_product_effect(xs, as).dot(rho.coords.transpose());
            int parity = as[0] ^ as[1] ^ as[2];
            EXPECT_EQ(p, parity == f(x) ? Q(1, 4) : Q(0));
        }
    }
}

TEST(rho_f, random_tables_through_circuits) {
    std::mt19937_64 rng(8);
    for (int n = 1; n <= 6; ++n) {
        for (int rep = 0; rep < 3; ++rep) {
            TruthTable f = random_table(n, rng);
            std::vector<int> x(n);
            uint32_t xi = 0;
            for (int j = 0; j < n; ++j) {
                x[j] = static_cast<int>(rng() & 1);
                xi = (xi << 1) | static_cast<uint32_t>(x[j]);
            }
            auto d = evaluate_closed(advice_parity_circuit(f, x));
            const Q mass = Q(1, 1 << (n - 1));
            for (const auto &[z, p] : d.entries) {
                int parity = 0;
                for (int a : z) {
                    parity ^= a;
                }
                EXPECT_EQ(p, parity == static_cast<int>(f(xi)) ? mass : Q(0));
            }
        }
    }
}

TEST(rho_f, guards) {
    EXPECT_THROW(rho_f(TruthTable(0, {0})), GuardError);
    EXPECT_THROW(TruthTable(2, {0, 1, 1}), PreconditionError);
}

TEST(membership, examples) {
    EXPECT_TRUE(membership(classical_theory(2), state({kBit}, col({Q(1, 2), Q(1, 2)}))));
    EXPECT_FALSE(membership(quantum_theory(1), state({kQubit}, col({1, 1, 1, 1}))));
    EXPECT_TRUE(membership(boxworld_theory(), state({kGbit}, col({1, 1, -1}))));
    EXPECT_FALSE(membership(boxworld_theory(), state({kGbit}, col({1, 2, 0}))));
    EXPECT_FALSE(membership(classical_theory(2), state({kBit}, col({Q(3, 2), Q(-1, 2)}))));
}

TEST(membership, qubit_against_eigenvalues) {
    std::mt19937_64 rng(21);
    TheorySpec t = quantum_theory(1);
    for (int rep = 0; rep < 200; ++rep) {
        Vec<Q> r(4);
        r(0) = 1;
        for (int k = 1; k < 4; ++k) {
            r(k) = Q(static_cast<int>(rng() % 13) - 6, 6);
        }
        Eigen::Matrix2cd rho;
        const std::complex<double> i(0, 1);
        double x = to_double(r(1)), y = to_double(r(2)), z = to_double(r(3));
        rho << 1 + z, x - i * y, x + i * y, 1 - z;
        rho /= 2;
        double lo = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd>(rho).eigenvalues().minCoeff();
        EXPECT_EQ(membership(t, state({kQubit}, r)), lo >= -1e-12) << x << " " << y << " " << z;
    }
}

TEST(membership, products_stay_physical) {
    std::mt19937_64 rng(4);
    for (const char *name : {"classical", "quantum", "boxworld"}) {
        TheorySpec t = builtin_theory(name);
        const auto &st = t.systems[0].states;
        for (int rep = 0; rep < 20; ++rep) {
            // random mixtures of two extremal states per side
            auto mix = [&]() {
                Q w(static_cast<int>(rng() % 5), 4);
                Vec<Q> v = st[rng() % st.size()] * w + st[rng() % st.size()] * (1 - w);
                return state({t.systems[0].type}, v);
            };
            auto a = mix(), b = mix();
            ASSERT_TRUE(membership(t, a));
            EXPECT_TRUE(membership(t, tensor(a, b))) << name;
        }
    }
}

TEST(theory, measurements_sum_to_unit) {
    for (const char *name : {"classical", "quantum", "boxworld"}) {
        TheorySpec t = builtin_theory(name);
        for (const auto &s : t.systems) {
            for (const auto &m : s.measurements) {
                RowVec<Q> sum = RowVec<Q>::Zero(s.type.dim);
                for (const auto &e : m.effects) {
                    sum += e;
                }
                EXPECT_EQ(sum, s.unit) << name << " " << m.name;
            }
            for (const auto &v : s.states) {
                EXPECT_EQ(s.unit.dot(v.transpose()), 1) << name;
            }
        }
    }
    EXPECT_THROW(builtin_theory("hyperbolic"), UnsupportedError);
}

TEST(theory, json_round_trip) {
    for (const char *name : {"classical", "quantum", "boxworld"}) {
        TheorySpec t = builtin_theory(name);
        auto j = theory_to_json(t);
        TheorySpec back = theory_from_json(j);
        EXPECT_EQ(theory_to_json(back), j) << name;
        EXPECT_EQ(back.membership, t.membership);
        EXPECT_EQ(back.systems[0].states, t.systems[0].states);
    }
}

TEST(theory, json_rejects_floats) {
    auto j = theory_to_json(classical_theory(2));
    j["unit"]["bit"][0] = 0.5;
    EXPECT_THROW(theory_from_json(j), std::invalid_argument);
}

TEST(constructors, errors) {
    TheorySpec box = boxworld_theory();
    EXPECT_THROW(make_state(box, "nonsense", {}, {kGbit}), UnsupportedError);
    EXPECT_THROW(make_state(box, "vertex", {Q(1), Q(2), Q(0)}, {kGbit}), PreconditionError);
    EXPECT_THROW(make_gate(box, "CNOT", {kGbit, kGbit}), UnsupportedError);
    EXPECT_THROW(make_gate(box, "SWAP", {kGbit}), WiringError);
    EXPECT_THROW(make_measurement(box, "fiducial", {Q(2)}, {kGbit}), PreconditionError);
    TheorySpec q = quantum_theory(2);
    EXPECT_THROW(make_measurement(q, "projector", {Q(1), Q(1), Q(1), Q(0)}, {kQubit}), PreconditionError);
}

TEST(theory, shipped_json_matches_builtin) {
    for (const char *name : {"classical", "quantum", "boxworld"}) {
        std::ifstream in(std::string(GPTLAB_FIXTURE_DIR) + "/theories/" + name + ".json");
        ASSERT_TRUE(in) << name;
        auto j = nlohmann::ordered_json::parse(in);
        EXPECT_EQ(theory_to_json(theory_from_json(j)), theory_to_json(builtin_theory(name))) << name;
    }
}
