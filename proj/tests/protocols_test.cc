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


#include <random>

#include <Eigen/Eigenvalues>

#include "gptlab/dsl.h"
#include "gptlab/protocols.h"
#include "gptlab/report.h"
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

RowVec<Q> row(std::initializer_list<Q> xs) {
    return col(xs).transpose();
}

Circuit<Q> compile(const std::string &text) {
    CircuitAST ast = parse(text);
    return validate(ast, builtin_theory(ast.theory));
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

std::vector<int> bits_of(uint32_t x, int n) {
    std::vector<int> out(n);
    for (int j = 0; j < n; ++j) {
        out[j] = static_cast<int>((x >> (n - 1 - j)) & 1);
    }
    return out;
}

Q binomial_majority(const Q &p, int k) {
    Q total = 0;
    for (int j = k / 2 + 1; j <= k; ++j) {
        Q term = 1;
        for (int i = 0; i < j; ++i) {
            term *= p;
        }
        for (int i = 0; i < k - j; ++i) {
            term *= 1 - p;
        }
        // C(k, j)
        Q c = 1;
        for (int i = 1; i <= j; ++i) {
            c = c * (k - j + i) / i;
        }
        total += c * term;
    }
    return total;
}

}  // namespace

TEST(advice_parity, examples) {
    auto r = advice_parity_eval(TruthTable(2, {0, 0, 0, 1}), {1, 1});
    EXPECT_EQ(r.bit, 1);
    EXPECT_TRUE(r.deterministic);
    for (uint32_t x = 0; x < 8; ++x) {
        EXPECT_EQ(advice_parity_eval(TruthTable(3, std::vector<uint8_t>(8, 0)), bits_of(x, 3)).bit, 0);
    }
}

TEST(advice_parity, exhaustive_small_arity) {
    for (int n = 1; n <= 3; ++n) {
        const uint32_t tables = 1u << (1u << n);
        for (uint32_t t = 0; t < tables; ++t) {
            std::vector<uint8_t> bits(size_t{1} << n);
            for (size_t i = 0; i < bits.size(); ++i) {
                bits[i] = static_cast<uint8_t>((t >> i) & 1);
            }
            TruthTable f(n, bits);
            for (uint32_t x = 0; x < (1u << n); ++x) {
                auto r = advice_parity_eval(f, bits_of(x, n));
                ASSERT_TRUE(r.deterministic);
                ASSERT_EQ(r.bit, static_cast<int>(f(x)));
            }
        }
    }
}

TEST(advice_parity, random_five_bit_tables) {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 4; ++rep) {
        TruthTable f = random_table(5, rng);
        for (uint32_t x = 0; x < 32; ++x) {
            auto r = advice_parity_eval(f, bits_of(x, 5));
            EXPECT_TRUE(r.deterministic);
            EXPECT_EQ(r.bit, static_cast<int>(f(x)));
            EXPECT_EQ(r.support, 16u);
        }
    }
}

TEST(von_neumann, keep_rates) {
    auto half = von_neumann_bit(Q(1, 2), 1000, 1);
    EXPECT_DOUBLE_EQ(half.expected_keep_rate, 0.5);
    auto skew = von_neumann_bit(Q(99, 100), 1000, 1);
    EXPECT_NEAR(skew.expected_keep_rate, 0.0198, 1e-15);
}

TEST(von_neumann, bias_bound) {
    auto r = von_neumann_bit(Q(1, 3), 100000, 9);
    EXPECT_GT(r.kept, 0u);
    EXPECT_LT(std::abs(r.p_hat0 - 0.5), 4 * std::sqrt(1.0 / (4.0 * static_cast<double>(r.kept))));
    EXPECT_TRUE(r.bias_ok);
    EXPECT_TRUE(r.keep_ok);
    EXPECT_EQ(r.bits.size(), r.kept);
}

TEST(von_neumann, deterministic_in_seed) {
    EXPECT_EQ(von_neumann_bit(Q(1, 5), 5000, 3).bits, von_neumann_bit(Q(1, 5), 5000, 3).bits);
    EXPECT_NE(von_neumann_bit(Q(1, 5), 5000, 3).bits, von_neumann_bit(Q(1, 5), 5000, 4).bits);
}

TEST(von_neumann, quantum_source) {
    TheorySpec q = quantum_theory(1);
    // Bloch vector (0, 0, 1/3): P(0) = 2/3
    GVector<Q> y{{kQubit}, col({1, 0, 0, Q(1, 3)}), std::nullopt};
    GEffect<Q> e0{{kQubit}, row({Q(1, 2), 0, 0, Q(1, 2)})};
    auto r = von_neumann_bit(q, y, e0, 20000, 5);
    EXPECT_EQ(r.p0, Q(2, 3));
    EXPECT_NEAR(r.expected_keep_rate, 4.0 / 9.0, 1e-15);
    EXPECT_TRUE(r.bias_ok);
}

TEST(permutation_transform, examples) {
    EXPECT_EQ(permutation_transform({0, 1, 2, 3}, 2).matrix, (Mat<Q>::Identity(4, 4)));
    auto cnot = permutation_transform({0, 1, 3, 2}, 2);
    for (int x = 0; x < 4; ++x) {
        Vec<Q> in = Vec<Q>::Zero(4);
        in(x) = 1;
        Vec<Q> out = cnot.matrix * in;
        int x1 = x >> 1, x2 = x & 1;
        int expected = (x1 << 1) | (x1 ^ x2);
        EXPECT_EQ(out(expected), 1);
    }
    std::mt19937_64 rng(4);
    std::vector<uint32_t> image{0, 1, 2, 3, 4, 5, 6, 7};
    std::shuffle(image.begin(), image.end(), rng);
    std::vector<uint32_t> inverse(8);
    for (uint32_t i = 0; i < 8; ++i) {
        inverse[image[i]] = i;
    }
    auto t = permutation_transform(image, 3);
    auto ti = permutation_transform(inverse, 3);
    EXPECT_EQ(sequential_compose(t, ti).matrix, (Mat<Q>::Identity(8, 8)));
    EXPECT_THROW(permutation_transform({0, 0, 1, 2}, 2), PreconditionError);
}

TEST(measurement_update, examples) {
    TheorySpec q = quantum_theory(1);
    GVector<Q> zero{{kQubit}, col({1, 0, 0, 1}), std::nullopt};
    GEffect<Q> e_zero{{kQubit}, row({Q(1, 2), 0, 0, Q(1, 2)})};
    EXPECT_EQ(measurement_update(q, zero, e_zero).coords, zero.coords);

    GVector<Q> mixed{{kQubit}, col({1, 0, 0, 0}), std::nullopt};
    GEffect<Q> e_plus{{kQubit}, row({Q(1, 2), Q(1, 2), 0, 0})};
    EXPECT_EQ(measurement_update(q, mixed, e_plus).coords, col({1, 1, 0, 0}));

    // 0.9|0><0| + 0.1 I/2 has Bloch vector (0, 0, 9/10)
    GVector<Q> rho{{kQubit}, col({1, 0, 0, Q(9, 10)}), std::nullopt};
    GEffect<Q> e_psi{{kQubit}, row({Q(1, 2), Q(3, 10), 0, Q(2, 5)})};
    EXPECT_EQ(measurement_update(q, rho, e_psi).coords, col({1, Q(3, 5), 0, Q(4, 5)}));

    GVector<Q> one{{kQubit}, col({1, 0, 0, -1}), std::nullopt};
    EXPECT_THROW(measurement_update(q, one, e_zero), PostSelectionError);
}

TEST(measurement_update, repeatability) {
    TheorySpec q = quantum_theory(2);
    for (const auto &s : q.systems[0].states) {
        GVector<Q> rho{{kQubit}, s, std::nullopt};
        GEffect<Q> e{{kQubit}, s.transpose() / Q(2)};
        ASSERT_EQ(e(rho), 1);
        EXPECT_EQ(measurement_update(q, rho, e).coords, rho.coords);
    }
}

TEST(gentle_measurement, sweep) {
    auto r = gentle_measurement_check(10000, 2026);
    EXPECT_EQ(r.trials, 10000u);
    EXPECT_EQ(r.violations, 0u);
    EXPECT_GT(r.zero_eps_cases, 0u);
    EXPECT_TRUE(r.zero_eps_exact);
    EXPECT_LE(r.max_ratio, 1.0 + 1e-9);
    ASSERT_EQ(r.trials_per_dim.size(), 3u);
    for (auto n : r.trials_per_dim) {
        EXPECT_GT(n, 3000u);
    }
}

TEST(amplify, two_thirds_three_copies) {
    auto c = compile("theory classical\nsystem C : bit\nprepare state(1/3, 2/3) -> C\nmeasure basis() C -> c\n"
                     "accept c == 1\n");
    auto a = amplify(c, 3);
    EXPECT_EQ(evaluate_closed(a).probability_of(a.accept), Q(20, 27));
    EXPECT_EQ(majority_tail(Q(2, 3), 3), Q(20, 27));
    EXPECT_EQ(binomial_majority(Q(2, 3), 3), Q(20, 27));
}

TEST(amplify, single_copy_and_symmetry) {
    auto c = compile("theory classical\nsystem C : bit\nprepare state(1/2, 1/2) -> C\nmeasure basis() C -> c\n"
                     "accept c == 1\n");
    auto one = amplify(c, 1);
    EXPECT_EQ(one.devices.size(), c.devices.size());
    for (int k : {3, 5, 7}) {
        auto a = amplify(c, k);
        EXPECT_EQ(evaluate_closed(a).probability_of(a.accept), Q(1, 2)) << k;
    }
    EXPECT_THROW(amplify(c, 2), PreconditionError);
}

TEST(amplify, product_advice_matches_binomial_tail) {
    auto c = compile("theory classical\naux A : bit\nmeasure basis() A -> a\naccept a == 0\n");
    for (const Q &p : {Q(2, 3), Q(1, 5), Q(7, 9)}) {
        GVector<Q> rho{{kBit}, col({p, 1 - p}), std::nullopt};
        for (int k : {1, 3, 5}) {
            auto a = amplify(c, k);
            GVector<Q> adv = rho;
            for (int j = 1; j < k; ++j) {
                adv = tensor(adv, rho);
            }
            EXPECT_EQ(accept_probability(a, adv), binomial_majority(p, k));
        }
    }
}

TEST(distillation, one_step_projection) {
    AdviceFamily fam;
    fam.theory = quantum_theory(1);
    fam.names = {"only"};
    fam.inputs = {compile("theory quantum\naux A : qubit\nmeasure x() A -> a\naccept a == 0\n")};
    auto r = advice_distillation(fam);
    EXPECT_TRUE(r.complete);
    EXPECT_EQ(r.iterations, 1);
    EXPECT_EQ(r.final_state.coords, col({1, 1, 0, 0}));
}

TEST(distillation, plus_family_converges_near_plus) {
    AdviceFamily fam;
    fam.theory = quantum_theory(1);
    fam.names = {"x", "xy"};
    fam.inputs = {compile("theory quantum\naux A : qubit\nmeasure x() A -> a\naccept a == 0\n"),
                  compile("theory quantum\naux A : qubit\nmeasure projector(1, 4/5, 3/5, 0) A -> a\naccept a == 0\n")};
    auto r = advice_distillation(fam);
    ASSERT_TRUE(r.complete);
    EXPECT_LE(r.iterations, r.t_max);
    Eigen::VectorXd diff = (r.final_state.coords - col({1, 1, 0, 0})).cast<double>();
    auto n = norms(fam.theory, GVector<double>{{kQubit}, diff, std::nullopt});
    EXPECT_LE(n.phy_norm, 0.1);
    for (const auto &s : r.final_success) {
        EXPECT_GE(s, Q(2, 3));
    }
}

TEST(distillation, shipped_families) {
    auto good = advice_distillation(load_family(std::string(GPTLAB_FIXTURE_DIR) + "/distill/converging/family.json"));
    EXPECT_TRUE(good.complete);
    auto bad = advice_distillation(load_family(std::string(GPTLAB_FIXTURE_DIR) + "/distill/contradictory/family.json"));
    EXPECT_FALSE(bad.complete);
    EXPECT_EQ(bad.iterations, bad.t_max);
}

TEST(sigma_max, examples) {
    EXPECT_NEAR(sigma_max(Eigen::MatrixXd(Eigen::MatrixXd::Identity(5, 5))), 1.0, 1e-12);
    Eigen::MatrixXd m(2, 2);
    m << 0, 2, 0, 0;
    EXPECT_NEAR(sigma_max(m), 2.0, 1e-12);
    std::mt19937_64 rng(8);
    for (int rep = 0; rep < 20; ++rep) {
        Mat<Q> r = random_rational_matrix(8, 8, rng);
        Eigen::MatrixXd d(8, 8);
        for (int i = 0; i < 8; ++i) {
            for (int j = 0; j < 8; ++j) {
                d(i, j) = to_double(r(i, j));
            }
        }
        double oracle = std::sqrt(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(d.transpose() * d).eigenvalues().maxCoeff());
        EXPECT_NEAR(sigma_max(r), oracle, 1e-9);
        auto b = exact_sigma_bounds(r);
        EXPECT_LE(b.lower, oracle + 1e-9);
        EXPECT_GE(b.upper, oracle - 1e-9);
    }
}

TEST(gap_trace, examples) {
    Mat<Q> d = Mat<Q>::Zero(2, 2);
    d(0, 0) = 2;
    d(1, 1) = 1;
    EXPECT_EQ(gap_trace(d, 2), 17);
    for (int k : {1, 3, 7}) {
        EXPECT_EQ(gap_trace(Mat<Q>(Mat<Q>::Identity(5, 5)), k), 5);
    }
    std::mt19937_64 rng(3);
    Mat<Q> m = random_rational_matrix(6, 6, rng);
    Mat<Q> g = m.transpose() * m;
    Mat<Q> p = Mat<Q>::Identity(6, 6);
    for (int i = 0; i < 3; ++i) {
        p = p * g;
    }
    EXPECT_EQ(gap_trace(m, 3), p.trace());
    EXPECT_THROW(gap_trace(m, 0), PreconditionError);
}

TEST(gap_trace, sandwich_property) {
    std::mt19937_64 rng(14);
    for (int rep = 0; rep < 50; ++rep) {
        Eigen::Index n = 1 + static_cast<Eigen::Index>(rng() % 16);
        int d = 1 + static_cast<int>(rng() % 6);
        Mat<Q> m = random_rational_matrix(n, n, rng);
        double s2d = std::pow(sigma_max(m), 2.0 * d);
        double f = to_double(gap_trace(m, d));
        EXPECT_LE(s2d, f * (1 + 1e-6) + 1e-12);
        EXPECT_LE(f, static_cast<double>(n) * s2d * (1 + 1e-6) + 1e-12);
    }
}

TEST(reparametrise, classical_bit) {
    auto r = reparametrise(classical_theory(2), kBit);
    EXPECT_EQ(r.center, col({Q(1, 2), Q(1, 2)}));
    EXPECT_NEAR(r.radius, 1 / std::sqrt(2.0), 1e-12);
    Eigen::Vector2d e0(1, 0), e1(0, 1);
    EXPECT_NEAR(std::abs((r.phi * e0)(1)), 1.0, 1e-12);
    EXPECT_NEAR((r.phi * e0)(1), -(r.phi * e1)(1), 1e-12);
    EXPECT_NEAR((r.phi * e0)(0), 1.0, 1e-12);
}

TEST(reparametrise, gbit_square_is_identity) {
    auto r = reparametrise(boxworld_theory(), kGbit);
    EXPECT_NEAR(r.radius, 1.0, 1e-12);
    EXPECT_TRUE(r.phi.isApprox(Eigen::MatrixXd::Identity(3, 3), 1e-12));
}

TEST(reparametrise, probabilities_invariant) {
    std::mt19937_64 rng(50);
    std::uniform_real_distribution<double> u(-1, 1);
    for (const char *name : {"classical", "quantum", "boxworld"}) {
        TheorySpec t = builtin_theory(name);
        auto r = reparametrise(t, t.systems[0].type);
        EXPECT_TRUE((r.phi_inv * r.phi).isApprox(Eigen::MatrixXd::Identity(r.phi.rows(), r.phi.cols()), 1e-12));
        for (int rep = 0; rep < 50; ++rep) {
            Eigen::VectorXd rho = Eigen::VectorXd::NullaryExpr(r.phi.rows(), [&]() { return u(rng); });
            Eigen::RowVectorXd a = Eigen::RowVectorXd::NullaryExpr(r.phi.rows(), [&]() { return u(rng); });
            double tilde = (a * r.phi_inv).dot(r.phi * rho);
            EXPECT_NEAR(a.dot(rho), tilde, 1e-12) << name;
        }
    }
}

TEST(sigma_bound, accept_always) {
    auto c = compile("theory classical\naux A : bit\nmeasure unit() A -> _\naccept 1\n");
    auto r = verify_sigma_bound(c, classical_theory(2));
    EXPECT_NEAR(r.accept.value, 1.0, 1e-12);
    EXPECT_EQ(*r.accept.exact, 1);
    EXPECT_TRUE(r.holds);
    // the unit row itself has norm sqrt 2 in raw coordinates
    EXPECT_NEAR(r.sigma_raw, std::sqrt(2.0), 1e-12);
}

TEST(sigma_bound, random_circuits_hold) {
    std::mt19937_64 rng(123);
    for (const char *name : {"classical", "quantum", "boxworld"}) {
        TheorySpec t = builtin_theory(name);
        for (int rep = 0; rep < 30; ++rep) {
            std::string text = random_aux_circuit_text(t, 2, rng);
            auto c = validate(parse(text), t);
            auto r = verify_sigma_bound(c, t);
            EXPECT_TRUE(r.holds) << name << "\n" << text;
            EXPECT_LE(r.accept.value, r.sigma_tilde + 1e-9);
            EXPECT_GE(r.accept.value, -1e-12);
            EXPECT_LE(r.accept.value, 1 + 1e-12);
        }
    }
}

TEST(max_accept, classical_vertex_oracle) {
    std::mt19937_64 rng(31);
    TheorySpec t = classical_theory(2);
    for (int rep = 0; rep < 100; ++rep) {
        auto c = validate(parse(random_aux_circuit_text(t, 3, rng)), t);
        RowVec<Q> a = acceptance_row(c);
        Q best = a(0);
        for (Eigen::Index i = 1; i < a.size(); ++i) {
            best = std::max(best, a(i));
        }
        auto m = max_accept(t, c.aux_types(), a);
        ASSERT_TRUE(m.exact.has_value());
        EXPECT_EQ(*m.exact, best);
    }
}

TEST(max_accept, quantum_eigen_oracle) {
    TheorySpec t = quantum_theory(2);
    auto c = compile("theory quantum\naux A : qubit\naux B : qubit\napply H A -> A\napply CNOT A B -> A B\n"
                     "measure z() A B -> a b\naccept a == b\n");
    auto m = max_accept(t, c.aux_types(), acceptance_row(c));
    EXPECT_NEAR(m.value, 1.0, 1e-9);
    auto single = compile("theory quantum\naux A : qubit\nmeasure projector(1, 3/5, 0, 4/5) A -> a\naccept a == 0\n");
    EXPECT_NEAR(max_accept(t, single.aux_types(), acceptance_row(single)).value, 1.0, 1e-9);
}

TEST(d_rule, boundaries) {
    for (int n = 1; n <= 10; ++n) {
        int d = default_d_rule(n);
        EXPECT_EQ(d, (n + 2) / 2);
        EXPECT_NO_THROW(check_d_rule(n, d));
        EXPECT_THROW(check_d_rule(n, d - 1), PreconditionError);
    }
    // d(n) = n at n = 1: 2^2 <= 4^1
    EXPECT_NO_THROW(check_d_rule(1, 1));
}

TEST(gma, accept_side_toy) {
    TheorySpec t = classical_theory(2);
    ProofInput in{"toy", 2, compile(gma_fixture_text({1, 0}, false))};
    auto r = gma_bound(t, in, [](int) { return 4; });
    EXPECT_NEAR(r.sigma_max, 1.0, 1e-12);
    EXPECT_EQ(*r.accept.exact, 1);
    EXPECT_GE(r.gap_trace, Q(256, 6561));
    EXPECT_EQ(r.classification, Classification::AcceptSide);
}

TEST(gma, reject_side_toy) {
    TheorySpec t = classical_theory(2);
    ProofInput in{"toy", 2, compile(gma_fixture_text({0, 1}, true))};
    auto r = gma_bound(t, in, [](int) { return 3; });
    EXPECT_EQ(*r.accept.exact, Q(1, 3));
    EXPECT_LE(r.gap_trace, Q(1, 2) * Q(64, 729));
    EXPECT_EQ(r.classification, Classification::RejectSide);
    EXPECT_TRUE(r.chain_trace);
    EXPECT_TRUE(r.chain_sigma);
    EXPECT_TRUE(r.chain_final);
    EXPECT_THROW(gma_bound(t, in, [](int) { return 1; }), PreconditionError);
}

TEST(gma, report_never_violates_verified_families) {
    ProofExperiment exp;
    exp.theory = classical_theory(2);
    std::mt19937_64 rng(1);
    for (int n = 1; n <= 4; ++n) {
        for (int rep = 0; rep < 3; ++rep) {
            std::vector<int> x(n);
            for (auto &b : x) {
                b = static_cast<int>(rng() & 1);
            }
            exp.inputs.push_back({"a", n, compile(gma_fixture_text(x, false))});
            exp.inputs.push_back({"r", n, compile(gma_fixture_text(x, true))});
        }
    }
    for (const auto &r : gma_threshold_report(exp)) {
        EXPECT_NE(r.classification, Classification::Violation);
        EXPECT_EQ(r.classification, r.input == "a" ? Classification::AcceptSide : Classification::RejectSide);
        EXPECT_TRUE(r.sandwich);
    }
}

TEST(postbgp, examples) {
    auto coin = compile("theory classical\nsystem C : bit\nprepare state(1/3, 2/3) -> C\nmeasure basis() C -> c\n"
                        "accept c == 1\n");
    auto all = postbgp_check(coin, [](const OutcomeString &) { return true; }, 2, 3);
    EXPECT_EQ(all.p_s, 1);
    EXPECT_EQ(all.p_accept_given_s, Q(2, 3));
    EXPECT_EQ(all.outcome, "accept");
    EXPECT_TRUE(all.failed_clause.empty());

    auto pr = compile("theory boxworld\nsystem A : gbit\nsystem B : gbit\nprepare pr() -> A B\n"
                      "measure fiducial(1, 1) A B -> a b\naccept a xor b == 1\n");
    auto r = postbgp_check(pr, [](const OutcomeString &z) { return z[0] == 0; }, 2, 1);
    EXPECT_EQ(r.p_s, Q(1, 2));
    EXPECT_TRUE(r.clause_postselect);
    EXPECT_EQ(r.p_accept_given_s, 1);

    const int n = 4;
    std::string text = "theory classical\n";
    std::string heads;
    for (int i = 0; i < n; ++i) {
        std::string w = "C" + std::to_string(i);
        text += "system " + w + " : bit\nprepare state(1/2, 1/2) -> " + w + "\nmeasure basis() " + w + " -> c" +
                std::to_string(i) + "\n";
    }
    text += "accept c0 == 1\n";
    auto coins = compile(text);
    auto fail = postbgp_check(coins, [](const OutcomeString &z) { return z == OutcomeString{1, 1, 1, 1}; }, 2, n - 1);
    EXPECT_EQ(fail.p_s, Q(1, 16));
    EXPECT_FALSE(fail.clause_postselect);
    EXPECT_EQ(fail.failed_clause, "postselection-probability");
}
