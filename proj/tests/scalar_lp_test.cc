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

#include "gptlab/lp.h"
#include "gptlab/report.h"
#include "gptlab/scalar.h"
#include "gtest/gtest.h"

using namespace gpt;
using Q = Rational;

TEST(rational, parse_and_print) {
    EXPECT_EQ(parse_rational("3/6"), Q(1, 2));
    EXPECT_EQ(parse_rational("-4"), Q(-4));
    EXPECT_EQ(parse_rational("09/010"), Q(9, 10));
    EXPECT_EQ(to_string(Q(6, 4)), "3/2");
    EXPECT_EQ(to_string(Q(-8, 4)), "-2");
    EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
    EXPECT_THROW(parse_rational("0.5"), std::invalid_argument);
    EXPECT_THROW(parse_rational("1/-2"), std::invalid_argument);
    EXPECT_THROW(parse_rational(""), std::invalid_argument);
}

TEST(rational, decimals_are_exact) {
    EXPECT_EQ(parse_number("0.9"), Q(9, 10));
    EXPECT_EQ(parse_number("-1.25"), Q(-5, 4));
    EXPECT_EQ(parse_number("1/3"), Q(1, 3));
    EXPECT_EQ(parse_number_list("1/3,0.2"), (std::vector<Q>{Q(1, 3), Q(1, 5)}));
}

TEST(rational, from_double_round_trips) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> dist(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        double x = dist(rng);
        EXPECT_EQ(to_double(rational_from_double(x)), x);
    }
    EXPECT_EQ(rational_from_double(0.375), Q(3, 8));
}

TEST(tolerance, helpers) {
    EXPECT_TRUE(is_zero(1e-12));
    EXPECT_FALSE(is_zero(Q(1, 1000000000)));
    EXPECT_TRUE(nearly_equal(0.1 + 0.2, 0.3));
    EXPECT_TRUE(geq(1.0 - 1e-12, 1.0));
}

TEST(lp, simple_optimum) {
    // max x + y s.t. x + 2y <= 4, 3x + y <= 6
    LPProblem p;
    p.num_vars = 2;
    p.add({Q(1), Q(2)}, Sense::LessEq, Q(4));
    p.add({Q(3), Q(1)}, Sense::LessEq, Q(6));
    p.objective = std::vector<Q>{Q(1), Q(1)};
    auto r = solve(p);
    ASSERT_EQ(r.status, LPStatus::Optimal);
    EXPECT_EQ(r.objective, Q(14, 5));
    EXPECT_TRUE(verify_feasible(p, r.x));
}

TEST(lp, infeasible_with_certificate) {
    LPProblem p;
    p.num_vars = 2;
    p.add({Q(1), Q(1)}, Sense::Equal, Q(1));
    p.add({Q(1), Q(1)}, Sense::GreaterEq, Q(2));
    auto r = solve(p);
    ASSERT_EQ(r.status, LPStatus::Infeasible);
    EXPECT_TRUE(verify_farkas(p, r.farkas));
    // a zero vector certifies nothing
    EXPECT_FALSE(verify_farkas(p, {Q(0), Q(0)}));
}

TEST(lp, unbounded) {
    LPProblem p;
    p.num_vars = 2;
    p.add({Q(1), Q(-1)}, Sense::LessEq, Q(1));
    p.objective = std::vector<Q>{Q(1), Q(0)};
    EXPECT_EQ(solve(p).status, LPStatus::Unbounded);
}

// Two-variable LPs against enumeration of every pairwise line intersection.
TEST(lp, random_two_variable_against_vertices) {
    std::mt19937_64 rng(77);
    auto rnd = [&](int lo, int hi) { return Q(lo + static_cast<int>(rng() % (hi - lo + 1))); };
    for (int rep = 0; rep < 200; ++rep) {
        LPProblem p;
        p.num_vars = 2;
        std::vector<std::array<Q, 3>> lines{{Q(1), Q(0), Q(0)}, {Q(0), Q(1), Q(0)}};
        int m = 2 + static_cast<int>(rng() % 3);
        for (int i = 0; i < m; ++i) {
            Q a = rnd(0, 4), b = rnd(0, 4), c = rnd(1, 8);
            p.add({a, b}, Sense::LessEq, c);
            lines.push_back({a, b, c});
        }
        // keep it bounded
        p.add({Q(1), Q(1)}, Sense::LessEq, Q(10));
        lines.push_back({Q(1), Q(1), Q(10)});
        p.objective = std::vector<Q>{rnd(-3, 3), rnd(-3, 3)};
        auto r = solve(p);
        ASSERT_EQ(r.status, LPStatus::Optimal);

        std::optional<Q> best;
        for (size_t i = 0; i < lines.size(); ++i) {
            for (size_t j = i + 1; j < lines.size(); ++j) {
                Q det = lines[i][0] * lines[j][1] - lines[i][1] * lines[j][0];
                if (det == 0) {
                    continue;
                }
                Q x = (lines[i][2] * lines[j][1] - lines[i][1] * lines[j][2]) / det;
                Q y = (lines[i][0] * lines[j][2] - lines[i][2] * lines[j][0]) / det;
                if (!verify_feasible(p, {x, y})) {
                    continue;
                }
                Q v = (*p.objective)[0] * x + (*p.objective)[1] * y;
                if (!best || v > *best) {
                    best = v;
                }
            }
        }
        ASSERT_TRUE(best.has_value());
        EXPECT_EQ(r.objective, *best);
    }
}
