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

#ifndef GPTLAB_LP_H
#define GPTLAB_LP_H

// Dense two-phase simplex over exact rationals with Bland's rule.
// All variables are non-negative; free variables are split by the caller.

#include <optional>
#include <vector>

#include "gptlab/scalar.h"

namespace gpt {

enum class Sense { LessEq, Equal, GreaterEq };

struct LinearConstraint {
    std::vector<Rational> coeffs;
    Sense sense = Sense::Equal;
    Rational rhs;
};

struct LPProblem {
    int num_vars = 0;
    std::vector<LinearConstraint> constraints;
    /// Maximised when present; otherwise a feasibility problem.
    std::optional<std::vector<Rational>> objective;

    void add(std::vector<Rational> coeffs, Sense sense, Rational rhs) {
        constraints.push_back({std::move(coeffs), sense, std::move(rhs)});
    }
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPResult {
    LPStatus status = LPStatus::Infeasible;
    std::vector<Rational> x;
    Rational objective;
    /// For infeasible problems: y with y^T A <= 0 componentwise, y^T b > 0,
    /// y_i <= 0 on <= rows and y_i >= 0 on >= rows.
    std::vector<Rational> farkas;
    int pivots = 0;
};

LPResult solve(const LPProblem &problem);

/// Checks x >= 0 and every constraint exactly.
bool verify_feasible(const LPProblem &problem, const std::vector<Rational> &x);

/// Checks that y is a Farkas certificate of infeasibility.
bool verify_farkas(const LPProblem &problem, const std::vector<Rational> &y);

}  // namespace gpt

#endif
