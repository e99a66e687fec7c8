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

#include "gptlab/lp.h"

#include <stdexcept>

#include "gptlab/error.h"

namespace gpt {

namespace {

using Q = Rational;

struct Tableau {
    int rows = 0;
    int cols = 0;
    std::vector<std::vector<Q>> a;
    std::vector<Q> rhs;
    std::vector<int> basis;
    int pivots = 0;

    void pivot(int r, int c) {
        Q inv = Q(1) / a[r][c];
        for (auto &x : a[r]) {
            if (x != 0) {
                x *= inv;
            }
        }
        rhs[r] *= inv;
        for (int i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) {
                continue;
            }
            Q f = a[i][c];
            for (int j = 0; j < cols; ++j) {
                if (a[r][j] != 0) {
                    a[i][j] -= f * a[r][j];
                }
            }
            rhs[i] -= f * rhs[r];
        }
        basis[r] = c;
        ++pivots;
    }

    std::vector<Q> reduced_costs(const std::vector<Q> &cost) const {
        std::vector<Q> d = cost;
        for (int i = 0; i < rows; ++i) {
            const Q &cb = cost[basis[i]];
            if (cb == 0) {
                continue;
            }
            for (int j = 0; j < cols; ++j) {
                if (a[i][j] != 0) {
                    d[j] -= cb * a[i][j];
                }
            }
        }
        return d;
    }

    /// Minimises cost . x over columns with allowed[j]. Returns false if unbounded.
    bool minimise(const std::vector<Q> &cost, const std::vector<bool> &allowed) {
        for (;;) {
            std::vector<Q> d = reduced_costs(cost);
            int enter = -1;
            for (int j = 0; j < cols; ++j) {
                if (allowed[j] && d[j] < 0) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) {
                return true;
            }
            int leave = -1;
            Q best;
            for (int i = 0; i < rows; ++i) {
                if (a[i][enter] <= 0) {
                    continue;
                }
                Q ratio = rhs[i] / a[i][enter];
                if (leave < 0 || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave < 0) {
                return false;
            }
            pivot(leave, enter);
        }
    }
};

}  // namespace

LPResult solve(const LPProblem &problem) {
    const int n = problem.num_vars;
    const int m = static_cast<int>(problem.constraints.size());
    for (const auto &c : problem.constraints) {
        if (static_cast<int>(c.coeffs.size()) != n) {
            throw PreconditionError("LP constraint has the wrong number of coefficients");
        }
    }
    if (problem.objective && static_cast<int>(problem.objective->size()) != n) {
        throw PreconditionError("LP objective has the wrong number of coefficients");
    }
    std::vector<int> slack_col(m, -1);
    int ns = 0;
    for (int i = 0; i < m; ++i) {
        if (problem.constraints[i].sense != Sense::Equal) {
            slack_col[i] = n + ns++;
        }
    }
    const int art0 = n + ns;
    Tableau t;
    t.rows = m;
    t.cols = art0 + m;
    t.a.assign(m, std::vector<Q>(t.cols));
    t.rhs.resize(m);
    t.basis.resize(m);
    std::vector<int> sign(m, 1);
    for (int i = 0; i < m; ++i) {
        const auto &c = problem.constraints[i];
        sign[i] = c.rhs < 0 ? -1 : 1;
        for (int j = 0; j < n; ++j) {
            t.a[i][j] = c.coeffs[j] * sign[i];
        }
        if (slack_col[i] >= 0) {
            t.a[i][slack_col[i]] = (c.sense == Sense::LessEq ? 1 : -1) * sign[i];
        }
        t.a[i][art0 + i] = 1;
        t.rhs[i] = c.rhs * sign[i];
        t.basis[i] = art0 + i;
    }

    LPResult result;
    std::vector<Q> phase1(t.cols);
    for (int i = 0; i < m; ++i) {
        phase1[art0 + i] = 1;
    }
    std::vector<bool> all(t.cols, true);
    t.minimise(phase1, all);
    Q w = 0;
    for (int i = 0; i < m; ++i) {
        w += phase1[t.basis[i]] * t.rhs[i];
    }
    if (w > 0) {
        std::vector<Q> d = t.reduced_costs(phase1);
        result.status = LPStatus::Infeasible;
        result.farkas.resize(m);
        for (int i = 0; i < m; ++i) {
            result.farkas[i] = (Q(1) - d[art0 + i]) * sign[i];
        }
        result.pivots = t.pivots;
        return result;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
        if (t.basis[i] < art0) {
            continue;
        }
        for (int j = 0; j < art0; ++j) {
            if (t.a[i][j] != 0) {
                t.pivot(i, j);
                break;
            }
        }
    }
    std::vector<bool> structural(t.cols, false);
    for (int j = 0; j < art0; ++j) {
        structural[j] = true;
    }
    if (problem.objective) {
        std::vector<Q> cost(t.cols);
        for (int j = 0; j < n; ++j) {
            cost[j] = -(*problem.objective)[j];
        }
        if (!t.minimise(cost, structural)) {
            result.status = LPStatus::Unbounded;
            result.pivots = t.pivots;
            return result;
        }
    }
    result.status = LPStatus::Optimal;
    result.x.assign(n, Q(0));
    for (int i = 0; i < m; ++i) {
        if (t.basis[i] < n) {
            result.x[t.basis[i]] = t.rhs[i];
        }
    }
    result.objective = 0;
    if (problem.objective) {
        for (int j = 0; j < n; ++j) {
            result.objective += (*problem.objective)[j] * result.x[j];
        }
    }
    result.pivots = t.pivots;
    return result;
}

bool verify_feasible(const LPProblem &problem, const std::vector<Q> &x) {
    if (static_cast<int>(x.size()) != problem.num_vars) {
        return false;
    }
    for (const auto &v : x) {
        if (v < 0) {
            return false;
        }
    }
    for (const auto &c : problem.constraints) {
        Q lhs = 0;
        for (int j = 0; j < problem.num_vars; ++j) {
            lhs += c.coeffs[j] * x[j];
        }
        bool ok = c.sense == Sense::Equal ? lhs == c.rhs : c.sense == Sense::LessEq ? lhs <= c.rhs : lhs >= c.rhs;
        if (!ok) {
            return false;
        }
    }
    return true;
}

bool verify_farkas(const LPProblem &problem, const std::vector<Q> &y) {
    const int m = static_cast<int>(problem.constraints.size());
    if (static_cast<int>(y.size()) != m) {
        return false;
    }
    Q yb = 0;
    for (int i = 0; i < m; ++i) {
        const auto &c = problem.constraints[i];
        if (c.sense == Sense::LessEq && y[i] > 0) {
            return false;
        }
        if (c.sense == Sense::GreaterEq && y[i] < 0) {
            return false;
        }
        yb += y[i] * c.rhs;
    }
    if (yb <= 0) {
        return false;
    }
    for (int j = 0; j < problem.num_vars; ++j) {
        Q s = 0;
        for (int i = 0; i < m; ++i) {
            s += y[i] * problem.constraints[i].coeffs[j];
        }
        if (s > 0) {
            return false;
        }
    }
    return true;
}

}  // namespace gpt
