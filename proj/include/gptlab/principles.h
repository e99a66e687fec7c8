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

#ifndef GPTLAB_PRINCIPLES_H
#define GPTLAB_PRINCIPLES_H

#include <optional>
#include <string>
#include <vector>

#include "gptlab/lp.h"
#include "gptlab/theories.h"

namespace gpt {

enum class Verdict { Pass, Fail, Inconclusive };

std::string to_string(Verdict v);

struct CausalityReport {
    Verdict verdict = Verdict::Pass;
    /// Human-readable descriptions of every failed check.
    std::vector<std::string> witnesses;
};

CausalityReport check_causality(const TheorySpec &theory);

struct LocalityReport {
    Verdict verdict = Verdict::Pass;
    int state_rank = 0;
    int effect_rank = 0;
    int expected = 0;
};

/// Rank of the span of product extremal states (and effects) of A x B.
LocalityReport check_tomographic_locality(const TheorySpec &theory, const SystemType &a, const SystemType &b);

/// Exact rank by Gaussian elimination over the rationals.
int exact_rank(const std::vector<Vec<Rational>> &vectors);

/// Extremal effects of a register: products of per-system extremal effects.
std::vector<RowVec<Rational>> product_effects(const TheorySpec &theory, const SystemList &systems);

struct DistinguishResult {
    bool feasible = false;
    /// e_i as cone combinations of extremal effects, when feasible.
    std::vector<RowVec<Rational>> effects;
    LPProblem problem;
    std::vector<Rational> farkas;
    bool certificate_verified = false;
};

inline constexpr size_t kMaxDistinguishStates = 8;

/// Exact LP for effects e_i in the cone of extremal effects with
/// (e_i|s_j) = delta_ij and sum_i e_i = u. For quantum registers the cone is
/// that of the listed stabilizer effects.
DistinguishResult find_distinguishing_measurement(const TheorySpec &theory, const SystemList &systems,
                                                  const std::vector<Vec<Rational>> &states);

struct MixedStateReport {
    GVector<Rational> state;
    bool invariant = true;
    std::vector<std::string> non_invariant_generators;
    /// Largest p with c - p * rho in the state cone, per extremal state.
    std::vector<Rational> refinement;
};

MixedStateReport completely_mixed(const TheorySpec &theory, const SystemType &system);

struct SymmetryResult {
    bool found = false;
    std::vector<std::string> word;
    GTransform<Rational> transform;
    int depth = 0;
    /// The generated group was exhausted before the depth bound, so a
    /// negative answer is a disproof rather than inconclusive.
    bool group_exhausted = false;
    size_t elements_visited = 0;
};

inline constexpr int kMaxSymmetryDepth = 12;

/// Named generator matrices embedded into a register at every placement.
std::vector<std::pair<std::string, Mat<Rational>>> register_generators(const TheorySpec &theory, const SystemList &systems);

/// Breadth-first search over words in the register generators.
SymmetryResult search_symmetry(const TheorySpec &theory, const SystemList &systems, const std::vector<Vec<Rational>> &src,
                               const std::vector<Vec<Rational>> &dst, int depth);

struct NormReport {
    double phy_norm = 0;
    /// Absent when the theory has no self-dual pairing here.
    std::optional<double> e_norm;
    /// Constant c with phy_norm <= c * e_norm (quantum: sqrt(d)).
    std::optional<double> c_constant;
    /// Euclidean norm of the completely mixed state under the pairing (1/sqrt(d)).
    std::optional<double> mixed_e_norm;
};

NormReport norms(const TheorySpec &theory, const GVector<double> &v);

/// Norms of a Hermitian matrix under the trace pairing, any dimension.
NormReport hermitian_norms(const Eigen::MatrixXcd &v);

struct PrincipleEntry {
    std::string principle;
    Verdict verdict = Verdict::Pass;
    std::string detail;
};

/// Runs every verifier on every system type (and pairs of equal types).
std::vector<PrincipleEntry> verify_theory(const TheorySpec &theory, int symmetry_depth = 8);

}  // namespace gpt

#endif
