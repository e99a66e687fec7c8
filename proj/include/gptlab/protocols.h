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


#ifndef GPTLAB_PROTOCOLS_H
#define GPTLAB_PROTOCOLS_H

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gptlab/core.h"
#include "gptlab/dsl.h"
#include "gptlab/principles.h"
#include "gptlab/theories.h"

namespace gpt {

// ---------------------------------------------------------------------------
// Boxworld advice: parity of local fiducial outcomes on rho_f.

/// rho_f on n gbits, party j measured with fiducial x_j, outcomes a1..an.
Circuit<Rational> advice_parity_circuit(const TruthTable &f, const std::vector<int> &x);

struct AdviceEval {
    int bit = 0;
    /// Every outcome string of nonzero probability has the returned parity.
    bool deterministic = true;
    size_t support = 0;
};

AdviceEval advice_parity_eval(const TruthTable &f, const std::vector<int> &x);

// ---------------------------------------------------------------------------
// Randomness extraction.

struct VonNeumannReport {
    Rational p0;  // (e0|y)
    uint64_t seed = 0;
    size_t pairs = 0;
    size_t kept = 0;
    std::vector<int> bits;
    double p_hat0 = 0;
    double keep_rate = 0;
    double expected_keep_rate = 0;
    /// 4 sigma binomial bound on |p_hat0 - 1/2| for `kept` fair coins.
    double bias_bound = 0;
    /// 3 sigma bound on the keep rate deviation.
    double keep_bound = 0;
    bool bias_ok = false;
    bool keep_ok = false;
};

/// Two copies of y, each measured with {e0, u - e0}; 01 -> 0, 10 -> 1.
VonNeumannReport von_neumann_bit(const TheorySpec &theory, const GVector<Rational> &y, const GEffect<Rational> &e0,
                                 size_t n_pairs, uint64_t seed);

/// Classical bit with P(outcome 0) = p.
VonNeumannReport von_neumann_bit(const Rational &p, size_t n_pairs, uint64_t seed);

/// T_f |x) = |f(x)) on n classical bits; `image[x]` is f(x).
GTransform<Rational> permutation_transform(const std::vector<uint32_t> &image, int n_bits);

// ---------------------------------------------------------------------------
// Quantum measurement update and gentle measurement.

/// The normalised state dual to a pure effect, after checking the outcome
/// has nonzero probability on `state`.
GVector<Rational> measurement_update(const TheorySpec &theory, const GVector<Rational> &state,
                                     const GEffect<Rational> &effect);

struct GentleReport {
    uint64_t seed = 0;
    size_t trials = 0;
    std::vector<int> dims;
    std::vector<size_t> trials_per_dim;
    double max_ratio = 0;
    size_t violations = 0;
    double tolerance = kTolerance;
    size_t zero_eps_cases = 0;
    /// The exact eps = 0 cases all produced a zero difference.
    bool zero_eps_exact = true;
};

/// Random states rho and pure effects with (0|rho) = 1 - eps in each dimension;
/// checks ||rho - rho_0||_phy <= c sqrt(2 eps) with c = sqrt(d).
GentleReport gentle_measurement_check(size_t n_trials, uint64_t seed, const std::vector<int> &dims = {2, 3, 4},
                                      double tol = kTolerance);

// ---------------------------------------------------------------------------
// Amplification.

/// k parallel copies, aux register the k-fold tensor power, majority accept.
template <class S>
Circuit<S> amplify(const Circuit<S> &c, int k, const Guards &guards = {});

Rational majority_tail(const Rational &p, int k);

// ---------------------------------------------------------------------------
// Advice distillation on a quantum family.

struct AdviceFamily {
    TheorySpec theory;
    std::vector<std::string> names;
    std::vector<Circuit<Rational>> inputs;
    Rational alpha{2, 3};
    Rational beta{1, 3};
    /// Starting advice; the completely mixed state when absent.
    std::optional<GVector<Rational>> initial;
};

struct DistillStep {
    int iteration = 0;
    int input = -1;
    std::vector<Rational> success;
    Rational postselect_probability;
};

struct DistillResult {
    bool complete = false;
    int iterations = 0;
    int t_max = 0;
    std::vector<DistillStep> trace;
    GVector<Rational> final_state;
    std::vector<Rational> final_success;
};

/// t_max <= 0 selects 8 * (number of inputs).
DistillResult advice_distillation(const AdviceFamily &family, int t_max = 0);

// ---------------------------------------------------------------------------
// Spectral quantities.

double sigma_max(const Eigen::MatrixXd &m);
double sigma_max(const Mat<Rational> &m);

struct SigmaBounds {
    double lower = 0;
    double upper = 0;
};

/// Bounds from exact rational arithmetic: a Rayleigh quotient of M^T M after
/// `iterations` power steps, and Tr((M^T M)^(2^k))^(1/2^k).
SigmaBounds exact_sigma_bounds(const Mat<Rational> &m, int iterations = 4);

inline constexpr Eigen::Index kMaxGapDim = 256;
inline constexpr int kMaxGapExponent = 4096;

/// Tr((M^T M)^d), exactly, by binary powering.
Rational gap_trace(const Mat<Rational> &m, int d);

// ---------------------------------------------------------------------------
// Re-parametrisation and the sigma_max bound.

struct Reparam {
    std::string system;
    Vec<Rational> center;
    /// Inscribed-ball radius around the center, in the free coordinates.
    double radius = 0;
    Eigen::MatrixXd phi;
    Eigen::MatrixXd phi_inv;
};

Reparam reparametrise(const TheorySpec &theory, const SystemType &system);

struct MaxAccept {
    double value = 0;
    /// Exact optimum where the maximisation is an exact LP or vertex scan.
    std::optional<Rational> exact;
    Eigen::VectorXd witness;
    std::string method;
};

/// Maximum of a . rho over physical states of `systems`.
MaxAccept max_accept(const TheorySpec &theory, const SystemList &systems, const RowVec<Rational> &a);

struct SigmaBoundReport {
    RowVec<Rational> acceptance;
    MaxAccept accept;
    double sigma_raw = 0;
    double sigma_tilde = 0;
    /// max ||Phi rho|| over the state space, used as the uniform rescale.
    double rescale = 1;
    std::vector<double> radii;
    bool holds = false;
    bool raw_holds = false;
    Verdict verdict = Verdict::Inconclusive;
    std::string note;
};

SigmaBoundReport verify_sigma_bound(const Circuit<Rational> &c, const TheorySpec &theory, double tol = kTolerance);

// ---------------------------------------------------------------------------
// GMA threshold classification.

using DRule = std::function<int(int)>;

/// Smallest d with 2^(n+1) <= 4^d.
int default_d_rule(int n);

/// Throws PreconditionError when 2^(n+1) > 4^d.
void check_d_rule(int n, int d);

enum class Classification { AcceptSide, RejectSide, Violation };

std::string to_string(Classification c);

struct BoundReport {
    std::string input;
    int n = 0;
    int d = 0;
    Eigen::Index N = 0;
    double sigma_max = 0;
    MaxAccept accept;
    Rational gap_trace;
    Rational accept_threshold;
    Rational reject_threshold;
    Classification classification = Classification::Violation;
    /// f <= N sigma^(2d), sigma <= 1/3, and N (1/3)^(2d) <= 1/2 (2/3)^(2d).
    bool chain_trace = false;
    bool chain_sigma = false;
    bool chain_final = false;
    bool sandwich = false;
};

struct ProofInput {
    std::string name;
    int n = 0;
    Circuit<Rational> circuit;
};

struct ProofExperiment {
    TheorySpec theory;
    std::vector<ProofInput> inputs;
    DRule d_rule = default_d_rule;
};

BoundReport gma_bound(const TheorySpec &theory, const ProofInput &in, const DRule &d_rule, double tol = kTolerance);

std::vector<BoundReport> gma_threshold_report(const ProofExperiment &exp, double tol = kTolerance);

/// Classical aux of |x| bits; accepts iff the measured aux equals x. With
/// `reject_side` the accept event also needs a coin with P(1) = 1/3.
std::string gma_fixture_text(const std::vector<int> &x, bool reject_side);

// ---------------------------------------------------------------------------
// Post-selection.

struct PostBgpReport {
    Rational p_s;
    Rational bound;
    bool clause_postselect = false;
    Rational p_accept_given_s;
    /// "accept", "reject" or "gap" against (2/3, 1/3).
    std::string outcome;
    std::string failed_clause;
};

/// P(z in S) >= 1 / D^w and the conditional (2/3, 1/3) thresholds.
PostBgpReport postbgp_check(const Circuit<Rational> &c, const OutcomePredicate &s, int D, int w);

// ---------------------------------------------------------------------------
// Random instances.

/// Text of a random circuit with 1..max_aux aux systems, generators, random
/// measurements and a random accept set.
std::string random_aux_circuit_text(const TheorySpec &theory, int max_aux, std::mt19937_64 &rng);

/// Entries p/q with |p| <= range and q in [1, den].
Mat<Rational> random_rational_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64 &rng, int range = 5,
                                     int den = 4);

/// Random CircuitAST with at most `max_devices` devices over classical bits.
CircuitAST random_ast(std::mt19937_64 &rng, int max_devices = 10);

// ---------------------------------------------------------------------------

template <class S>
Circuit<S> amplify(const Circuit<S> &c, int k, const Guards &guards) {
    if (k < 1 || k % 2 == 0) {
        throw PreconditionError("amplify: copy count must be odd and positive");
    }
    if (k == 1) {
        return c;
    }
    analyze(c, guards);
    Circuit<S> out;
    out.units = c.units;
    const int nw = static_cast<int>(c.wires.size());
    const auto per_copy = c.variables().size();
    for (int j = 0; j < k; ++j) {
        for (const auto &w : c.wires) {
            out.wires.push_back({w.name + "_" + std::to_string(j), w.type});
        }
        for (int a : c.aux_ports) {
            out.aux_ports.push_back(a + j * nw);
        }
        for (auto d : c.devices) {
            for (auto &w : d.inputs) {
                w += j * nw;
            }
            for (auto &w : d.outputs) {
                w += j * nw;
            }
            for (auto &v : d.vars) {
                v += "_" + std::to_string(j);
            }
            out.devices.push_back(std::move(d));
        }
    }
    auto slice = [per_copy](const OutcomeString &z, int j) {
        return OutcomeString(z.begin() + j * per_copy, z.begin() + (j + 1) * per_copy);
    };
    OutcomePredicate acc = c.accept;
    out.accept = [acc, k, slice](const OutcomeString &z) {
        int votes = 0;
        for (int j = 0; j < k; ++j) {
            votes += acc(slice(z, j)) ? 1 : 0;
        }
        return 2 * votes > k;
    };
    if (c.post_select) {
        OutcomePredicate ps = *c.post_select;
        out.post_select = [ps, k, slice](const OutcomeString &z) {
            for (int j = 0; j < k; ++j) {
                if (!ps(slice(z, j))) {
                    return false;
                }
            }
            return true;
        };
    }
    analyze(out, guards);
    return out;
}

}  // namespace gpt

#endif
