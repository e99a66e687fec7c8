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

#ifndef GPTLAB_THEORIES_H
#define GPTLAB_THEORIES_H

#include <cstdint>
#include <string>
#include <vector>

#include "gptlab/core.h"
#include "json.hpp"
#include "gptlab/quantum.h"

namespace gpt {

enum class MembershipKind { Simplex, Psd, Polytope };

std::string to_string(MembershipKind kind);
MembershipKind membership_kind_from_string(const std::string &text);

struct Measurement {
    std::string name;
    std::vector<RowVec<Rational>> effects;
};

/// Reversible transformation acting on the listed system types.
struct Generator {
    std::string name;
    std::vector<std::string> systems;
    Mat<Rational> matrix;
};

struct SystemSpec {
    SystemType type;
    std::vector<Vec<Rational>> states;      // extremal (pure) states
    std::vector<RowVec<Rational>> effects;  // extremal effects
    std::vector<Measurement> measurements;
    RowVec<Rational> unit;
    /// Inequalities f . v >= 0 cutting out the (unnormalised) state cone.
    std::vector<RowVec<Rational>> facets;
};

/// A finite description of a generalised probabilistic theory.
struct TheorySpec {
    std::string name;
    MembershipKind membership = MembershipKind::Simplex;
    std::vector<SystemSpec> systems;
    std::vector<Generator> generators;
    /// Largest composite (number of systems) this theory will build.
    int max_systems = 12;

    const SystemSpec &system(const std::string &type_name) const;
    const SystemSpec &system(const SystemType &type) const {
        return system(type.name);
    }
    bool has_system(const std::string &type_name) const;
    const Generator *generator(const std::string &name) const;

    RowVec<Rational> unit(const SystemList &systems) const;
    std::map<std::string, RowVec<Rational>> unit_map() const;
};

struct TruthTable {
    int n = 0;
    /// bits[x] = f(x) with x_1 the most significant bit of the index.
    std::vector<uint8_t> bits;

    TruthTable() = default;
    TruthTable(int arity, std::vector<uint8_t> values);

    bool operator()(uint32_t x) const {
        return bits[x] != 0;
    }
    bool operator==(const TruthTable &) const = default;
};

TheorySpec classical_theory(int n_levels = 2);
TheorySpec quantum_theory(int n_qubits = 2);
TheorySpec boxworld_theory();

/// Builds one of the built-in theories by name: classical, quantum, boxworld.
TheorySpec builtin_theory(const std::string &name);

/// Bipartite gbit state with P(a,b|x,y) = 1/2 iff a xor b = x y.
GVector<Rational> pr_state();

/// n-party gbit state whose fiducial outcomes have parity f(x) with
/// probability one, each admissible string having mass 2^(1-n).
GVector<Rational> rho_f(const TruthTable &f);

inline constexpr int kMaxRhoArity = 12;

/// Fiducial effect (x_a| on one gbit.
RowVec<Rational> gbit_effect(int x, int a);

/// Product fiducial effect for settings xs and outcomes as.
RowVec<Rational> gbit_product_effect(const std::vector<int> &xs, const std::vector<int> &as);

/// Physical membership in the theory's state set.
bool membership(const TheorySpec &theory, const GVector<Rational> &v);
bool membership(const TheorySpec &theory, const GVector<double> &v, double tol = kTolerance);

/// Embedding of a Hermitian matrix with rational entries into Pauli
/// coordinates. Throws UnsupportedError if the matrix is not a state.
GVector<Rational> embed_quantum_state(const CMat<Rational> &rho);

nlohmann::ordered_json theory_to_json(const TheorySpec &theory);
TheorySpec theory_from_json(const nlohmann::ordered_json &j);

// ---------------------------------------------------------------------------
// Named constructors used by the circuit language.

/// A device without wiring: port types plus outcome components.
struct DevicePrototype {
    SystemList in_types;
    SystemList out_types;
    std::vector<Mat<Rational>> outcomes;
    /// Per-system outcome counts for product measurements (empty otherwise).
    std::vector<int> factor_radices;
};

/// Unknown names throw UnsupportedError; bad arguments PreconditionError.
DevicePrototype make_state(const TheorySpec &theory, const std::string &ctor, const std::vector<Rational> &args,
                           const SystemList &out_types);
DevicePrototype make_gate(const TheorySpec &theory, const std::string &name, const SystemList &in_types);
DevicePrototype make_measurement(const TheorySpec &theory, const std::string &ctor, const std::vector<Rational> &args,
                                 const SystemList &in_types);

}  // namespace gpt

#endif
