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

#ifndef GPTLAB_CORE_H
#define GPTLAB_CORE_H

// Vector-space semantics of circuits: states are column vectors, effects
// are row vectors and transformations are matrices in fiducial coordinates.
// Composite systems use the Kronecker product with the first-declared port
// as the most significant index.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "gptlab/error.h"
#include "gptlab/scalar.h"

namespace gpt {

struct SystemType {
    std::string name;
    int dim = 0;

    bool operator==(const SystemType &) const = default;
};

using SystemList = std::vector<SystemType>;

inline Eigen::Index total_dim(const SystemList &systems) {
    Eigen::Index d = 1;
    for (const auto &s : systems) {
        d *= s.dim;
    }
    return d;
}

inline SystemList concat(SystemList a, const SystemList &b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

template <class S>
struct GVector {
    SystemList systems;
    Vec<S> coords;
    std::optional<int> outcome_label;

    template <class T>
    GVector<T> cast() const {
        return {systems, coords.template cast<T>(), outcome_label};
    }
};

template <class S>
struct GEffect {
    SystemList systems;
    RowVec<S> coords;

    template <class T>
    GEffect<T> cast() const {
        return {systems, coords.template cast<T>()};
    }
    S operator()(const GVector<S> &v) const {
        if (v.systems != systems) {
            throw WiringError("effect and state act on different systems");
        }
        return coords.dot(v.coords.transpose());
    }
};

template <class S>
struct GTransform {
    SystemList in;
    SystemList out;
    Mat<S> matrix;

    template <class T>
    GTransform<T> cast() const {
        return {in, out, matrix.template cast<T>()};
    }
    GVector<S> operator()(const GVector<S> &v) const {
        if (v.systems != in) {
            throw WiringError("transformation input type does not match state");
        }
        return {out, matrix * v.coords, v.outcome_label};
    }
};

template <class S>
Mat<S> kron(const Mat<S> &a, const Mat<S> &b) {
    return Eigen::kroneckerProduct(a, b).eval();
}

template <class S>
GVector<S> tensor(const GVector<S> &a, const GVector<S> &b) {
    Vec<S> c = Eigen::kroneckerProduct(a.coords, b.coords).eval();
    return {concat(a.systems, b.systems), std::move(c), std::nullopt};
}

template <class S>
GEffect<S> tensor(const GEffect<S> &a, const GEffect<S> &b) {
    RowVec<S> c = Eigen::kroneckerProduct(a.coords, b.coords).eval();
    return {concat(a.systems, b.systems), std::move(c)};
}

template <class S>
GTransform<S> tensor(const GTransform<S> &a, const GTransform<S> &b) {
    return {concat(a.in, b.in), concat(a.out, b.out), kron<S>(a.matrix, b.matrix)};
}

/// t2 after t1.
template <class S>
GTransform<S> sequential_compose(const GTransform<S> &t2, const GTransform<S> &t1) {
    if (t1.out != t2.in) {
        throw WiringError("sequential composition: output type of first transformation does not match input of second");
    }
    return {t1.in, t2.out, t2.matrix * t1.matrix};
}

template <class S>
GTransform<S> identity_transform(const SystemList &systems) {
    Eigen::Index d = total_dim(systems);
    return {systems, systems, Mat<S>::Identity(d, d)};
}

// ---------------------------------------------------------------------------
// Circuits

enum class DeviceKind { Preparation, Transformation, Measurement };

using OutcomeString = std::vector<int>;
using OutcomePredicate = std::function<bool(const OutcomeString &)>;

/// A laboratory device. Each outcome component is stored as a matrix of
/// shape (output dim) x (input dim); preparations have one column and
/// measurements one row. Outcome indices are mixed-radix over `radices`,
/// first variable most significant.
template <class S>
struct Device {
    DeviceKind kind = DeviceKind::Transformation;
    std::string label;
    SystemList in_types;
    SystemList out_types;
    std::vector<int> inputs;
    std::vector<int> outputs;
    std::vector<Mat<S>> outcomes;
    std::vector<std::string> vars;
    std::vector<int> radices;

    template <class T>
    Device<T> cast() const {
        Device<T> d;
        d.kind = kind;
        d.label = label;
        d.in_types = in_types;
        d.out_types = out_types;
        d.inputs = inputs;
        d.outputs = outputs;
        for (const auto &m : outcomes) {
            d.outcomes.push_back(m.template cast<T>());
        }
        d.vars = vars;
        d.radices = radices;
        return d;
    }
};

struct Wire {
    std::string name;
    SystemType type;
};

template <class S>
struct Circuit {
    std::vector<Wire> wires;
    std::vector<Device<S>> devices;
    /// Unconnected input wires forming the auxiliary register, in order.
    std::vector<int> aux_ports;
    /// Accept iff the predicate holds on the outcome string.
    OutcomePredicate accept = [](const OutcomeString &) { return true; };
    std::optional<OutcomePredicate> post_select;
    /// Deterministic effect per system-type name; used to discard dangling wires.
    std::map<std::string, RowVec<S>> units;

    int add_wire(std::string name, SystemType type) {
        wires.push_back({std::move(name), std::move(type)});
        return static_cast<int>(wires.size()) - 1;
    }

    int add_aux(std::string name, SystemType type) {
        int w = add_wire(std::move(name), std::move(type));
        aux_ports.push_back(w);
        return w;
    }

    std::vector<std::string> variables() const {
        std::vector<std::string> out;
        for (const auto &d : devices) {
            out.insert(out.end(), d.vars.begin(), d.vars.end());
        }
        return out;
    }

    std::vector<int> radices() const {
        std::vector<int> out;
        for (const auto &d : devices) {
            out.insert(out.end(), d.radices.begin(), d.radices.end());
        }
        return out;
    }

    SystemList aux_types() const {
        SystemList out;
        for (int w : aux_ports) {
            out.push_back(wires[w].type);
        }
        return out;
    }

    template <class T>
    Circuit<T> cast() const {
        Circuit<T> c;
        c.wires = wires;
        for (const auto &d : devices) {
            c.devices.push_back(d.template cast<T>());
        }
        c.aux_ports = aux_ports;
        c.accept = accept;
        c.post_select = post_select;
        for (const auto &[k, v] : units) {
            c.units[k] = v.template cast<T>();
        }
        return c;
    }
};

struct CircuitLayout {
    /// Device indices in a topological order (stable in declaration order).
    std::vector<int> order;
    /// Output wires that are never consumed, in increasing wire id.
    std::vector<int> residual;
    /// Offset of each device's first variable in the outcome string.
    std::vector<int> var_offset;
    size_t outcome_strings = 1;
};

struct Guards {
    size_t max_outcome_strings = size_t{1} << 20;
};

namespace detail {

inline std::string wire_desc(const std::vector<Wire> &wires, int w) {
    return "'" + wires[w].name + "' (wire " + std::to_string(w) + ")";
}

}  // namespace detail

/// Type-checks the wiring and computes an evaluation order.
template <class S>
CircuitLayout analyze(const Circuit<S> &c, const Guards &guards = {}) {
    const int nw = static_cast<int>(c.wires.size());
    const int nd = static_cast<int>(c.devices.size());
    std::vector<int> producer(nw, -2);  // -2 none, -1 aux, else device
    std::vector<int> consumer(nw, -1);
    for (int w : c.aux_ports) {
        if (w < 0 || w >= nw) {
            throw WiringError("aux port refers to unknown wire");
        }
        if (producer[w] != -2) {
            throw WiringError("aux port " + detail::wire_desc(c.wires, w) + " declared twice");
        }
        producer[w] = -1;
    }
    CircuitLayout layout;
    layout.var_offset.resize(nd);
    int offset = 0;
    for (int i = 0; i < nd; ++i) {
        const auto &d = c.devices[i];
        auto where = [&] { return "device " + std::to_string(i) + (d.label.empty() ? "" : " (" + d.label + ")"); };
        if (d.inputs.size() != d.in_types.size() || d.outputs.size() != d.out_types.size()) {
            throw WiringError(where() + ": port count does not match declared port types");
        }
        if (d.kind == DeviceKind::Preparation && !d.inputs.empty()) {
            throw WiringError(where() + ": preparation with inputs");
        }
        if (d.kind == DeviceKind::Measurement && !d.outputs.empty()) {
            throw WiringError(where() + ": measurement with outputs");
        }
        for (size_t k = 0; k < d.inputs.size(); ++k) {
            int w = d.inputs[k];
            if (w < 0 || w >= nw) {
                throw WiringError(where() + ": unknown input wire");
            }
            if (!(c.wires[w].type == d.in_types[k])) {
                throw WiringError(where() + ": type mismatch on input " + detail::wire_desc(c.wires, w) + ": wire is " +
                                  c.wires[w].type.name + ", device expects " + d.in_types[k].name);
            }
            if (consumer[w] != -1) {
                throw WiringError(where() + ": wire " + detail::wire_desc(c.wires, w) + " consumed twice");
            }
            consumer[w] = i;
        }
        for (size_t k = 0; k < d.outputs.size(); ++k) {
            int w = d.outputs[k];
            if (w < 0 || w >= nw) {
                throw WiringError(where() + ": unknown output wire");
            }
            if (!(c.wires[w].type == d.out_types[k])) {
                throw WiringError(where() + ": type mismatch on output " + detail::wire_desc(c.wires, w));
            }
            if (producer[w] != -2) {
                throw WiringError(where() + ": wire " + detail::wire_desc(c.wires, w) + " produced twice");
            }
            producer[w] = i;
        }
        if (d.outcomes.empty()) {
            throw WiringError(where() + ": device without outcomes");
        }
        Eigen::Index rows = total_dim(d.out_types), cols = total_dim(d.in_types);
        for (const auto &m : d.outcomes) {
            if (m.rows() != rows || m.cols() != cols) {
                throw WiringError(where() + ": outcome matrix shape does not match port dimensions");
            }
        }
        if (d.vars.size() != d.radices.size()) {
            throw WiringError(where() + ": variables and radices differ in length");
        }
        if (!d.vars.empty()) {
            size_t prod = 1;
            for (int r : d.radices) {
                prod *= static_cast<size_t>(r);
            }
            if (prod != d.outcomes.size()) {
                throw WiringError(where() + ": outcome count does not match variable radices");
            }
            layout.outcome_strings *= prod;
            if (layout.outcome_strings > guards.max_outcome_strings) {
                throw GuardError("outcome-string guard exceeded (" + std::to_string(guards.max_outcome_strings) + ")");
            }
        }
        layout.var_offset[i] = offset;
        offset += static_cast<int>(d.vars.size());
    }
    for (int w = 0; w < nw; ++w) {
        if (producer[w] == -2 && consumer[w] != -1) {
            throw WiringError("wire " + detail::wire_desc(c.wires, w) + " is used but never produced");
        }
        if (producer[w] != -2 && consumer[w] == -1) {
            layout.residual.push_back(w);
        }
    }
    // Kahn's algorithm, always taking the lowest ready index.
    std::vector<int> indeg(nd, 0);
    std::vector<std::vector<int>> succ(nd);
    for (int i = 0; i < nd; ++i) {
        for (int w : c.devices[i].inputs) {
            if (producer[w] >= 0) {
                succ[producer[w]].push_back(i);
                ++indeg[i];
            }
        }
    }
    std::vector<int> ready;
    for (int i = 0; i < nd; ++i) {
        if (indeg[i] == 0) {
            ready.push_back(i);
        }
    }
    while (!ready.empty()) {
        auto it = std::min_element(ready.begin(), ready.end());
        int i = *it;
        ready.erase(it);
        layout.order.push_back(i);
        for (int j : succ[i]) {
            if (--indeg[j] == 0) {
                ready.push_back(j);
            }
        }
    }
    if (static_cast<int>(layout.order.size()) != nd) {
        throw WiringError("cyclic wiring");
    }
    return layout;
}

namespace detail {

/// Reorders the tensor factors of every column of `g`. `dims` are the current
/// factor dimensions; new factor k is old factor order[k].
template <class S>
Mat<S> permute_factors(const Mat<S> &g, const std::vector<int> &dims, const std::vector<int> &order) {
    const size_t n = dims.size();
    bool trivial = true;
    for (size_t k = 0; k < n; ++k) {
        trivial = trivial && order[k] == static_cast<int>(k);
    }
    if (trivial) {
        return g;
    }
    std::vector<Eigen::Index> old_stride(n, 1), new_stride(n, 1);
    for (size_t k = n; k-- > 1;) {
        old_stride[k - 1] = old_stride[k] * dims[k];
    }
    // new position of old factor order[k] is k
    for (size_t k = n; k-- > 1;) {
        new_stride[k - 1] = new_stride[k] * dims[order[k]];
    }
    std::vector<Eigen::Index> stride_of_old(n);
    for (size_t k = 0; k < n; ++k) {
        stride_of_old[order[k]] = new_stride[k];
    }
    Mat<S> out(g.rows(), g.cols());
    for (Eigen::Index r = 0; r < g.rows(); ++r) {
        Eigen::Index rem = r, target = 0;
        for (size_t k = 0; k < n; ++k) {
            Eigen::Index digit = rem / old_stride[k];
            rem %= old_stride[k];
            target += digit * stride_of_old[k];
        }
        out.row(target) = g.row(r);
    }
    return out;
}

/// Applies `op` (out x in) to the live factors listed in `inputs`; those
/// factors are removed and `outputs` appended.
template <class S>
void apply_local(Mat<S> &g, std::vector<int> &live, const std::vector<Wire> &wires, const std::vector<int> &inputs,
                 const Mat<S> &op, const std::vector<int> &outputs) {
    std::vector<int> order;
    std::vector<int> rest;
    for (size_t k = 0; k < live.size(); ++k) {
        if (std::find(inputs.begin(), inputs.end(), live[k]) == inputs.end()) {
            order.push_back(static_cast<int>(k));
            rest.push_back(live[k]);
        }
    }
    for (int w : inputs) {
        auto it = std::find(live.begin(), live.end(), w);
        order.push_back(static_cast<int>(it - live.begin()));
    }
    std::vector<int> dims;
    for (int w : live) {
        dims.push_back(wires[w].type.dim);
    }
    Mat<S> permuted = permute_factors(g, dims, order);
    const Eigen::Index in = op.cols(), out = op.rows();
    const Eigen::Index rest_dim = permuted.rows() / in;
    Mat<S> next(rest_dim * out, g.cols());
    for (Eigen::Index c = 0; c < g.cols(); ++c) {
        for (Eigen::Index r = 0; r < rest_dim; ++r) {
            next.block(r * out, c, out, 1) = op * permuted.block(r * in, c, in, 1);
        }
    }
    g = std::move(next);
    rest.insert(rest.end(), outputs.begin(), outputs.end());
    live = std::move(rest);
}

/// Sorts the live factors by wire id.
template <class S>
void canonicalize(Mat<S> &g, std::vector<int> &live, const std::vector<Wire> &wires) {
    std::vector<int> order(live.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return live[a] < live[b]; });
    std::vector<int> dims;
    for (int w : live) {
        dims.push_back(wires[w].type.dim);
    }
    g = permute_factors(g, dims, order);
    std::vector<int> sorted;
    for (int k : order) {
        sorted.push_back(live[k]);
    }
    live = std::move(sorted);
}

template <class S>
Mat<S> summed_outcomes(const Device<S> &d) {
    Mat<S> m = d.outcomes[0];
    for (size_t k = 1; k < d.outcomes.size(); ++k) {
        m += d.outcomes[k];
    }
    return m;
}

/// Depth-first enumeration of joint outcome strings. `leaf(z, g, live)` is
/// called once per string with the contracted object over the live wires.
template <class S, class Leaf>
void enumerate_branches(const Circuit<S> &c, const CircuitLayout &layout, size_t pos, Mat<S> g, std::vector<int> live,
                        OutcomeString &z, Leaf &&leaf) {
    if (pos == layout.order.size()) {
        leaf(static_cast<const OutcomeString &>(z), g, live);
        return;
    }
    int di = layout.order[pos];
    const auto &d = c.devices[di];
    if (d.vars.empty()) {
        Mat<S> op = d.outcomes.size() == 1 ? d.outcomes[0] : summed_outcomes(d);
        apply_local(g, live, c.wires, d.inputs, op, d.outputs);
        enumerate_branches(c, layout, pos + 1, std::move(g), std::move(live), z, leaf);
        return;
    }
    const int off = layout.var_offset[di];
    for (size_t k = 0; k < d.outcomes.size(); ++k) {
        size_t rem = k;
        for (size_t v = d.radices.size(); v-- > 0;) {
            z[off + v] = static_cast<int>(rem % d.radices[v]);
            rem /= d.radices[v];
        }
        Mat<S> gk = g;
        std::vector<int> lk = live;
        apply_local(gk, lk, c.wires, d.inputs, d.outcomes[k], d.outputs);
        enumerate_branches(c, layout, pos + 1, std::move(gk), std::move(lk), z, leaf);
    }
}

template <class S>
Mat<S> discard_all(const Circuit<S> &c, Mat<S> g, std::vector<int> live) {
    std::vector<int> wires = live;
    for (int w : wires) {
        auto it = c.units.find(c.wires[w].type.name);
        if (it == c.units.end()) {
            throw WiringError("no unit effect known for system type '" + c.wires[w].type.name + "' to discard wire " +
                              wire_desc(c.wires, w));
        }
        Mat<S> u = it->second;
        apply_local(g, live, c.wires, {w}, u, {});
    }
    return g;
}

}  // namespace detail

template <class S>
struct OutcomeDistribution {
    std::vector<std::string> variables;
    std::vector<int> radices;
    std::map<OutcomeString, S> entries;

    S total() const {
        S t(0);
        for (const auto &[z, p] : entries) {
            t += p;
        }
        return t;
    }
    S probability(const OutcomeString &z) const {
        auto it = entries.find(z);
        return it == entries.end() ? S(0) : it->second;
    }
    S probability_of(const OutcomePredicate &pred) const {
        S t(0);
        for (const auto &[z, p] : entries) {
            if (pred(z)) {
                t += p;
            }
        }
        return t;
    }
};

/// Joint outcome distribution of a closed circuit. Dangling outputs are
/// discarded with the unit effect of their type.
template <class S>
OutcomeDistribution<S> evaluate_closed(const Circuit<S> &c, const Guards &guards = {}) {
    if (!c.aux_ports.empty()) {
        throw WiringError("evaluate_closed: circuit has open auxiliary ports");
    }
    CircuitLayout layout = analyze(c, guards);
    OutcomeDistribution<S> dist{c.variables(), c.radices(), {}};
    OutcomeString z(dist.variables.size(), 0);
    Mat<S> g = Mat<S>::Ones(1, 1);
    detail::enumerate_branches(c, layout, 0, g, {}, z, [&](const OutcomeString &zz, const Mat<S> &gg, const std::vector<int> &live) {
        Mat<S> p = detail::discard_all(c, gg, live);
        dist.entries[zz] = p(0, 0);
    });
    return dist;
}

/// Sum over accepted outcome strings of the linear map from the auxiliary
/// register to the residual (dangling) outputs.
template <class S>
GTransform<S> accept_map(const Circuit<S> &c, const Guards &guards = {}) {
    if (c.aux_ports.empty()) {
        throw WiringError("accept_map: circuit has no auxiliary ports");
    }
    CircuitLayout layout = analyze(c, guards);
    SystemList in = c.aux_types();
    SystemList out;
    for (int w : layout.residual) {
        out.push_back(c.wires[w].type);
    }
    Eigen::Index din = total_dim(in);
    Mat<S> total = Mat<S>::Zero(total_dim(out), din);
    OutcomeString z(c.variables().size(), 0);
    detail::enumerate_branches(c, layout, 0, Mat<S>(Mat<S>::Identity(din, din)), c.aux_ports, z,
                               [&](const OutcomeString &zz, const Mat<S> &gg, const std::vector<int> &live) {
                                   if (!c.accept(zz)) {
                                       return;
                                   }
                                   Mat<S> g = gg;
                                   std::vector<int> l = live;
                                   detail::canonicalize(g, l, c.wires);
                                   total += g;
                               });
    return {std::move(in), std::move(out), std::move(total)};
}

/// Probability of acceptance with `aux` plugged into the auxiliary register.
template <class S>
S accept_probability(const Circuit<S> &c, const GVector<S> &aux, const Guards &guards = {}) {
    if (aux.systems != c.aux_types()) {
        throw WiringError("accept_probability: auxiliary state type does not match aux ports");
    }
    CircuitLayout layout = analyze(c, guards);
    S total(0);
    OutcomeString z(c.variables().size(), 0);
    Mat<S> g = aux.coords;
    detail::enumerate_branches(c, layout, 0, g, c.aux_ports, z,
                               [&](const OutcomeString &zz, const Mat<S> &gg, const std::vector<int> &live) {
                                   if (c.accept(zz)) {
                                       total += detail::discard_all(c, gg, live)(0, 0);
                                   }
                               });
    return total;
}

/// Acceptance probability of a closed circuit.
template <class S>
S accept_probability(const Circuit<S> &c, const Guards &guards = {}) {
    return evaluate_closed(c, guards).probability_of(c.accept);
}

/// Row vector a with accept probability a . rho: the accept map followed by
/// the unit effect on every residual output.
template <class S>
RowVec<S> acceptance_row(const Circuit<S> &c, const Guards &guards = {}) {
    auto m = accept_map(c, guards);
    CircuitLayout layout = analyze(c, guards);
    Mat<S> u = Mat<S>::Ones(1, 1);
    for (int w : layout.residual) {
        auto it = c.units.find(c.wires[w].type.name);
        if (it == c.units.end()) {
            throw WiringError("no unit effect known for system type '" + c.wires[w].type.name + "'");
        }
        u = kron<S>(u, Mat<S>(it->second));
    }
    return u * m.matrix;
}

/// Zero-pads on the trailing rows/columns to a square matrix.
template <class S>
Mat<S> pad_square(const Mat<S> &m) {
    Eigen::Index n = std::max(m.rows(), m.cols());
    Mat<S> out = Mat<S>::Zero(n, n);
    out.topLeftCorner(m.rows(), m.cols()) = m;
    return out;
}

/// Conditions on the event S. Returns the renormalised restriction and P(S).
template <class S>
std::pair<OutcomeDistribution<S>, S> post_select(const OutcomeDistribution<S> &d, const OutcomePredicate &event,
                                                 double tol = kTolerance) {
    S ps = d.probability_of(event);
    if (is_zero<S>(ps, tol)) {
        throw PostSelectionError("post-selection on an event of probability zero");
    }
    OutcomeDistribution<S> out{d.variables, d.radices, {}};
    for (const auto &[z, p] : d.entries) {
        if (event(z)) {
            out.entries[z] = p / ps;
        }
    }
    return {std::move(out), ps};
}

/// Uniform double in [0,1) from the top 53 bits of one mt19937_64 draw.
inline double unit_uniform(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Draws n outcome strings by inverse-CDF over entries in lexicographic
/// order, one mt19937_64 draw (seeded with `seed`) per sample.
template <class S>
std::vector<OutcomeString> sample(const OutcomeDistribution<S> &d, uint64_t seed, size_t n, double tol = kTolerance) {
    double total = 0;
    std::vector<double> cdf;
    std::vector<const OutcomeString *> keys;
    for (const auto &[z, p] : d.entries) {
        double pd = to_double(p);
        if (pd < -tol) {
            throw PreconditionError("sample: negative probability");
        }
        total += std::max(pd, 0.0);
        cdf.push_back(total);
        keys.push_back(&z);
    }
    if (keys.empty() || std::abs(total - 1.0) > std::max(tol, 1e-12 * static_cast<double>(keys.size()))) {
        throw PreconditionError("sample: distribution is not normalised");
    }
    std::mt19937_64 rng(seed);
    std::vector<OutcomeString> out;
    out.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        double r = unit_uniform(rng) * total;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), r);
        size_t k = static_cast<size_t>(it - cdf.begin());
        if (k == keys.size()) {
            // r rounded up to the total: take the last string of positive mass.
            k = static_cast<size_t>(std::lower_bound(cdf.begin(), cdf.end(), total) - cdf.begin());
        }
        out.push_back(*keys[k]);
    }
    return out;
}

/// Sums outcome components over each cell of `partition`.
template <class S>
Device<S> coarse_grain(const Device<S> &dev, const std::vector<std::vector<int>> &partition) {
    const int n = static_cast<int>(dev.outcomes.size());
    std::vector<int> seen(n, 0);
    for (const auto &cell : partition) {
        if (cell.empty()) {
            throw PreconditionError("coarse_grain: empty cell");
        }
        for (int i : cell) {
            if (i < 0 || i >= n) {
                throw PreconditionError("coarse_grain: outcome index out of range");
            }
            if (seen[i]++) {
                throw PreconditionError("coarse_grain: overlapping partition");
            }
        }
    }
    if (std::count(seen.begin(), seen.end(), 0) != 0) {
        throw PreconditionError("coarse_grain: partition does not cover every outcome");
    }
    Device<S> out = dev;
    out.outcomes.clear();
    for (const auto &cell : partition) {
        Mat<S> m = dev.outcomes[cell[0]];
        for (size_t k = 1; k < cell.size(); ++k) {
            m += dev.outcomes[cell[k]];
        }
        out.outcomes.push_back(std::move(m));
    }
    if (out.outcomes.size() == 1) {
        out.vars.clear();
        out.radices.clear();
    } else {
        std::string name = dev.vars.empty() ? std::string("k") : dev.vars[0];
        out.vars = {name};
        out.radices = {static_cast<int>(out.outcomes.size())};
    }
    return out;
}

}  // namespace gpt

#endif
