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


#ifndef GPTLAB_REPORT_H
#define GPTLAB_REPORT_H

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gptlab/dsl.h"
#include "gptlab/principles.h"
#include "gptlab/protocols.h"
#include "json.hpp"

namespace gpt {

using Json = nlohmann::ordered_json;

class IoError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { Json, Tsv, Text };

OutputFormat output_format_from_string(const std::string &s);
std::string to_string(OutputFormat f);
std::string to_string(ScalarMode m);

struct RunConfig {
    ScalarMode mode = ScalarMode::Exact;
    uint64_t seed = 1;
    double tol = kTolerance;
    Guards guards;
    OutputFormat format = OutputFormat::Json;
    std::optional<std::string> out;
    int jobs = 1;
    std::vector<std::string> paths;

    /// Throws PreconditionError on a non-positive tolerance, guard or job count.
    void validate() const;
};

Json to_json(const RunConfig &cfg);

/// A summary table rendered as TSV or aligned text.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::string render(const Table &t, OutputFormat f);

struct Report {
    Json json;
    Table table;
};

/// JSON (two-space indent) or the table, with a trailing newline.
std::string render(const Report &r, OutputFormat f);

std::string read_file(const std::string &path);
void write_file(const std::string &path, const std::string &text);

/// A built-in theory name, or a path to a theory JSON file.
TheorySpec load_theory(const std::string &name_or_path);

struct LoadedCircuit {
    CircuitAST ast;
    TheorySpec theory;
    Circuit<Rational> circuit;
};

/// Parses and validates a .gpc file. The theory comes from the file header
/// unless `theory_override` is given.
LoadedCircuit load_circuit(const std::string &path, const std::optional<std::string> &theory_override = std::nullopt,
                           const Guards &guards = {});

/// Plugs `aux` into the auxiliary ports with an extra preparation device.
Circuit<Rational> close_with(const Circuit<Rational> &c, const GVector<Rational> &aux);

/// "p/q", integers, or finite decimals such as "0.9" (read exactly).
Rational parse_number(const std::string &text);
std::vector<Rational> parse_number_list(const std::string &text);

/// Family JSON: {"theory", "alpha", "inputs": [{"name", "file"}], "initial"?};
/// files are relative to the JSON file.
AdviceFamily load_family(const std::string &path);

std::string outcome_label(const OutcomeString &z);

template <class S>
Json scalar_json(const S &x) {
    if constexpr (is_exact_v<S>) {
        return to_string(x);
    } else {
        return x;
    }
}

template <class S>
Json distribution_json(const OutcomeDistribution<S> &d) {
    Json out = Json::object();
    out["variables"] = d.variables;
    out["radices"] = d.radices;
    Json entries = Json::array();
    for (const auto &[z, p] : d.entries) {
        entries.push_back({{"outcome", outcome_label(z)}, {"p", scalar_json(p)}});
    }
    out["entries"] = std::move(entries);
    return out;
}

Json to_json(const SigmaBoundReport &r);
Json to_json(const BoundReport &r);
Json to_json(const VonNeumannReport &r, bool with_bits);
Json to_json(const DistillResult &r);
Json to_json(const GentleReport &r);
Json to_json(const PrincipleEntry &e);
Json to_json(const PostBgpReport &r);

/// Runs fn(0..n-1) on up to `jobs` threads; results are written by index so
/// the merged output does not depend on scheduling.
void parallel_for(size_t n, int jobs, const std::function<void(size_t)> &fn);

}  // namespace gpt

#endif
