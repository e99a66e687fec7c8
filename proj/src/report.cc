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

#include "gptlab/report.h"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace gpt {

using Q = Rational;

OutputFormat output_format_from_string(const std::string &s) {
    if (s == "json") {
        return OutputFormat::Json;
    }
    if (s == "tsv") {
        return OutputFormat::Tsv;
    }
    if (s == "text") {
        return OutputFormat::Text;
    }
    throw PreconditionError("unknown output format '" + s + "' (json, tsv, text)");
}

std::string to_string(OutputFormat f) {
    switch (f) {
        case OutputFormat::Json:
            return "json";
        case OutputFormat::Tsv:
            return "tsv";
        case OutputFormat::Text:
            return "text";
    }
    return "json";
}

std::string to_string(ScalarMode m) {
    return m == ScalarMode::Exact ? "exact" : "approx";
}

void RunConfig::validate() const {
    if (!(tol > 0)) {
        throw PreconditionError("tolerance must be positive");
    }
    if (guards.max_outcome_strings == 0) {
        throw PreconditionError("outcome guard must be positive");
    }
    if (jobs < 1) {
        throw PreconditionError("--jobs must be at least 1");
    }
}

Json to_json(const RunConfig &cfg) {
    Json j;
    j["mode"] = to_string(cfg.mode);
    j["seed"] = cfg.seed;
    j["tol"] = cfg.tol;
    j["max_outcome_strings"] = cfg.guards.max_outcome_strings;
    j["format"] = to_string(cfg.format);
    j["jobs"] = cfg.jobs;
    j["paths"] = cfg.paths;
    return j;
}

std::string render(const Table &t, OutputFormat f) {
    std::ostringstream out;
    if (f == OutputFormat::Tsv) {
        auto line = [&](const std::vector<std::string> &row) {
            for (size_t k = 0; k < row.size(); ++k) {
                out << (k ? "\t" : "") << row[k];
            }
            out << "\n";
        };
        line(t.header);
        for (const auto &r : t.rows) {
            line(r);
        }
        return out.str();
    }
    std::vector<size_t> width(t.header.size(), 0);
    auto measure = [&](const std::vector<std::string> &row) {
        for (size_t k = 0; k < row.size() && k < width.size(); ++k) {
            width[k] = std::max(width[k], row[k].size());
        }
    };
    measure(t.header);
    for (const auto &r : t.rows) {
        measure(r);
    }
    auto line = [&](const std::vector<std::string> &row) {
        std::string s;
        for (size_t k = 0; k < row.size(); ++k) {
            std::string cell = row[k];
            if (k + 1 < row.size() && k < width.size()) {
                cell.resize(width[k], ' ');
                cell += "  ";
            }
            s += cell;
        }
        out << s << "\n";
    };
    line(t.header);
    for (const auto &r : t.rows) {
        line(r);
    }
    return out.str();
}

std::string render(const Report &r, OutputFormat f) {
    if (f == OutputFormat::Json) {
        return r.json.dump(2) + "\n";
    }
    return render(r.table, f);
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read '" + path + "'");
    }
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write '" + path + "'");
    }
    out << text;
}

TheorySpec load_theory(const std::string &name_or_path) {
    namespace fs = std::filesystem;
    if (name_or_path.size() > 5 && name_or_path.ends_with(".json")) {
        Json j;
        try {
            j = Json::parse(read_file(name_or_path));
        } catch (const nlohmann::json::exception &e) {
            throw PreconditionError("theory JSON '" + name_or_path + "': " + e.what());
        }
        try {
            return theory_from_json(j);
        } catch (const nlohmann::json::exception &e) {
            throw PreconditionError("theory JSON '" + name_or_path + "': " + e.what());
        }
    }
    return builtin_theory(name_or_path);
}

LoadedCircuit load_circuit(const std::string &path, const std::optional<std::string> &theory_override,
                           const Guards &guards) {
    LoadedCircuit out;
    out.ast = parse(read_file(path));
    out.theory = load_theory(theory_override.value_or(out.ast.theory));
    out.circuit = validate(out.ast, out.theory, guards);
    return out;
}

Circuit<Q> close_with(const Circuit<Q> &c, const GVector<Q> &aux) {
    if (!(aux.systems == c.aux_types())) {
        throw PreconditionError("aux state does not match the auxiliary ports");
    }
    Circuit<Q> out = c;
    Device<Q> prep;
    prep.kind = DeviceKind::Preparation;
    prep.label = "aux";
    prep.out_types = aux.systems;
    prep.outputs = c.aux_ports;
    prep.outcomes = {Mat<Q>(aux.coords)};
    out.devices.insert(out.devices.begin(), std::move(prep));
    out.aux_ports.clear();
    return out;
}

Q parse_number(const std::string &text) {
    auto dot = text.find('.');
    if (dot == std::string::npos) {
        return parse_rational(text);
    }
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    const auto places = text.size() - dot - 1;
    if (places == 0 || digits.empty() || digits == "-" || text.find('/') != std::string::npos) {
        throw std::invalid_argument("not a number: '" + text + "'");
    }
    Q v = parse_rational(digits);
    Integer scale = 1;
    for (size_t k = 0; k < places; ++k) {
        scale *= 10;
    }
    return v / Q(scale);
}

std::vector<Q> parse_number_list(const std::string &text) {
    std::vector<Q> out;
    std::stringstream s(text);
    std::string item;
    while (std::getline(s, item, ',')) {
        item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
        if (!item.empty()) {
            out.push_back(parse_number(item));
        }
    }
    return out;
}

AdviceFamily load_family(const std::string &path) {
    namespace fs = std::filesystem;
    Json j;
    try {
        j = Json::parse(read_file(path));
    } catch (const nlohmann::json::exception &e) {
        throw PreconditionError("family JSON '" + path + "': " + e.what());
    }
    AdviceFamily fam;
    try {
        fam.theory = load_theory(j.at("theory").get<std::string>());
        if (j.contains("alpha")) {
            fam.alpha = parse_number(j["alpha"].get<std::string>());
        }
        if (j.contains("beta")) {
            fam.beta = parse_number(j["beta"].get<std::string>());
        }
        const fs::path dir = fs::path(path).parent_path();
        for (const auto &in : j.at("inputs")) {
            const std::string file = in.at("file").get<std::string>();
            fam.names.push_back(in.value("name", file));
            auto ast = parse(read_file((dir / file).string()));
            fam.inputs.push_back(validate(ast, fam.theory));
        }
        if (j.contains("initial")) {
            std::vector<Q> coords;
            for (const auto &x : j["initial"]) {
                coords.push_back(parse_number(x.get<std::string>()));
            }
            if (fam.inputs.empty()) {
                throw PreconditionError("family has no inputs");
            }
            Vec<Q> v(static_cast<Eigen::Index>(coords.size()));
            for (size_t k = 0; k < coords.size(); ++k) {
                v(static_cast<Eigen::Index>(k)) = coords[k];
            }
            GVector<Q> s{fam.inputs[0].aux_types(), v, std::nullopt};
            if (v.size() != total_dim(s.systems) || !membership(fam.theory, s)) {
                throw PreconditionError("family initial advice is not a state of the advice register");
            }
            fam.initial = s;
        }
    } catch (const nlohmann::json::exception &e) {
        throw PreconditionError("family JSON '" + path + "': " + e.what());
    }
    return fam;
}

std::string outcome_label(const OutcomeString &z) {
    std::string s;
    for (size_t k = 0; k < z.size(); ++k) {
        s += (k ? "," : "") + std::to_string(z[k]);
    }
    return s;
}

namespace {

Json vec_json(const Eigen::VectorXd &v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        a.push_back(v(i));
    }
    return a;
}

Json rational_vec_json(const Mat<Q> &v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        a.push_back(to_string(v.data()[i]));
    }
    return a;
}

Json max_accept_json(const MaxAccept &m) {
    Json j;
    j["value"] = m.value;
    j["exact"] = m.exact ? Json(to_string(*m.exact)) : Json(nullptr);
    j["method"] = m.method;
    j["witness"] = vec_json(m.witness);
    return j;
}

}  // namespace

Json to_json(const SigmaBoundReport &r) {
    Json j;
    j["acceptance_row"] = rational_vec_json(Mat<Q>(r.acceptance));
    j["max_accept"] = max_accept_json(r.accept);
    j["sigma_raw"] = r.sigma_raw;
    j["sigma_tilde"] = r.sigma_tilde;
    j["rescale"] = r.rescale;
    j["radii"] = r.radii;
    j["holds"] = r.holds;
    j["raw_holds"] = r.raw_holds;
    j["verdict"] = to_string(r.verdict);
    j["note"] = r.note;
    return j;
}

Json to_json(const BoundReport &r) {
    Json j;
    j["input"] = r.input;
    j["n"] = r.n;
    j["d"] = r.d;
    j["N"] = r.N;
    j["sigma_max"] = r.sigma_max;
    j["max_accept"] = max_accept_json(r.accept);
    j["gap_trace"] = to_string(r.gap_trace);
    j["thresholds"] = {{"accept", to_string(r.accept_threshold)}, {"reject", to_string(r.reject_threshold)}};
    j["classification"] = to_string(r.classification);
    j["sandwich"] = r.sandwich;
    j["reject_chain"] = {{"trace_le_N_sigma", r.chain_trace}, {"sigma_le_third", r.chain_sigma}, {"final", r.chain_final}};
    return j;
}

Json to_json(const VonNeumannReport &r, bool with_bits) {
    Json j;
    j["p0"] = to_string(r.p0);
    j["seed"] = r.seed;
    j["pairs"] = r.pairs;
    j["kept"] = r.kept;
    j["p_hat0"] = r.p_hat0;
    j["bias_bound"] = r.bias_bound;
    j["bias_ok"] = r.bias_ok;
    j["keep_rate"] = r.keep_rate;
    j["expected_keep_rate"] = r.expected_keep_rate;
    j["keep_bound"] = r.keep_bound;
    j["keep_ok"] = r.keep_ok;
    if (with_bits) {
        std::string s;
        s.reserve(r.bits.size());
        for (int b : r.bits) {
            s += static_cast<char>('0' + b);
        }
        j["stream"] = s;
    }
    return j;
}

Json to_json(const DistillResult &r) {
    Json j;
    j["complete"] = r.complete;
    j["result"] = r.complete ? "complete" : "incomplete-distillation";
    j["iterations"] = r.iterations;
    j["t_max"] = r.t_max;
    Json trace = Json::array();
    for (const auto &s : r.trace) {
        Json step;
        step["iteration"] = s.iteration;
        step["input"] = s.input;
        Json succ = Json::array();
        for (const auto &p : s.success) {
            succ.push_back(to_string(p));
        }
        step["success"] = succ;
        step["postselect_probability"] = to_string(s.postselect_probability);
        trace.push_back(step);
    }
    j["trace"] = trace;
    j["final_state"] = rational_vec_json(Mat<Q>(r.final_state.coords));
    Json fin = Json::array();
    for (const auto &p : r.final_success) {
        fin.push_back(to_string(p));
    }
    j["final_success"] = fin;
    return j;
}

Json to_json(const GentleReport &r) {
    Json j;
    j["seed"] = r.seed;
    j["trials"] = r.trials;
    j["dims"] = r.dims;
    j["trials_per_dim"] = r.trials_per_dim;
    j["max_ratio"] = r.max_ratio;
    j["violations"] = r.violations;
    j["tolerance"] = r.tolerance;
    j["zero_eps_cases"] = r.zero_eps_cases;
    j["zero_eps_exact"] = r.zero_eps_exact;
    return j;
}

Json to_json(const PrincipleEntry &e) {
    return {{"principle", e.principle}, {"verdict", to_string(e.verdict)}, {"detail", e.detail}};
}

Json to_json(const PostBgpReport &r) {
    Json j;
    j["p_s"] = to_string(r.p_s);
    j["bound"] = to_string(r.bound);
    j["postselect_clause"] = r.clause_postselect;
    j["p_accept_given_s"] = to_string(r.p_accept_given_s);
    j["outcome"] = r.outcome;
    j["failed_clause"] = r.failed_clause;
    return j;
}

void parallel_for(size_t n, int jobs, const std::function<void(size_t)> &fn) {
    const size_t workers = std::min<size_t>(n, static_cast<size_t>(std::max(1, jobs)));
    if (workers <= 1) {
        for (size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

}  // namespace gpt
