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

#include <cmath>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "gptlab/report.h"

using namespace gpt;
using Q = Rational;

namespace {

// Exit codes.
constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitGuard = 3;
constexpr int kExitViolation = 4;

struct Outcome {
    Report report;
    int exit_code = kExitOk;
};

Json header(const std::string &command, const RunConfig &cfg) {
    Json j;
    j["command"] = command;
    j["config"] = to_json(cfg);
    return j;
}

template <class S>
std::string to_string_any(const S &x) {
    if constexpr (is_exact_v<S>) {
        return to_string(x);
    } else {
        return Json(x).dump();
    }
}

template <class S>
void add_distribution(Report &r, const OutcomeDistribution<S> &dist, const std::string &key) {
    r.json[key] = distribution_json(dist);
    for (const auto &[z, p] : dist.entries) {
        r.table.rows.push_back({key, outcome_label(z), to_string_any(p)});
    }
}

// ---------------------------------------------------------------------------

template <class S>
void simulate_in(Report &r, const Circuit<Q> &exact_circuit, const RunConfig &cfg) {
    Circuit<S> c = exact_circuit.template cast<S>();
    auto dist = evaluate_closed(c, cfg.guards);
    r.table.header = {"section", "outcome", "p"};
    add_distribution(r, dist, "distribution");
    S acc = dist.probability_of(c.accept);
    r.json["accept_probability"] = scalar_json(acc);
    r.table.rows.push_back({"accept", "", to_string_any(acc)});
    if (c.post_select) {
        auto [cond, ps] = post_select(dist, *c.post_select, cfg.tol);
        Json post;
        post["p_s"] = scalar_json(ps);
        post["distribution"] = distribution_json(cond);
        post["accept_probability"] = scalar_json(cond.probability_of(c.accept));
        r.json["postselect"] = post;
        r.table.rows.push_back({"p_s", "", to_string_any(ps)});
        r.table.rows.push_back({"accept|S", "", to_string_any(cond.probability_of(c.accept))});
    }
}

Outcome cmd_simulate(const RunConfig &cfg, const std::string &file, const std::optional<std::string> &theory,
                     const std::optional<std::string> &aux) {
    auto loaded = load_circuit(file, theory, cfg.guards);
    Circuit<Q> c = loaded.circuit;
    Outcome out;
    out.report.json = header("simulate", cfg);
    out.report.json["file"] = file;
    out.report.json["theory"] = loaded.theory.name;
    if (!c.aux_ports.empty()) {
        if (!aux) {
            throw PreconditionError("circuit has auxiliary ports; pass their state with --aux");
        }
        auto coords = parse_number_list(*aux);
        Vec<Q> v(static_cast<Eigen::Index>(coords.size()));
        for (size_t k = 0; k < coords.size(); ++k) {
            v(static_cast<Eigen::Index>(k)) = coords[k];
        }
        GVector<Q> s{c.aux_types(), v, std::nullopt};
        if (v.size() != total_dim(s.systems) || !membership(loaded.theory, s)) {
            throw PreconditionError("--aux is not a physical state of the auxiliary register");
        }
        out.report.json["aux"] = *aux;
        c = close_with(c, s);
    }
    if (cfg.mode == ScalarMode::Exact) {
        simulate_in<Q>(out.report, c, cfg);
    } else {
        simulate_in<double>(out.report, c, cfg);
    }
    return out;
}

// ---------------------------------------------------------------------------

TruthTable named_function(const std::string &spec, int n, uint64_t seed) {
    const size_t size = size_t{1} << n;
    std::vector<uint8_t> bits(size, 0);
    auto popcount = [](size_t x) { return static_cast<int>(__builtin_popcountll(x)); };
    for (size_t x = 0; x < size; ++x) {
        if (spec == "AND") {
            bits[x] = x == size - 1;
        } else if (spec == "OR") {
            bits[x] = x != 0;
        } else if (spec == "XOR" || spec == "PARITY") {
            bits[x] = popcount(x) % 2;
        } else if (spec == "NOT") {
            if (n != 1) {
                throw PreconditionError("NOT needs n = 1");
            }
            bits[x] = x == 0;
        } else if (spec == "ZERO") {
            bits[x] = 0;
        } else if (spec == "ONE") {
            bits[x] = 1;
        } else if (spec == "MAJ") {
            bits[x] = 2 * popcount(x) > n;
        } else if (spec != "random") {
            if (spec.size() != size || spec.find_first_not_of("01") != std::string::npos) {
                throw PreconditionError("--f must be AND, OR, XOR, NOT, ZERO, ONE, MAJ, random, or 2^n bits");
            }
            bits[x] = spec[x] == '1';
        }
    }
    if (spec == "random") {
        std::mt19937_64 rng(seed);
        for (auto &b : bits) {
            b = static_cast<uint8_t>(rng() >> 63);
        }
    }
    return TruthTable(n, bits);
}

Outcome cmd_advice_demo(const RunConfig &cfg, int n, const std::string &f_spec) {
    if (n < 1 || n > kMaxRhoArity) {
        throw GuardError("advice-demo: n must be between 1 and 12");
    }
    TruthTable f = named_function(f_spec, n, cfg.seed);
    const size_t size = size_t{1} << n;
    std::vector<AdviceEval> evals(size);
    parallel_for(size, cfg.jobs, [&](size_t x) {
        std::vector<int> bits(n);
        for (int j = 0; j < n; ++j) {
            bits[j] = static_cast<int>((x >> (n - 1 - j)) & 1);
        }
        evals[x] = advice_parity_eval(f, bits);
    });
    Outcome out;
    Json &j = out.report.json;
    j = header("advice-demo", cfg);
    j["n"] = n;
    j["function"] = f_spec;
    std::string table;
    for (auto b : f.bits) {
        table += static_cast<char>('0' + b);
    }
    j["truth_table"] = table;
    Json rows = Json::array();
    size_t matches = 0;
    out.report.table.header = {"x", "f(x)", "eval", "match"};
    for (size_t x = 0; x < size; ++x) {
        std::string xs;
        for (int k = n - 1; k >= 0; --k) {
            xs += static_cast<char>('0' + ((x >> k) & 1));
        }
        const bool ok = evals[x].deterministic && evals[x].bit == static_cast<int>(f(static_cast<uint32_t>(x)));
        matches += ok;
        rows.push_back({{"x", xs}, {"f", f(static_cast<uint32_t>(x)) ? 1 : 0}, {"eval", evals[x].bit}, {"match", ok}});
        out.report.table.rows.push_back({xs, std::to_string(f(static_cast<uint32_t>(x))), std::to_string(evals[x].bit), ok ? "yes" : "no"});
    }
    j["inputs"] = rows;
    j["matches"] = matches;
    j["total"] = size;
    j["verdict"] = matches == size ? "exact match" : "mismatch";
    out.report.table.rows.push_back({"total", std::to_string(matches) + "/" + std::to_string(size), "",
                                     matches == size ? "exact match" : "mismatch"});
    return out;
}

// ---------------------------------------------------------------------------

DRule parse_d_rule(const std::string &spec) {
    if (spec == "default") {
        return default_d_rule;
    }
    if (spec == "n") {
        return [](int n) { return n; };
    }
    if (spec.rfind("const:", 0) == 0) {
        int k = std::stoi(spec.substr(6));
        return [k](int) { return k; };
    }
    throw PreconditionError("--d-rule must be default, n, or const:K");
}

int log2_ceil(Eigen::Index N) {
    int n = 0;
    while ((Eigen::Index{1} << n) < N) {
        ++n;
    }
    return n;
}

Outcome cmd_gma_bound(const RunConfig &cfg, const std::vector<std::string> &files, const std::string &d_rule_spec,
                      const std::optional<std::string> &family, int n_max, const std::optional<std::string> &theory_name) {
    DRule rule = parse_d_rule(d_rule_spec);
    struct Job {
        std::string name;
        TheorySpec theory;
        Circuit<Q> circuit;
        int n = -1;
    };
    std::vector<Job> jobs;
    for (const auto &f : files) {
        auto loaded = load_circuit(f, theory_name, cfg.guards);
        jobs.push_back({f, loaded.theory, loaded.circuit});
    }
    if (family) {
        if (*family != "accept" && *family != "reject") {
            throw PreconditionError("--family must be accept or reject");
        }
        if (n_max < 1 || n_max > 8) {
            throw GuardError("--n-max must be between 1 and 8");
        }
        TheorySpec classical = builtin_theory("classical");
        for (int n = 1; n <= n_max; ++n) {
            for (int x = 0; x < (1 << n); ++x) {
                std::vector<int> bits(n);
                std::string label = *family + ":";
                for (int j = 0; j < n; ++j) {
                    bits[j] = (x >> (n - 1 - j)) & 1;
                    label += static_cast<char>('0' + bits[j]);
                }
                auto ast = parse(gma_fixture_text(bits, *family == "reject"));
                jobs.push_back({label, classical, validate(ast, classical, cfg.guards), n});
            }
        }
    }
    if (jobs.empty()) {
        throw PreconditionError("gma-bound: no circuit files and no --family given");
    }
    std::vector<BoundReport> bounds(jobs.size());
    std::vector<SigmaBoundReport> sigmas(jobs.size());
    // Configuration errors surface before any parallel work.
    for (auto &job : jobs) {
        if (job.circuit.aux_ports.empty()) {
            throw PreconditionError("gma-bound: '" + job.name + "' has no auxiliary ports");
        }
        if (job.n < 0) {
            job.n = log2_ceil(pad_square(accept_map(job.circuit, cfg.guards).matrix).rows());
        }
        check_d_rule(job.n, rule(job.n));
    }
    parallel_for(jobs.size(), cfg.jobs, [&](size_t i) {
        bounds[i] = gma_bound(jobs[i].theory, {jobs[i].name, jobs[i].n, jobs[i].circuit}, rule, cfg.tol);
        sigmas[i] = verify_sigma_bound(jobs[i].circuit, jobs[i].theory, cfg.tol);
    });
    Outcome out;
    Json &j = out.report.json;
    j = header("gma-bound", cfg);
    j["d_rule"] = d_rule_spec;
    Json reports = Json::array();
    out.report.table.header = {"input", "n", "d", "N", "sigma_max", "max_accept", "gap_trace", "classification", "sigma_bound"};
    bool violation = false;
    for (size_t i = 0; i < jobs.size(); ++i) {
        Json r = to_json(bounds[i]);
        r["sigma_bound"] = to_json(sigmas[i]);
        reports.push_back(r);
        violation |= bounds[i].classification == Classification::Violation || sigmas[i].verdict == Verdict::Fail;
        out.report.table.rows.push_back({bounds[i].input, std::to_string(bounds[i].n), std::to_string(bounds[i].d),
                                         std::to_string(bounds[i].N), Json(bounds[i].sigma_max).dump(),
                                         Json(bounds[i].accept.value).dump(), to_string(bounds[i].gap_trace),
                                         to_string(bounds[i].classification), to_string(sigmas[i].verdict)});
    }
    j["reports"] = reports;
    j["violation"] = violation;
    out.exit_code = violation ? kExitViolation : kExitOk;
    return out;
}

// ---------------------------------------------------------------------------

Outcome cmd_verify(const RunConfig &cfg, const std::string &theory_arg, int depth) {
    TheorySpec theory = load_theory(theory_arg);
    auto entries = verify_theory(theory, depth);
    Outcome out;
    Json &j = out.report.json;
    j = header("verify", cfg);
    j["theory"] = theory.name;
    Json list = Json::array();
    out.report.table.header = {"principle", "verdict", "detail"};
    for (const auto &e : entries) {
        list.push_back(to_json(e));
        out.report.table.rows.push_back({e.principle, to_string(e.verdict), e.detail});
    }
    j["principles"] = list;
    return out;
}

Outcome cmd_unbias(const RunConfig &cfg, const std::string &p_text, size_t n, bool emit_bits) {
    Q p = parse_number(p_text);
    auto rep = von_neumann_bit(p, n, cfg.seed);
    Outcome out;
    out.report.json = header("unbias", cfg);
    out.report.json["result"] = to_json(rep, emit_bits);
    out.report.table.header = {"p0", "pairs", "kept", "p_hat0", "bias_bound", "keep_rate", "expected_keep_rate"};
    out.report.table.rows.push_back({to_string(rep.p0), std::to_string(rep.pairs), std::to_string(rep.kept),
                                     Json(rep.p_hat0).dump(), Json(rep.bias_bound).dump(), Json(rep.keep_rate).dump(),
                                     Json(rep.expected_keep_rate).dump()});
    return out;
}

Outcome cmd_distill(const RunConfig &cfg, const std::string &family_path, int t_max) {
    AdviceFamily fam = load_family(family_path);
    auto res = advice_distillation(fam, t_max);
    Outcome out;
    out.report.json = header("distill", cfg);
    out.report.json["family"] = family_path;
    out.report.json["inputs"] = fam.names;
    out.report.json["alpha"] = to_string(fam.alpha);
    out.report.json["result"] = to_json(res);
    out.report.table.header = {"iteration", "input", "postselect_probability", "success"};
    for (const auto &s : res.trace) {
        std::string succ;
        for (size_t k = 0; k < s.success.size(); ++k) {
            succ += (k ? "," : "") + to_string(s.success[k]);
        }
        out.report.table.rows.push_back(
            {std::to_string(s.iteration), fam.names[s.input], to_string(s.postselect_probability), succ});
    }
    std::string fin;
    for (size_t k = 0; k < res.final_success.size(); ++k) {
        fin += (k ? "," : "") + to_string(res.final_success[k]);
    }
    out.report.table.rows.push_back({"final", res.complete ? "complete" : "incomplete-distillation", "", fin});
    return out;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"gptlab: circuits, principles and proof bounds for generalised probabilistic theories"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    std::string mode = "exact", format = "json";
    std::string out_path;
    app.add_option("--mode", mode, "Scalar mode")->check(CLI::IsMember({"exact", "approx"}));
    app.add_option("--seed", cfg.seed, "Random seed");
    app.add_option("--tol", cfg.tol, "Numerical tolerance");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "tsv", "text"}));
    app.add_option("--jobs", cfg.jobs, "Worker threads");
    app.add_option("--out", out_path, "Write the report to this path");
    app.add_option("--max-outcomes", cfg.guards.max_outcome_strings, "Outcome-string guard");

    auto *sim = app.add_subcommand("simulate", "Evaluate a circuit file");
    std::string sim_file;
    std::optional<std::string> sim_theory, sim_aux;
    sim->add_option("file", sim_file, ".gpc circuit")->required();
    sim->add_option("--theory", sim_theory, "Built-in theory name or theory JSON");
    sim->add_option("--aux", sim_aux, "Comma-separated coordinates of the aux state");

    auto *adv = app.add_subcommand("advice-demo", "Evaluate f(x) from the rho_f advice state");
    int adv_n = 2;
    std::string adv_f = "random";
    adv->add_option("--n", adv_n, "Input length")->required();
    adv->add_option("--f", adv_f, "AND, OR, XOR, NOT, ZERO, ONE, MAJ, random, or a 2^n-bit table");

    auto *gma = app.add_subcommand("gma-bound", "Spectral bounds and threshold classification");
    std::vector<std::string> gma_files;
    std::string gma_rule = "default";
    std::optional<std::string> gma_family, gma_theory;
    int gma_nmax = 4;
    gma->add_option("files", gma_files, ".gpc circuits with aux ports");
    gma->add_option("--d-rule", gma_rule, "default, n, or const:K");
    gma->add_option("--family", gma_family, "Generated family: accept or reject");
    gma->add_option("--n-max", gma_nmax, "Largest input length for --family");
    gma->add_option("--theory", gma_theory, "Built-in theory name or theory JSON");

    auto *ver = app.add_subcommand("verify", "Check operational principles of a theory");
    std::string ver_theory;
    int ver_depth = 8;
    ver->add_option("theory", ver_theory, "Built-in theory name or theory JSON")->required();
    ver->add_option("--depth", ver_depth, "Symmetry search depth");

    auto *unb = app.add_subcommand("unbias", "Von Neumann extraction from a biased coin");
    std::string unb_p;
    size_t unb_n = 100000;
    bool unb_bits = false;
    unb->add_option("--p", unb_p, "P(outcome 0), as p/q or a decimal")->required();
    unb->add_option("--n", unb_n, "Number of sampled pairs");
    unb->add_flag("--emit-bits", unb_bits, "Include the output bit stream");

    auto *dis = app.add_subcommand("distill", "Advice distillation on a quantum family");
    std::string dis_family;
    int dis_tmax = 0;
    dis->add_option("family", dis_family, "Family JSON")->required();
    dis->add_option("--t-max", dis_tmax, "Iteration cap (default 8 per input)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    try {
        cfg.mode = mode == "exact" ? ScalarMode::Exact : ScalarMode::Approx;
        cfg.format = output_format_from_string(format);
        if (!out_path.empty()) {
            cfg.out = out_path;
        }
        cfg.validate();
        Outcome result;
        if (sim->parsed()) {
            cfg.paths = {sim_file};
            result = cmd_simulate(cfg, sim_file, sim_theory, sim_aux);
        } else if (adv->parsed()) {
            result = cmd_advice_demo(cfg, adv_n, adv_f);
        } else if (gma->parsed()) {
            cfg.paths = gma_files;
            result = cmd_gma_bound(cfg, gma_files, gma_rule, gma_family, gma_nmax, gma_theory);
        } else if (ver->parsed()) {
            cfg.paths = {ver_theory};
            result = cmd_verify(cfg, ver_theory, ver_depth);
        } else if (unb->parsed()) {
            result = cmd_unbias(cfg, unb_p, unb_n, unb_bits);
        } else if (dis->parsed()) {
            cfg.paths = {dis_family};
            result = cmd_distill(cfg, dis_family, dis_tmax);
        }
        // The config may have gained paths after the header was written.
        result.report.json["config"] = to_json(cfg);
        const std::string text = render(result.report, cfg.format);
        if (cfg.out) {
            write_file(*cfg.out, text);
        } else {
            std::cout << text;
        }
        return result.exit_code;
    } catch (const DslError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const GuardError &e) {
        std::cerr << "guard: " << e.what() << "\n";
        return kExitGuard;
    } catch (const PostSelectionError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const IoError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::out_of_range &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception &e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
