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


// Acceptance gate: one line per criterion, nonzero exit if any fails.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "gptlab/dsl.h"
#include "gptlab/principles.h"
#include "gptlab/protocols.h"
#include "gptlab/report.h"

using namespace gpt;
using Q = Rational;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double budget_seconds;
    std::function<Outcome()> run;
};

Q power(Q base, int e) {
    Q out = 1;
    for (int i = 0; i < e; ++i) {
        out *= base;
    }
    return out;
}

std::string fixture(const std::string &rel) {
    return std::string(GPTLAB_FIXTURE_DIR) + "/" + rel;
}

std::vector<int> bits_of(uint32_t x, int n) {
    std::vector<int> out(n);
    for (int j = 0; j < n; ++j) {
        out[j] = static_cast<int>((x >> (n - 1 - j)) & 1);
    }
    return out;
}

std::string cli_stdout(const std::string &args, int &code) {
    std::string cmd = std::string(GPTLAB_CLI_PATH) + " " + args + " 2>/dev/null";
    std::string out;
    FILE *p = popen(cmd.c_str(), "r");
    if (p == nullptr) {
        code = -1;
        return out;
    }
    std::array<char, 4096> buf{};
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) {
        out.append(buf.data(), n);
    }
    int status = pclose(p);
    code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return out;
}

Outcome pr_box_table() {
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            auto path = fixture("pr/pr_x" + std::to_string(x) + "_y" + std::to_string(y) + ".gpc");
            auto d = evaluate_closed(load_circuit(path).circuit);
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    Q expected = (a ^ b) == (x & y) ? Q(1, 2) : Q(0);
                    if (d.probability({a, b}) != expected) {
                        return {false, "mismatch at x=" + std::to_string(x) + " y=" + std::to_string(y)};
                    }
                }
            }
        }
    }
    return {true, "4 settings x 4 outcomes exact"};
}

Outcome advice_parity() {
    size_t evaluations = 0;
    auto check = [&](const TruthTable &f) {
        for (uint32_t x = 0; x < (1u << f.n); ++x) {
            auto r = advice_parity_eval(f, bits_of(x, f.n));
            ++evaluations;
            if (!r.deterministic || r.bit != static_cast<int>(f(x))) {
                return false;
            }
        }
        return true;
    };
    for (int n = 1; n <= 3; ++n) {
        for (uint32_t t = 0; t < (1u << (1u << n)); ++t) {
            std::vector<uint8_t> bits(size_t{1} << n);
            for (size_t i = 0; i < bits.size(); ++i) {
                bits[i] = static_cast<uint8_t>((t >> i) & 1);
            }
            if (!check(TruthTable(n, bits))) {
                return {false, "error at n=" + std::to_string(n)};
            }
        }
    }
    std::mt19937_64 rng(4);
    for (int rep = 0; rep < 1000; ++rep) {
        uint32_t t = static_cast<uint32_t>(rng() & 0xffff);
        std::vector<uint8_t> bits(16);
        for (size_t i = 0; i < 16; ++i) {
            bits[i] = static_cast<uint8_t>((t >> i) & 1);
        }
        if (!check(TruthTable(4, bits))) {
            return {false, "error at n=4"};
        }
    }
    return {true, std::to_string(evaluations) + " evaluations, 0 errors"};
}

Outcome gentle() {
    auto r = gentle_measurement_check(10000, 2026, {2, 3, 4}, 1e-9);
    std::ostringstream s;
    s << r.trials << " trials, " << r.violations << " violations, max ratio " << r.max_ratio << ", " << r.zero_eps_cases
      << " exact eps=0 cases";
    return {r.trials >= 10000 && r.violations == 0 && r.zero_eps_cases > 0 && r.zero_eps_exact, s.str()};
}

Outcome sigma_bound() {
    std::mt19937_64 rng(404);
    size_t total = 0;
    double worst = -1e300;
    for (const char *name : {"classical", "quantum", "boxworld"}) {
        TheorySpec t = builtin_theory(name);
        for (int rep = 0; rep < 100; ++rep) {
            std::string text = random_aux_circuit_text(t, 2, rng);
            auto c = validate(parse(text), t);
            auto r = verify_sigma_bound(c, t, 1e-9);
            ++total;
            worst = std::max(worst, r.accept.value - r.sigma_tilde);
            if (!r.holds || r.accept.value > r.sigma_tilde + 1e-9) {
                return {false, std::string(name) + " violation:\n" + text};
            }
        }
    }
    std::ostringstream s;
    s << total << " circuits, max(accept - sigma) = " << worst;
    return {true, s.str()};
}

Outcome sandwich() {
    std::mt19937_64 rng(505);
    double worst_sigma = 0;
    for (int rep = 0; rep < 200; ++rep) {
        Eigen::Index n = 1 + static_cast<Eigen::Index>(rng() % 16);
        int d = 1 + static_cast<int>(rng() % 6);
        Mat<Q> m = random_rational_matrix(n, n, rng);
        Eigen::MatrixXd md(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                md(i, j) = to_double(m(i, j));
            }
        }
        double oracle = std::sqrt(std::max(
            0.0, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(md.transpose() * md).eigenvalues().maxCoeff()));
        double s = sigma_max(m);
        worst_sigma = std::max(worst_sigma, std::abs(s - oracle));
        if (std::abs(s - oracle) > 1e-9 * std::max(1.0, oracle)) {
            return {false, "sigma_max disagrees with eigen oracle"};
        }
        double f = to_double(gap_trace(m, d));
        double s2d = std::pow(s, 2.0 * d);
        const double slack = 1e-9;
        if (s2d > f * (1 + slack) + 1e-12 || f > static_cast<double>(n) * s2d * (1 + slack) + 1e-12) {
            return {false, "sandwich fails at N=" + std::to_string(n) + " d=" + std::to_string(d)};
        }
    }
    std::ostringstream s;
    s << "200 matrices, max |sigma - oracle| = " << worst_sigma;
    return {true, s.str()};
}

Outcome threshold() {
    TheorySpec t = classical_theory(2);
    const std::vector<int> x{1, 0, 1, 1};
    size_t checked = 0;
    auto classify = [&](const std::string &name, int n, const Circuit<Q> &c, bool reject) -> std::optional<std::string> {
        auto r = gma_bound(t, {name, n, c}, default_d_rule);
        ++checked;
        if (r.d != (n + 2) / 2) {
            return name + ": unexpected d";
        }
        auto want = reject ? Classification::RejectSide : Classification::AcceptSide;
        if (r.classification != want) {
            return name + ": classified " + to_string(r.classification);
        }
        if (reject) {
            // f <= 2^n (1/3)^(2d) <= (1/2)(2/3)^(2d)
            Q middle = Q(1 << n) * power(Q(1, 9), r.d);
            if (!(r.gap_trace <= middle && middle <= power(Q(4, 9), r.d) / 2) || !r.chain_sigma || !r.chain_trace) {
                return name + ": reject chain fails";
            }
        }
        return std::nullopt;
    };
    for (int n = 1; n <= 4; ++n) {
        for (const char *side : {"accept", "reject"}) {
            std::string rel = std::string("gma/") + side + "_n" + std::to_string(n) + ".gpc";
            auto loaded = load_circuit(fixture(rel));
            if (print(loaded.ast) != print(parse(gma_fixture_text(std::vector<int>(x.begin(), x.begin() + n),
                                                                  std::string(side) == "reject")))) {
                return {false, rel + " differs from the generated family"};
            }
            if (auto err = classify(rel, n, loaded.circuit, std::string(side) == "reject")) {
                return {false, *err};
            }
        }
        for (uint32_t xi = 0; xi < (1u << n); ++xi) {
            for (bool reject : {false, true}) {
                auto c = validate(parse(gma_fixture_text(bits_of(xi, n), reject)), t);
                if (auto err = classify("generated", n, c, reject)) {
                    return {false, *err};
                }
            }
        }
    }
    return {true, std::to_string(checked) + " inputs classified, reject chains hold"};
}

Outcome amplification() {
    auto ast = parse("theory classical\nsystem C : bit\nprepare state(1/3, 2/3) -> C\nmeasure basis() C -> c\naccept c == 1\n");
    auto c = validate(ast, classical_theory(2));
    auto a = amplify(c, 3);
    Q p = evaluate_closed(a).probability_of(a.accept);
    return {p == Q(20, 27), "acceptance " + to_string(p)};
}

Outcome unbiasing() {
    // 10^5 raw coin draws, consumed in pairs.
    std::ostringstream s;
    bool ok = true;
    for (const Q &p : {Q(1, 3), Q(1, 5), Q(9, 10)}) {
        auto r = von_neumann_bit(p, 50000, 808);
        ok = ok && r.bias_ok && r.keep_ok;
        s << "p=" << to_string(p) << ": |dP|=" << std::abs(r.p_hat0 - 0.5) << "<=" << r.bias_bound
          << " keep=" << r.keep_rate << " (expect " << r.expected_keep_rate << ") ";
    }
    return {ok, s.str()};
}

Outcome principles() {
    const std::vector<std::pair<std::string, TheorySpec>> theories{
        {"classical", classical_theory(2)}, {"quantum", quantum_theory(2)}, {"boxworld", boxworld_theory()}};
    for (const auto &[name, t] : theories) {
        if (check_causality(t).verdict != Verdict::Pass) {
            return {false, name + " causality"};
        }
        const SystemType s = t.systems[0].type;
        if (check_tomographic_locality(t, s, s).verdict != Verdict::Pass) {
            return {false, name + " tomographic locality"};
        }
    }
    Vec<Q> a(3), b(3), c(3);
    a << 1, 1, 1;
    b << 1, -1, -1;
    c << 1, 1, -1;
    auto r = find_distinguishing_measurement(boxworld_theory(), {SystemType{"gbit", 3}}, {a, b, c});
    bool cert = !r.feasible && r.certificate_verified && verify_farkas(r.problem, r.farkas);
    return {cert, cert ? "3 theories pass; 3-state gbit LP infeasible, Farkas certificate verified"
                       : "distinguishability certificate missing"};
}

Outcome distillation() {
    auto good = advice_distillation(load_family(fixture("distill/converging/family.json")));
    bool good_ok = good.complete && good.iterations <= good.t_max;
    for (const auto &s : good.final_success) {
        good_ok = good_ok && s >= Q(2, 3);
    }
    auto bad = advice_distillation(load_family(fixture("distill/contradictory/family.json")));
    std::ostringstream s;
    s << "converging: " << good.iterations << "/" << good.t_max << " iterations; contradictory: "
      << (bad.complete ? "complete" : "incomplete-distillation");
    return {good_ok && !bad.complete, s.str()};
}

Outcome determinism() {
    const std::vector<std::string> commands{
        "--seed 11 unbias --p 1/3 --n 5000 --emit-bits",
        "--seed 11 advice-demo --n 4 --f random",
        "gma-bound --family reject --n-max 3",
        "--jobs 3 gma-bound " + fixture("gma/accept_n3.gpc") + " " + fixture("gma/reject_n3.gpc"),
        "simulate " + fixture("pr/pr_x1_y1.gpc"),
        "verify boxworld",
        "distill " + fixture("distill/converging/family.json"),
    };
    for (const auto &cmd : commands) {
        int c1 = 0, c2 = 0;
        std::string a = cli_stdout(cmd, c1);
        std::string b = cli_stdout(cmd, c2);
        if (a.empty() || a != b || c1 != c2) {
            return {false, "report differs for: " + cmd};
        }
    }
    size_t files = 0;
    for (const auto &e : std::filesystem::recursive_directory_iterator(GPTLAB_FIXTURE_DIR)) {
        if (e.path().extension() != ".gpc" || e.path().parent_path().filename() == "invalid") {
            continue;
        }
        auto ast = parse(read_file(e.path().string()));
        if (!(parse(print(ast)) == ast)) {
            return {false, "round-trip fails on " + e.path().string()};
        }
        ++files;
    }
    std::mt19937_64 rng(1111);
    for (int i = 0; i < 500; ++i) {
        auto ast = random_ast(rng, 10);
        std::string text = print(ast);
        if (!(parse(text) == ast) || print(parse(text)) != text) {
            return {false, "round-trip fails on generated AST:\n" + text};
        }
    }
    return {true, std::to_string(commands.size()) + " commands byte-identical; " + std::to_string(files) +
                      " fixtures and 500 generated ASTs round-trip"};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "pr-box-table", 1, pr_box_table},
        {2, "advice-parity-exhaustive", 120, advice_parity},
        {3, "gentle-measurement", 60, gentle},
        {4, "sigma-max-bound", 300, sigma_bound},
        {5, "trace-sandwich", 120, sandwich},
        {6, "threshold-classification", 60, threshold},
        {7, "amplification-20/27", 1, amplification},
        {8, "von-neumann-unbiasing", 30, unbiasing},
        {9, "principle-verifiers", 60, principles},
        {10, "advice-distillation", 30, distillation},
        {11, "determinism-round-trips", 30, determinism},
    };
    int failed = 0;
    for (const auto &c : criteria) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool in_time = secs <= c.budget_seconds;
        bool pass = o.pass && in_time;
        failed += pass ? 0 : 1;
        std::printf("[%s] %2d %-26s %8.3fs (budget %gs)  %s%s\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                    c.budget_seconds, o.detail.c_str(), in_time ? "" : "  [over budget]");
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
