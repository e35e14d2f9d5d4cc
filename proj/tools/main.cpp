/*
 * Copyright 2026 The AIT Toolkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line front end for the sparse-recovery toolkit. Subcommands:
//   gen     generate a reproducible instance bundle
//   solve   run the adaptive thresholding solver on a bundle
//   theory  evaluate convergence bounds / the coherence lower bound
//   sweep   grid of generate->solve->verify pipelines with CSV/JSON reports
//   verify  check a recorded trace against the convergence guarantees
// Exit codes: 0 success, 1 usage or I/O error, 2 solve flagged divergence.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ait/ait.h"

using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void die(const std::string& message) {
    std::fprintf(stderr, "error: %s\n", message.c_str());
    std::exit(1);
}

void check(ait_status status) {
    if (status != AIT_OK)
        die(std::string(ait_status_name(status)) + ": " + ait_last_error());
}

// RAII wrappers over the C handles.
struct Instance {
    ait_instance* ptr = nullptr;
    ~Instance() { ait_instance_free(ptr); }
    Instance() = default;
    Instance(const Instance&) = delete;
    Instance& operator=(const Instance&) = delete;
};

struct Result {
    ait_result* ptr = nullptr;
    ~Result() { ait_result_free(ptr); }
    Result() = default;
    Result(const Result&) = delete;
    Result& operator=(const Result&) = delete;
};

struct RuleSpec {
    int kind = AIT_RULE_HARD;
    double scad_a = 3.7;
    std::string text = "hard";
};

RuleSpec parse_rule_or_die(const std::string& text) {
    RuleSpec rule;
    check(ait_rule_parse(text.c_str(), &rule.kind, &rule.scad_a));
    rule.text = text;
    return rule;
}

std::string canonical_rule_name(const RuleSpec& rule) {
    switch (rule.kind) {
        case AIT_RULE_HARD: return "hard";
        case AIT_RULE_HALF: return "half";
        case AIT_RULE_TWOTHIRDS: return "twothirds";
        case AIT_RULE_SOFT: return "soft";
        default: {
            char digits[40];
            const auto end =
                std::to_chars(digits, digits + sizeof digits, rule.scad_a).ptr;
            return "scad:a=" + std::string(digits, end);
        }
    }
}

const char* halt_reason_text(int reason) {
    switch (reason) {
        case AIT_HALT_STALLED: return "stalled";
        case AIT_HALT_SUPPORT_STABLE_AND_STALLED: return "support_stable_and_stalled";
        default: return "max_iterations";
    }
}

ordered_json json_or_null(double value) {
    if (std::isnan(value)) return nullptr;
    return value;
}

std::vector<int> result_support(const Result& result, int cols) {
    std::vector<int> buffer(static_cast<std::size_t>(cols));
    int len = 0;
    check(ait_result_support(result.ptr, buffer.data(), cols, &len));
    buffer.resize(static_cast<std::size_t>(len));
    return buffer;
}

std::vector<int> truth_support(const Instance& instance, int cols) {
    std::vector<int> buffer(static_cast<std::size_t>(cols));
    int len = 0;
    check(ait_instance_truth_support(instance.ptr, buffer.data(), cols, &len));
    buffer.resize(static_cast<std::size_t>(len));
    return buffer;
}

int thread_budget() {
    unsigned count = std::thread::hardware_concurrency();
    if (count == 0) count = 1;
    if (const char* env = std::getenv("AIT_THREADS")) {
        const long parsed = std::strtol(env, nullptr, 10);
        if (parsed >= 1 && parsed < 1024) count = static_cast<unsigned>(parsed);
    }
    return static_cast<int>(count);
}

void write_solution_csv(const std::string& path, const std::vector<double>& values) {
    std::ofstream out(path, std::ios::binary);
    if (!out) die("cannot open '" + path + "' for writing");
    char buffer[40];
    for (double value : values) {
        std::snprintf(buffer, sizeof buffer, "%.17g", value);
        out << buffer << '\n';
    }
    if (!out) die("write to '" + path + "' failed");
}

// ---- theory bounds -> JSON --------------------------------------------

ordered_json hypotheses_json(const ait_hypothesis_report& report) {
    ordered_json json;
    json["theorem1"] = report.theorem1 != 0;
    json["corollary1"] = report.corollary1 != 0;
    json["mu_limit"] = report.mu_limit;
    json["mu_slack"] = report.mu_slack;
    json["k_upper"] = report.k_upper;
    json["k_lower_slack"] = report.k_lower_slack;
    json["k_upper_slack"] = report.k_upper_slack;
    json["uniqueness_k_limit"] = report.uniqueness_k_limit;
    return json;
}

// Bound block for one rule at (k, k*, mu, dr). Ratios of adjacent true
// magnitudes feed the per-rank recruitment budgets when available.
ordered_json theory_json(const RuleSpec& rule, int k, int k_star, double mu,
                         double dynamic_range, const std::vector<double>& adjacent_ratios) {
    double c = 0.0;
    check(ait_boundedness_constant(rule.kind, rule.scad_a, &c));
    double rho = 0.0;
    check(ait_contraction_factor(c, k, mu, &rho));
    ait_hypothesis_report hypotheses{};
    check(ait_check_hypotheses(c, k, k_star, mu, &hypotheses));

    ordered_json json;
    json["rule"] = canonical_rule_name(rule);
    json["c"] = c;
    json["mu"] = mu;
    json["k"] = k;
    json["k_star"] = k_star;
    json["dynamic_range"] = dynamic_range;
    json["rho"] = rho;
    json["hypotheses"] = hypotheses_json(hypotheses);
    if (hypotheses.theorem1 != 0) {
        double t_bound = 0.0;
        check(ait_iteration_bound(c, k, k_star, mu, dynamic_range, &t_bound));
        double t_exact = 0.0;
        check(ait_iteration_bound(c, k_star, k_star, mu, dynamic_range, &t_exact));
        json["t_bound"] = t_bound;
        json["t_bound_floor"] = static_cast<long>(std::floor(t_bound));
        json["t_bound_ceil"] = static_cast<long>(std::ceil(t_bound));
        json["t_bound_exact_k"] = t_exact;
        ordered_json budgets = ordered_json::array();
        for (double ratio : adjacent_ratios) {
            double budget = 0.0;
            check(ait_detection_budget(c, k, mu, ratio, &budget));
            budgets.push_back(budget);
        }
        json["detection_budgets"] = budgets;
    } else {
        json["t_bound"] = nullptr;
        json["t_bound_floor"] = nullptr;
        json["t_bound_ceil"] = nullptr;
        json["t_bound_exact_k"] = nullptr;
        json["detection_budgets"] = ordered_json::array();
    }
    return json;
}

ordered_json verdict_json(const ait_verdict& verdict) {
    ordered_json json;
    if (verdict.support_identified_at < 0)
        json["support_identified_at"] = nullptr;
    else
        json["support_identified_at"] = verdict.support_identified_at;
    json["within_t_bound"] = verdict.within_t_bound != 0;
    json["geometric_envelope_ok"] = verdict.geometric_envelope_ok != 0;
    json["recruitment_order_ok"] = verdict.recruitment_order_ok != 0;
    json["containment_persistent"] = verdict.containment_persistent != 0;
    json["corollary"] = {{"applicable", verdict.corollary_applicable != 0},
                         {"exact", verdict.corollary_exact != 0}};
    ordered_json envelope;
    if (verdict.envelope_anchor < 0)
        envelope["anchor"] = nullptr;
    else
        envelope["anchor"] = verdict.envelope_anchor;
    envelope["from_identification"] = verdict.envelope_from_identification != 0;
    json["envelope"] = envelope;
    json["rho"] = verdict.rho;
    json["t_bound"] = json_or_null(verdict.t_bound);
    return json;
}

// Adjacent magnitude ratios |x*_r| / |x*_(r+1)| of a truth-carrying instance.
std::vector<double> adjacent_ratios_of(const Instance& instance, int cols) {
    int k_star = 0;
    check(ait_instance_sparsity(instance.ptr, &k_star));
    if (k_star < 2) return {};
    std::vector<double> signal(static_cast<std::size_t>(cols));
    check(ait_instance_truth_signal(instance.ptr, signal.data()));
    const std::vector<int> support = truth_support(instance, cols);  // descending |x*|
    std::vector<double> ratios;
    for (int r = 0; r + 1 < k_star; ++r) {
        const double larger = std::abs(signal[static_cast<std::size_t>(support[r])]);
        const double smaller = std::abs(signal[static_cast<std::size_t>(support[r + 1])]);
        ratios.push_back(larger / smaller);
    }
    return ratios;
}

// ---- gen ---------------------------------------------------------------

struct GenArgs {
    int rows = 0;
    int cols = 0;
    int k_star = 0;
    double dynamic_range = 1.0;
    std::string signs = "random";
    std::uint64_t seed = 0;
    std::string out_dir;
};

int cmd_gen(const GenArgs& args) {
    int sign_rule = AIT_SIGNS_RANDOM;
    if (args.signs == "positive") {
        sign_rule = AIT_SIGNS_POSITIVE;
    } else if (args.signs != "random") {
        die("--signs must be 'random' or 'positive'");
    }
    Instance instance;
    check(ait_instance_generate(args.rows, args.cols, args.k_star, args.dynamic_range,
                                sign_rule, args.seed, &instance.ptr));
    check(ait_instance_save(instance.ptr, args.out_dir.c_str()));
    std::printf("wrote %s (M=%d N=%d k*=%d dr=%.17g seed=%llu)\n", args.out_dir.c_str(),
                args.rows, args.cols, args.k_star, args.dynamic_range,
                static_cast<unsigned long long>(args.seed));
    return 0;
}

// ---- solve -------------------------------------------------------------

struct SolveArgs {
    std::string bundle;
    std::string rule_text = "hard";
    int k = -1;
    long max_iterations = 0;
    double stall_tolerance = 1e-10;
    int window = 5;
    std::string full_trace = "auto";
    std::string trace_path;
    std::string solution_path;
    std::string report_path;
};

int cmd_solve(const SolveArgs& args) {
    const auto start = std::chrono::steady_clock::now();
    const RuleSpec rule = parse_rule_or_die(args.rule_text);

    Instance instance;
    check(ait_instance_load(args.bundle.c_str(), &instance.ptr));
    int rows = 0, cols = 0;
    check(ait_instance_dims(instance.ptr, &rows, &cols));
    int has_truth = 0;
    check(ait_instance_has_truth(instance.ptr, &has_truth));

    int k = args.k;
    if (k < 0) {
        if (has_truth != 0) {
            check(ait_instance_sparsity(instance.ptr, &k));
            std::fprintf(stderr, "note: -k not given; using the ground-truth sparsity k=%d\n",
                         k);
        } else {
            k = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(rows))));
            std::fprintf(stderr,
                         "warning: -k not given and no ground truth; using the ceil(sqrt(M)) "
                         "heuristic k=%d\n",
                         k);
        }
    }

    ait_solver_config config{};
    check(ait_solver_config_init(&config, k));
    config.rule_kind = rule.kind;
    config.scad_a = rule.scad_a;
    if (args.max_iterations > 0) config.max_iterations = args.max_iterations;
    config.stall_tolerance = args.stall_tolerance;
    config.stable_support_window = args.window;
    if (args.full_trace == "on")
        config.keep_full_trace = 1;
    else if (args.full_trace == "off")
        config.keep_full_trace = 0;
    else if (args.full_trace == "auto")
        config.keep_full_trace = -1;
    else
        die("--full-trace must be 'auto', 'on', or 'off'");

    Result result;
    check(ait_solve(instance.ptr, &config, &result.ptr));

    if (!args.trace_path.empty())
        check(ait_result_write_trace_csv(result.ptr, args.trace_path.c_str()));
    if (!args.solution_path.empty()) {
        std::vector<double> final_x(static_cast<std::size_t>(cols));
        check(ait_result_final_x(result.ptr, final_x.data()));
        write_solution_csv(args.solution_path, final_x);
    }

    // Instance block.
    double mu = 0.0, welch = 0.0;
    int pair_i = -1, pair_j = -1;
    check(ait_instance_coherence(instance.ptr, &mu, &pair_i, &pair_j, &welch));
    std::uint64_t seed = 0;
    check(ait_instance_seed(instance.ptr, &seed));

    ordered_json report;
    report["schema"] = 1;
    ordered_json instance_json;
    instance_json["M"] = rows;
    instance_json["N"] = cols;
    instance_json["seed"] = seed;
    if (has_truth != 0) {
        int k_star = 0;
        double dynamic_range = 1.0;
        check(ait_instance_sparsity(instance.ptr, &k_star));
        check(ait_instance_dynamic_range(instance.ptr, &dynamic_range));
        instance_json["k_star"] = k_star;
        instance_json["dynamic_range"] = dynamic_range;
    } else {
        instance_json["k_star"] = nullptr;
        instance_json["dynamic_range"] = nullptr;
    }
    instance_json["coherence"] = {
        {"mu", mu}, {"argmax_pair", {pair_i, pair_j}}, {"welch_lower_bound", welch}};
    report["instance"] = instance_json;

    ordered_json config_json;
    config_json["rule"] = canonical_rule_name(rule);
    config_json["k"] = k;
    config_json["max_iterations"] = config.max_iterations;
    config_json["stall_tolerance"] = config.stall_tolerance;
    config_json["stable_support_window"] = config.stable_support_window;
    int trace_full = 0;
    check(ait_result_trace_is_full(result.ptr, &trace_full));
    config_json["full_trace"] = trace_full != 0;
    report["config"] = config_json;

    long iterations = 0;
    int halt_reason = 0, diverged = 0;
    check(ait_result_iterations(result.ptr, &iterations));
    check(ait_result_halt_reason(result.ptr, &halt_reason));
    check(ait_result_diverged(result.ptr, &diverged));

    ordered_json result_json;
    result_json["iterations_run"] = iterations;
    result_json["halt_reason"] = halt_reason_text(halt_reason);
    result_json["diverged"] = diverged != 0;
    result_json["final_support"] = result_support(result, cols);
    if (has_truth != 0) {
        double linf = 0.0, l2 = 0.0;
        check(ait_result_errors(instance.ptr, result.ptr, &linf, &l2));
        result_json["errors"] = {{"linf", linf}, {"l2", l2}};
    } else {
        result_json["errors"] = nullptr;
    }
    report["result"] = result_json;

    if (has_truth != 0) {
        int k_star = 0;
        double dynamic_range = 1.0;
        check(ait_instance_sparsity(instance.ptr, &k_star));
        check(ait_instance_dynamic_range(instance.ptr, &dynamic_range));
        if (k_star > 0) {
            report["theory"] = theory_json(rule, k, k_star, mu, dynamic_range,
                                           adjacent_ratios_of(instance, cols));
        } else {
            report["theory"] = nullptr;
        }
        ait_verdict verdict{};
        check(ait_verify_result(instance.ptr, result.ptr, rule.kind, rule.scad_a, k, &verdict));
        report["verification"] = verdict_json(verdict);
    } else {
        report["theory"] = nullptr;
        report["verification"] = nullptr;
    }

    const auto elapsed = std::chrono::steady_clock::now() - start;
    report["timing"] = {
        {"wall_ms",
         std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(elapsed).count()}};

    const std::string text = report.dump(2) + "\n";
    if (args.report_path.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        std::ofstream out(args.report_path, std::ios::binary);
        if (!out) die("cannot open '" + args.report_path + "' for writing");
        out << text;
        if (!out) die("write to '" + args.report_path + "' failed");
    }
    return diverged != 0 ? 2 : 0;
}

// ---- theory ------------------------------------------------------------

struct TheoryArgs {
    bool welch = false;
    int rows = 0;
    int cols = 0;
    int k_star = 0;
    double mu = 0.0;
    double dynamic_range = 1.0;
    int k = -1;
    double scad_a = 3.7;
    bool as_json = false;
};

int cmd_theory(const TheoryArgs& args) {
    if (args.welch) {
        double bound = 0.0;
        check(ait_welch_bound(args.rows, args.cols, &bound));
        if (args.as_json) {
            ordered_json json;
            json["M"] = args.rows;
            json["N"] = args.cols;
            json["welch_bound"] = bound;
            std::printf("%s\n", json.dump(2).c_str());
        } else {
            std::printf("welch_bound(M=%d, N=%d) = %.17g\n", args.rows, args.cols, bound);
        }
        return 0;
    }

    const int k = args.k < 0 ? args.k_star : args.k;
    const struct {
        const char* name;
        int kind;
    } rules[] = {{"hard", AIT_RULE_HARD},
                 {"half", AIT_RULE_HALF},
                 {"twothirds", AIT_RULE_TWOTHIRDS},
                 {"soft", AIT_RULE_SOFT},
                 {"scad", AIT_RULE_SCAD}};

    ordered_json rows_json = ordered_json::array();
    for (const auto& entry : rules) {
        RuleSpec rule;
        rule.kind = entry.kind;
        rule.scad_a = args.scad_a;
        rule.text = entry.name;
        rows_json.push_back(
            theory_json(rule, k, args.k_star, args.mu, args.dynamic_range, {}));
    }

    if (args.as_json) {
        ordered_json json;
        json["k_star"] = args.k_star;
        json["mu"] = args.mu;
        json["dynamic_range"] = args.dynamic_range;
        json["k"] = k;
        json["rules"] = rows_json;
        std::printf("%s\n", json.dump(2).c_str());
        return 0;
    }

    std::printf("k*=%d  mu=%.17g  dr=%.17g  k=%d\n", args.k_star, args.mu, args.dynamic_range,
                k);
    std::printf("%-12s %-8s %-10s %-12s %-14s %-9s %-9s %-14s\n", "rule", "c", "rho",
                "hypotheses", "T", "floor(T)", "ceil(T)", "T_at_k_star");
    for (const ordered_json& row : rows_json) {
        const bool ok = row["hypotheses"]["theorem1"].get<bool>();
        std::string t_text = "-", floor_text = "-", ceil_text = "-", exact_text = "-";
        if (ok) {
            char buffer[40];
            std::snprintf(buffer, sizeof buffer, "%.6f", row["t_bound"].get<double>());
            t_text = buffer;
            floor_text = std::to_string(row["t_bound_floor"].get<long>());
            ceil_text = std::to_string(row["t_bound_ceil"].get<long>());
            std::snprintf(buffer, sizeof buffer, "%.6f", row["t_bound_exact_k"].get<double>());
            exact_text = buffer;
        }
        std::printf("%-12s %-8.4g %-10.6g %-12s %-14s %-9s %-9s %-14s\n",
                    row["rule"].get<std::string>().c_str(), row["c"].get<double>(),
                    row["rho"].get<double>(), ok ? "ok" : "violated", t_text.c_str(),
                    floor_text.c_str(), ceil_text.c_str(), exact_text.c_str());
    }
    return 0;
}

// ---- verify ------------------------------------------------------------

struct VerifyArgs {
    std::string bundle;
    std::string trace;
    std::string rule_text;
    int k = 0;
};

int cmd_verify(const VerifyArgs& args) {
    const RuleSpec rule = parse_rule_or_die(args.rule_text);
    Instance instance;
    check(ait_instance_load(args.bundle.c_str(), &instance.ptr));
    ait_verdict verdict{};
    check(ait_verify_trace_csv(instance.ptr, args.trace.c_str(), rule.kind, rule.scad_a,
                               args.k, &verdict));
    ordered_json json = verdict_json(verdict);
    json["schema"] = 1;
    // Order schema first for readability.
    ordered_json out;
    out["schema"] = 1;
    for (auto& item : json.items())
        if (item.key() != "schema") out[item.key()] = item.value();
    std::printf("%s\n", out.dump(2).c_str());
    return 0;
}

// ---- sweep -------------------------------------------------------------

struct SweepCell {
    std::string rule_text;
    int k = 0;
    int rows = 0;
    int cols = 0;
    int k_star = 0;
    double dynamic_range = 1.0;
};

struct TrialOutcome {
    bool errored = false;
    std::string error;
    bool success = false;
    bool certified = false;
    bool diverged = false;
    long iterations = 0;
    int identified_at = -1;  // -1 when never identified
};

struct SweepTask {
    std::size_t cell = 0;
    int trial = 0;
};

// One generate -> solve -> verify pipeline. Trial seeds are base_seed + trial
// index, so cells that share (M, N, k*, dr) solve identical instances.
TrialOutcome run_trial(const SweepCell& cell, const RuleSpec& rule, int sign_rule,
                       std::uint64_t base_seed, int trial, bool support_exact,
                       double linf_threshold) {
    TrialOutcome outcome;
    try {
        Instance instance;
        ait_status status =
            ait_instance_generate(cell.rows, cell.cols, cell.k_star, cell.dynamic_range,
                                  sign_rule, base_seed + static_cast<std::uint64_t>(trial),
                                  &instance.ptr);
        if (status != AIT_OK) {
            outcome.errored = true;
            outcome.error = std::string(ait_status_name(status)) + ": " + ait_last_error();
            return outcome;
        }

        ait_solver_config config{};
        status = ait_solver_config_init(&config, cell.k);
        if (status == AIT_OK) {
            config.rule_kind = rule.kind;
            config.scad_a = rule.scad_a;
        }
        Result result;
        if (status == AIT_OK) status = ait_solve(instance.ptr, &config, &result.ptr);
        if (status != AIT_OK) {
            outcome.errored = true;
            outcome.error = std::string(ait_status_name(status)) + ": " + ait_last_error();
            return outcome;
        }

        int diverged = 0;
        ait_result_diverged(result.ptr, &diverged);
        outcome.diverged = diverged != 0;
        ait_result_iterations(result.ptr, &outcome.iterations);

        if (support_exact) {
            std::vector<int> found = result_support(result, cell.cols);
            std::vector<int> expected = truth_support(instance, cell.cols);
            std::sort(expected.begin(), expected.end());
            outcome.success = found == expected;
        } else {
            double linf = 0.0;
            ait_result_errors(instance.ptr, result.ptr, &linf, nullptr);
            outcome.success = linf < linf_threshold;
        }

        ait_verdict verdict{};
        status = ait_verify_result(instance.ptr, result.ptr, rule.kind, rule.scad_a, cell.k,
                                   &verdict);
        if (status == AIT_OK) {
            outcome.identified_at = verdict.support_identified_at;
            double c = 0.0;
            ait_boundedness_constant(rule.kind, rule.scad_a, &c);
            double mu = 0.0;
            ait_instance_coherence(instance.ptr, &mu, nullptr, nullptr, nullptr);
            ait_hypothesis_report hypotheses{};
            ait_check_hypotheses(c, cell.k, cell.k_star, mu, &hypotheses);
            outcome.certified = hypotheses.theorem1 != 0;
        }
    } catch (const std::exception& e) {
        outcome.errored = true;
        outcome.error = e.what();
    }
    return outcome;
}

// Accepts a scalar or an array; returns an array.
template <typename T>
std::vector<T> as_list(const ordered_json& json, const std::string& key,
                       const std::vector<T>& fallback) {
    if (!json.contains(key)) return fallback;
    const ordered_json& value = json.at(key);
    std::vector<T> list;
    if (value.is_array()) {
        for (const ordered_json& item : value) list.push_back(item.get<T>());
    } else {
        list.push_back(value.get<T>());
    }
    if (list.empty()) die("sweep field '" + key + "' is an empty list");
    return list;
}

int cmd_sweep(const std::string& spec_path, const std::string& out_dir) {
    const auto start = std::chrono::steady_clock::now();
    std::ifstream spec_in(spec_path, std::ios::binary);
    if (!spec_in) die("cannot open '" + spec_path + "' for reading");
    ordered_json spec;
    try {
        spec_in >> spec;
    } catch (const std::exception& e) {
        die(spec_path + ": " + e.what());
    }

    const std::vector<std::string> rules =
        as_list<std::string>(spec, "rule", {"hard"});
    const std::vector<int> ks = as_list<int>(spec, "k", {});
    const std::vector<int> rows_list = as_list<int>(spec, "M", {});
    const std::vector<int> cols_list = as_list<int>(spec, "N", {});
    const std::vector<int> k_star_list = as_list<int>(spec, "k_star", {});
    const std::vector<double> dr_list = as_list<double>(spec, "dr", {1.0});
    if (ks.empty() || rows_list.empty() || cols_list.empty() || k_star_list.empty())
        die("sweep spec must provide k, M, N, and k_star");
    const int trials = spec.value("trials_per_cell", 0);
    if (trials < 1) die("sweep spec must provide trials_per_cell >= 1");
    const std::uint64_t base_seed = spec.value("base_seed", static_cast<std::uint64_t>(0));
    const std::string signs_text = spec.value("signs", std::string("random"));
    int sign_rule = AIT_SIGNS_RANDOM;
    if (signs_text == "positive")
        sign_rule = AIT_SIGNS_POSITIVE;
    else if (signs_text != "random")
        die("sweep field 'signs' must be 'random' or 'positive'");

    bool support_exact = true;
    double linf_threshold = 0.0;
    if (spec.contains("success_criterion")) {
        const ordered_json& criterion = spec.at("success_criterion");
        if (criterion.is_string() && criterion.get<std::string>() == "support_exact") {
            support_exact = true;
        } else if (criterion.is_object() && criterion.contains("linf_below")) {
            support_exact = false;
            linf_threshold = criterion.at("linf_below").get<double>();
        } else {
            die("success_criterion must be \"support_exact\" or {\"linf_below\": eps}");
        }
    }

    // Parse each rule once up front so bad names fail before any work runs.
    std::vector<RuleSpec> rule_specs;
    for (const std::string& text : rules) rule_specs.push_back(parse_rule_or_die(text));

    std::vector<SweepCell> cells;
    std::vector<std::size_t> cell_rule;  // index into rule_specs
    for (std::size_t r = 0; r < rules.size(); ++r)
        for (int k : ks)
            for (int m : rows_list)
                for (int n : cols_list)
                    for (int k_star : k_star_list)
                        for (double dr : dr_list) {
                            SweepCell cell;
                            cell.rule_text = rules[r];
                            cell.k = k;
                            cell.rows = m;
                            cell.cols = n;
                            cell.k_star = k_star;
                            cell.dynamic_range = dr;
                            cells.push_back(cell);
                            cell_rule.push_back(r);
                        }

    // Flatten into tasks; workers fill preassigned slots, so the aggregation
    // below is order-independent and deterministic.
    std::vector<SweepTask> tasks;
    for (std::size_t c = 0; c < cells.size(); ++c)
        for (int t = 0; t < trials; ++t) tasks.push_back({c, t});
    std::vector<TrialOutcome> outcomes(tasks.size());

    const int workers =
        std::min<int>(thread_budget(), static_cast<int>(std::max<std::size_t>(tasks.size(), 1)));
    std::atomic<std::size_t> next_task{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t index = next_task.fetch_add(1);
            if (index >= tasks.size()) return;
            const SweepTask& task = tasks[index];
            outcomes[index] =
                run_trial(cells[task.cell], rule_specs[cell_rule[task.cell]], sign_rule,
                          base_seed, task.trial, support_exact, linf_threshold);
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& thread : pool) thread.join();

    // Aggregate per cell.
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) die("cannot create directory '" + out_dir + "': " + ec.message());
    const std::string csv_path = out_dir + "/results.csv";
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) die("cannot open '" + csv_path + "' for writing");
    csv << "rule,k,M,N,k_star,dr,trials,successes,success_rate,hypothesis_fraction,"
           "mean_support_identified_at,mean_iterations,diverged_count,error_count\n";

    ordered_json cells_json = ordered_json::array();
    long total_successes = 0;
    char buffer[40];
    for (std::size_t c = 0; c < cells.size(); ++c) {
        int successes = 0, certified = 0, diverged = 0, errored = 0, identified = 0;
        long iteration_sum = 0;
        long identified_sum = 0;
        std::vector<std::string> errors;
        for (int t = 0; t < trials; ++t) {
            const TrialOutcome& outcome = outcomes[c * static_cast<std::size_t>(trials) +
                                                   static_cast<std::size_t>(t)];
            if (outcome.errored) {
                ++errored;
                if (errors.size() < 3) errors.push_back(outcome.error);
                continue;
            }
            if (outcome.success) ++successes;
            if (outcome.certified) ++certified;
            if (outcome.diverged) ++diverged;
            iteration_sum += outcome.iterations;
            if (outcome.identified_at > 0) {
                ++identified;
                identified_sum += outcome.identified_at;
            }
        }
        const int completed = trials - errored;
        const SweepCell& cell = cells[c];
        csv << cell.rule_text << ',' << cell.k << ',' << cell.rows << ',' << cell.cols << ','
            << cell.k_star << ',';
        std::snprintf(buffer, sizeof buffer, "%.17g", cell.dynamic_range);
        csv << buffer << ',' << trials << ',' << successes << ',';
        std::snprintf(buffer, sizeof buffer, "%.17g",
                      completed > 0 ? static_cast<double>(successes) / completed : 0.0);
        csv << buffer << ',';
        std::snprintf(buffer, sizeof buffer, "%.17g",
                      completed > 0 ? static_cast<double>(certified) / completed : 0.0);
        csv << buffer << ',';
        if (identified > 0) {
            std::snprintf(buffer, sizeof buffer, "%.17g",
                          static_cast<double>(identified_sum) / identified);
            csv << buffer;
        }
        csv << ',';
        std::snprintf(buffer, sizeof buffer, "%.17g",
                      completed > 0 ? static_cast<double>(iteration_sum) / completed : 0.0);
        csv << buffer << ',' << diverged << ',' << errored << '\n';

        ordered_json cell_json;
        cell_json["rule"] = cell.rule_text;
        cell_json["k"] = cell.k;
        cell_json["M"] = cell.rows;
        cell_json["N"] = cell.cols;
        cell_json["k_star"] = cell.k_star;
        cell_json["dr"] = cell.dynamic_range;
        cell_json["trials"] = trials;
        cell_json["successes"] = successes;
        cell_json["success_rate"] =
            completed > 0 ? static_cast<double>(successes) / completed : 0.0;
        cell_json["hypothesis_fraction"] =
            completed > 0 ? static_cast<double>(certified) / completed : 0.0;
        if (identified > 0)
            cell_json["mean_support_identified_at"] =
                static_cast<double>(identified_sum) / identified;
        else
            cell_json["mean_support_identified_at"] = nullptr;
        cell_json["mean_iterations"] =
            completed > 0 ? static_cast<double>(iteration_sum) / completed : 0.0;
        cell_json["diverged_count"] = diverged;
        cell_json["error_count"] = errored;
        if (!errors.empty()) cell_json["errors"] = errors;
        cells_json.push_back(cell_json);
        total_successes += successes;
    }
    if (!csv) die("write to '" + csv_path + "' failed");
    csv.close();

    ordered_json summary;
    summary["schema"] = 1;
    summary["spec"] = spec;
    summary["cells"] = cells_json;
    summary["totals"] = {{"cells", cells.size()},
                         {"trials", cells.size() * static_cast<std::size_t>(trials)},
                         {"successes", total_successes}};
    const auto elapsed = std::chrono::steady_clock::now() - start;
    summary["timing"] = {
        {"wall_ms",
         std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(elapsed).count()},
        {"workers", workers}};
    const std::string summary_path = out_dir + "/summary.json";
    std::ofstream summary_out(summary_path, std::ios::binary);
    if (!summary_out) die("cannot open '" + summary_path + "' for writing");
    summary_out << summary.dump(2) << '\n';
    if (!summary_out) die("write to '" + summary_path + "' failed");

    std::printf("wrote %s and %s (%zu cells x %d trials)\n", csv_path.c_str(),
                summary_path.c_str(), cells.size(), trials);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse-recovery toolkit: adaptive iterative thresholding for y = Ax"};
    app.require_subcommand(1);

    GenArgs gen;
    CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a reproducible instance bundle");
    gen_cmd->add_option("-M,--rows", gen.rows, "Number of equations M")->required();
    gen_cmd->add_option("-N,--cols", gen.cols, "Number of unknowns N")->required();
    gen_cmd->add_option("-k,--kstar", gen.k_star, "True sparsity k*")->required();
    gen_cmd->add_option("--dr", gen.dynamic_range, "Dynamic range of |x*| (default 1)");
    gen_cmd->add_option("--signs", gen.signs, "Sign pattern: random|positive");
    gen_cmd->add_option("--seed", gen.seed, "Generation seed (default 0)");
    gen_cmd->add_option("-o,--out", gen.out_dir, "Output bundle directory")->required();

    SolveArgs solve;
    CLI::App* solve_cmd = app.add_subcommand("solve", "Run the solver on an instance bundle");
    solve_cmd->add_option("bundle", solve.bundle, "Instance bundle directory")->required();
    solve_cmd->add_option("--rule", solve.rule_text,
                          "Thresholding rule: hard|half|twothirds|soft|scad[:a=...]");
    solve_cmd->add_option("-k", solve.k, "Specified sparsity level (default: k* or ceil(sqrt(M)))");
    solve_cmd->add_option("--max-iterations", solve.max_iterations,
                          "Iteration cap (default 50k+100)");
    solve_cmd->add_option("--stall-tolerance", solve.stall_tolerance,
                          "Relative l-inf change considered stalled (default 1e-10)");
    solve_cmd->add_option("--window", solve.window,
                          "Consecutive stable-support iterations required (default 5)");
    solve_cmd->add_option("--full-trace", solve.full_trace, "auto|on|off (default auto)");
    solve_cmd->add_option("--trace", solve.trace_path, "Write the iteration trace CSV here");
    solve_cmd->add_option("--solution", solve.solution_path, "Write final x as CSV here");
    solve_cmd->add_option("--report", solve.report_path,
                          "Write the JSON report here (default stdout)");

    TheoryArgs theory;
    CLI::App* theory_cmd =
        app.add_subcommand("theory", "Evaluate convergence bounds for all five rules");
    theory_cmd->add_flag("--welch", theory.welch, "Evaluate the coherence lower bound instead");
    theory_cmd->add_option("-M,--rows", theory.rows, "Rows (with --welch)");
    theory_cmd->add_option("-N,--cols", theory.cols, "Columns (with --welch)");
    theory_cmd->add_option("--kstar", theory.k_star, "True sparsity k*");
    theory_cmd->add_option("--mu", theory.mu, "Coherence of the matrix");
    theory_cmd->add_option("--dr", theory.dynamic_range, "Dynamic range (default 1)");
    theory_cmd->add_option("--k", theory.k, "Specified sparsity (default k*)");
    theory_cmd->add_option("--scad-a", theory.scad_a, "SCAD parameter a > 2 (default 3.7)");
    theory_cmd->add_flag("--json", theory.as_json, "Emit JSON instead of a table");

    std::string sweep_spec;
    std::string sweep_out;
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "Run a generate->solve->verify grid from a JSON spec");
    sweep_cmd->add_option("spec", sweep_spec, "Sweep specification JSON file")->required();
    sweep_cmd->add_option("-o,--out", sweep_out, "Output directory for results.csv/summary.json")
        ->required();

    VerifyArgs verify;
    CLI::App* verify_cmd =
        app.add_subcommand("verify", "Verify a trace CSV against the convergence guarantees");
    verify_cmd->add_option("bundle", verify.bundle, "Instance bundle directory")->required();
    verify_cmd->add_option("trace", verify.trace, "Trace CSV produced by solve")->required();
    verify_cmd->add_option("--rule", verify.rule_text, "Rule the trace was produced with")
        ->required();
    verify_cmd->add_option("-k", verify.k, "Specified sparsity the trace was produced with")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (gen_cmd->parsed()) return cmd_gen(gen);
    if (solve_cmd->parsed()) return cmd_solve(solve);
    if (theory_cmd->parsed()) {
        if (theory.welch) {
            if (theory.rows <= 0 || theory.cols <= 0)
                die("--welch requires -M and -N");
        } else {
            if (theory.k_star <= 0 || theory.mu <= 0.0)
                die("theory requires --kstar and --mu (or --welch with -M/-N)");
        }
        return cmd_theory(theory);
    }
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_spec, sweep_out);
    if (verify_cmd->parsed()) return cmd_verify(verify);
    return 1;
}
