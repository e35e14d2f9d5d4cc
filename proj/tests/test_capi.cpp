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

// Exercises the shared library strictly through its C interface, the way an
// external binding would: no internal headers, no C++ core types.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "ait/ait.h"

#include <unistd.h>

namespace {

std::string scratch_dir(const std::string& tag) {
    const auto path = std::filesystem::temp_directory_path() /
                      ("ait_capi_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
    return path.string();
}

// Row-major [I | H/sqrt(m)] union dictionary, as a flat buffer.
std::vector<double> union_basis_rows(int m) {
    std::vector<double> a(static_cast<std::size_t>(m) * 2 * m, 0.0);
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    for (int i = 0; i < m; ++i) {
        a[static_cast<std::size_t>(i) * 2 * m + i] = 1.0;
        for (int j = 0; j < m; ++j) {
            const bool negative = std::popcount(static_cast<unsigned>(i & j)) % 2 == 1;
            a[static_cast<std::size_t>(i) * 2 * m + m + j] = negative ? -scale : scale;
        }
    }
    return a;
}

struct Handle {
    ait_instance* instance = nullptr;
    ait_result* result = nullptr;
    ~Handle() {
        ait_result_free(result);
        ait_instance_free(instance);
    }
};

} // namespace

TEST_CASE("version, status names, and last error") {
    CHECK(ait_version() != nullptr);
    CHECK(std::strcmp(ait_status_name(AIT_OK), "ok") == 0);
    CHECK(ait_status_name(AIT_ERR_INVALID_K) != nullptr);
    CHECK(ait_status_name(9999) != nullptr);

    CHECK(ait_instance_generate(8, 8, 2, 1.0, AIT_SIGNS_RANDOM, 0, nullptr) ==
          AIT_ERR_NULL_POINTER);
    ait_instance* instance = nullptr;
    CHECK(ait_instance_generate(8, 8, 2, 1.0, AIT_SIGNS_RANDOM, 0, &instance) ==
          AIT_ERR_NOT_UNDERDETERMINED);
    CHECK(std::strlen(ait_last_error()) > 0);
}

TEST_CASE("generation, accessors, and coherence") {
    Handle h;
    REQUIRE(ait_instance_generate(8, 16, 3, 10.0, AIT_SIGNS_RANDOM, 42, &h.instance) ==
            AIT_OK);

    int rows = 0, cols = 0;
    REQUIRE(ait_instance_dims(h.instance, &rows, &cols) == AIT_OK);
    CHECK(rows == 8);
    CHECK(cols == 16);

    uint64_t seed = 0;
    CHECK(ait_instance_seed(h.instance, &seed) == AIT_OK);
    CHECK(seed == 42u);

    int has_truth = 0;
    CHECK(ait_instance_has_truth(h.instance, &has_truth) == AIT_OK);
    CHECK(has_truth == 1);
    int k_star = 0;
    CHECK(ait_instance_sparsity(h.instance, &k_star) == AIT_OK);
    CHECK(k_star == 3);
    double dynamic_range = 0.0;
    CHECK(ait_instance_dynamic_range(h.instance, &dynamic_range) == AIT_OK);
    CHECK(dynamic_range == 10.0);

    // Matrix buffer is row-major with unit columns; y = A x* holds.
    std::vector<double> matrix(8 * 16), y(8), signal(16), scales(16);
    REQUIRE(ait_instance_matrix(h.instance, matrix.data()) == AIT_OK);
    REQUIRE(ait_instance_observation(h.instance, y.data()) == AIT_OK);
    REQUIRE(ait_instance_truth_signal(h.instance, signal.data()) == AIT_OK);
    REQUIRE(ait_instance_scales(h.instance, scales.data()) == AIT_OK);
    for (int j = 0; j < 16; ++j) {
        CHECK(scales[j] == 1.0);
        double norm_sq = 0.0;
        for (int i = 0; i < 8; ++i) norm_sq += matrix[i * 16 + j] * matrix[i * 16 + j];
        CHECK(std::abs(std::sqrt(norm_sq) - 1.0) < 1e-13);
    }
    for (int i = 0; i < 8; ++i) {
        double accumulated = 0.0;
        for (int j = 0; j < 16; ++j) accumulated += matrix[i * 16 + j] * signal[j];
        CHECK(accumulated == doctest::Approx(y[i]).epsilon(1e-12));
    }

    // Truth support: capacity probing via the buffer-too-small contract.
    int len = 0;
    CHECK(ait_instance_truth_support(h.instance, nullptr, 0, &len) ==
          AIT_ERR_BUFFER_TOO_SMALL);
    CHECK(len == 3);
    std::vector<int> support(static_cast<std::size_t>(len));
    REQUIRE(ait_instance_truth_support(h.instance, support.data(), len, &len) == AIT_OK);
    CHECK(std::abs(signal[support[0]]) == doctest::Approx(10.0));
    CHECK(std::abs(signal[support[2]]) == doctest::Approx(1.0));

    double mu = 0.0, welch = 0.0;
    int pi = -1, pj = -1;
    REQUIRE(ait_instance_coherence(h.instance, &mu, &pi, &pj, &welch) == AIT_OK);
    CHECK(mu > welch);
    CHECK(0 <= pi);
    CHECK(pi < pj);

    // Instances without truth report AIT_ERR_NO_TRUTH on truth accessors.
    const std::vector<double> a = union_basis_rows(8);
    std::vector<double> zero(8, 0.0);
    ait_instance* blind = nullptr;
    REQUIRE(ait_instance_create(a.data(), 8, 16, zero.data(), nullptr, &blind) == AIT_OK);
    int blind_truth = 1;
    CHECK(ait_instance_has_truth(blind, &blind_truth) == AIT_OK);
    CHECK(blind_truth == 0);
    CHECK(ait_instance_sparsity(blind, &k_star) == AIT_ERR_NO_TRUTH);
    ait_instance_free(blind);
}

TEST_CASE("pure helpers: welch bound, rules, thresholding") {
    double welch = 0.0;
    REQUIRE(ait_welch_bound(100, 10000, &welch) == AIT_OK);
    CHECK(welch == doctest::Approx(0.099503719020998914).epsilon(1e-13));
    CHECK(ait_welch_bound(10, 10, &welch) == AIT_ERR_NOT_UNDERDETERMINED);

    int kind = -1;
    double scad_a = 0.0;
    REQUIRE(ait_rule_parse("twothirds", &kind, &scad_a) == AIT_OK);
    CHECK(kind == AIT_RULE_TWOTHIRDS);
    REQUIRE(ait_rule_parse("scad:a=2.5", &kind, &scad_a) == AIT_OK);
    CHECK(kind == AIT_RULE_SCAD);
    CHECK(scad_a == 2.5);
    CHECK(ait_rule_parse("lasso", &kind, &scad_a) == AIT_ERR_INVALID_RULE);

    double c = -1.0;
    REQUIRE(ait_boundedness_constant(AIT_RULE_HALF, 3.7, &c) == AIT_OK);
    CHECK(c == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(ait_boundedness_constant(99, 3.7, &c) == AIT_ERR_INVALID_RULE);

    double value = 0.0;
    REQUIRE(ait_threshold_scalar(AIT_RULE_HALF, 3.7, 2.0, 1.0, &value) == AIT_OK);
    CHECK(value == doctest::Approx(1.7969687673438477).epsilon(1e-13));
    CHECK(ait_threshold_scalar(AIT_RULE_HALF, 3.7, 2.0, 0.0, &value) ==
          AIT_ERR_NONPOSITIVE_THRESHOLD);

    const double z[4] = {2.0, -0.5, -3.0, 1.0};
    double out[4] = {0, 0, 0, 0};
    REQUIRE(ait_threshold_vector(AIT_RULE_SOFT, 3.7, z, 4, 1.0, out) == AIT_OK);
    CHECK(out[0] == doctest::Approx(1.0));
    CHECK(out[1] == 0.0);
    CHECK(out[2] == doctest::Approx(-2.0));
    CHECK(out[3] == 0.0);

    double range = 0.0;
    const double x[5] = {0.0, 4.0, 0.0, -1.0, 0.0};
    const int support[2] = {1, 3};
    REQUIRE(ait_dynamic_range_of(x, 5, support, 2, &range) == AIT_OK);
    CHECK(range == 4.0);
}

TEST_CASE("solve, trace access, and verification through the C interface") {
    // Certified union-basis instance: mu = 1/8, k = k* = 2.
    const int m = 64;
    const std::vector<double> a = union_basis_rows(m);
    std::vector<double> x_star(2 * m, 0.0);
    x_star[5] = 4.0;
    x_star[m + 9] = -1.0;
    std::vector<double> y(m);
    for (int i = 0; i < m; ++i)
        y[i] = a[static_cast<std::size_t>(i) * 2 * m + 5] * 4.0 +
               a[static_cast<std::size_t>(i) * 2 * m + m + 9] * -1.0;

    Handle h;
    REQUIRE(ait_instance_create(a.data(), m, 2 * m, y.data(), x_star.data(), &h.instance) ==
            AIT_OK);

    ait_solver_config config{};
    REQUIRE(ait_solver_config_init(&config, 2) == AIT_OK);
    CHECK(config.rule_kind == AIT_RULE_HARD);
    CHECK(config.max_iterations == 200);  // 50 k + 100
    CHECK(config.stable_support_window == 5);
    REQUIRE(ait_solve(h.instance, &config, &h.result) == AIT_OK);

    int diverged = 1;
    CHECK(ait_result_diverged(h.result, &diverged) == AIT_OK);
    CHECK(diverged == 0);
    int halt = -1;
    CHECK(ait_result_halt_reason(h.result, &halt) == AIT_OK);
    CHECK(halt == AIT_HALT_SUPPORT_STABLE_AND_STALLED);

    int len = 0;
    std::vector<int> support(2 * m);
    REQUIRE(ait_result_support(h.result, support.data(), 2 * m, &len) == AIT_OK);
    REQUIRE(len == 2);
    CHECK(support[0] == 5);
    CHECK(support[1] == m + 9);

    std::vector<double> final_x(2 * m);
    REQUIRE(ait_result_final_x(h.result, final_x.data()) == AIT_OK);
    CHECK(final_x[5] == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(final_x[m + 9] == doctest::Approx(-1.0).epsilon(1e-9));

    double linf = -1.0, l2 = -1.0;
    REQUIRE(ait_result_errors(h.instance, h.result, &linf, &l2) == AIT_OK);
    CHECK(linf < 1e-9);
    CHECK(l2 < 1e-8);
    CHECK(l2 >= linf);

    // Trace access.
    int trace_len = 0, is_full = 0;
    REQUIRE(ait_result_trace_len(h.result, &trace_len) == AIT_OK);
    REQUIRE(ait_result_trace_is_full(h.result, &is_full) == AIT_OK);
    CHECK(trace_len > 0);
    CHECK(is_full == 1);
    int t = 0, sample_len = 0;
    double tau = 0.0, sample_linf = 0.0;
    REQUIRE(ait_result_trace_sample(h.result, 0, &t, &tau, support.data(), 2 * m,
                                    &sample_len, &sample_linf) == AIT_OK);
    CHECK(t == 1);
    CHECK(tau > 0.0);
    std::vector<double> xs(2 * m), zs(2 * m);
    REQUIRE(ait_result_trace_vectors(h.result, trace_len - 1, xs.data(), zs.data()) ==
            AIT_OK);
    CHECK(xs[5] == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(ait_result_trace_sample(h.result, trace_len, &t, &tau, nullptr, 0, nullptr,
                                  nullptr) == AIT_ERR_INVALID_ARGUMENT);

    // Theory helpers and the verdict.
    double mu = 0.0;
    REQUIRE(ait_instance_coherence(h.instance, &mu, nullptr, nullptr, nullptr) == AIT_OK);
    CHECK(mu == doctest::Approx(0.125).epsilon(1e-12));
    double rho = 0.0;
    REQUIRE(ait_contraction_factor(0.0, 2, mu, &rho) == AIT_OK);
    CHECK(rho == doctest::Approx(0.25).epsilon(1e-12));
    ait_hypothesis_report hypotheses{};
    REQUIRE(ait_check_hypotheses(0.0, 2, 2, mu, &hypotheses) == AIT_OK);
    CHECK(hypotheses.theorem1 == 1);
    CHECK(hypotheses.corollary1 == 1);
    double t_bound = 0.0;
    REQUIRE(ait_iteration_bound(0.0, 2, 2, mu, 4.0, &t_bound) == AIT_OK);
    CHECK(t_bound > 2.0);
    double budget = 0.0;
    REQUIRE(ait_detection_budget(0.0, 2, mu, 4.0, &budget) == AIT_OK);
    CHECK(budget > 0.0);

    ait_verdict verdict{};
    REQUIRE(ait_verify_result(h.instance, h.result, AIT_RULE_HARD, 3.7, 2, &verdict) ==
            AIT_OK);
    CHECK(verdict.support_identified_at >= 1);
    CHECK(verdict.within_t_bound == 1);
    CHECK(verdict.geometric_envelope_ok == 1);
    CHECK(verdict.recruitment_order_ok == 1);
    CHECK(verdict.containment_persistent == 1);
    CHECK(verdict.corollary_applicable == 1);
    CHECK(verdict.corollary_exact == 1);
    CHECK(verdict.rho == doctest::Approx(rho).epsilon(1e-12));
    CHECK(verdict.t_bound == doctest::Approx(t_bound).epsilon(1e-12));

    // Trace CSV round trip through the file-based verifier.
    const std::string dir = scratch_dir("trace");
    const std::string trace_path = dir + "/trace.csv";
    REQUIRE(ait_result_write_trace_csv(h.result, trace_path.c_str()) == AIT_OK);
    ait_verdict from_csv{};
    REQUIRE(ait_verify_trace_csv(h.instance, trace_path.c_str(), AIT_RULE_HARD, 3.7, 2,
                                 &from_csv) == AIT_OK);
    CHECK(from_csv.support_identified_at == verdict.support_identified_at);
    CHECK(from_csv.geometric_envelope_ok == verdict.geometric_envelope_ok);
    std::filesystem::remove_all(dir);
}

TEST_CASE("bundle save/load round trip through the C interface") {
    const std::string dir = scratch_dir("bundle");
    Handle h;
    REQUIRE(ait_instance_generate(8, 16, 2, 4.0, AIT_SIGNS_POSITIVE, 11, &h.instance) ==
            AIT_OK);
    REQUIRE(ait_instance_save(h.instance, dir.c_str()) == AIT_OK);

    ait_instance* loaded = nullptr;
    REQUIRE(ait_instance_load(dir.c_str(), &loaded) == AIT_OK);
    std::vector<double> y_a(8), y_b(8);
    REQUIRE(ait_instance_observation(h.instance, y_a.data()) == AIT_OK);
    REQUIRE(ait_instance_observation(loaded, y_b.data()) == AIT_OK);
    CHECK(std::memcmp(y_a.data(), y_b.data(), sizeof(double) * 8) == 0);
    uint64_t seed = 0;
    CHECK(ait_instance_seed(loaded, &seed) == AIT_OK);
    CHECK(seed == 11u);
    ait_instance_free(loaded);

    CHECK(ait_instance_load((dir + "/nope").c_str(), &loaded) == AIT_ERR_IO);
    std::filesystem::remove_all(dir);
}

TEST_CASE("solver rejects invalid configurations through status codes") {
    Handle h;
    REQUIRE(ait_instance_generate(8, 16, 2, 1.0, AIT_SIGNS_RANDOM, 1, &h.instance) ==
            AIT_OK);
    ait_solver_config config{};
    REQUIRE(ait_solver_config_init(&config, 2) == AIT_OK);
    config.k = 0;
    ait_result* result = nullptr;
    CHECK(ait_solve(h.instance, &config, &result) == AIT_ERR_INVALID_K);
    config.k = 2;
    config.rule_kind = 77;
    CHECK(ait_solve(h.instance, &config, &result) == AIT_ERR_INVALID_RULE);
    CHECK(ait_solve(nullptr, &config, &result) == AIT_ERR_NULL_POINTER);
}
