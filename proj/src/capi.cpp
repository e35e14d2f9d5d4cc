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

#include "ait/ait.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "ait/bundle.hpp"
#include "ait/engine.hpp"
#include "ait/error.hpp"
#include "ait/problem.hpp"
#include "ait/theory.hpp"
#include "ait/thresholding.hpp"

struct ait_instance {
    ait::ProblemInstance value;
};

struct ait_result {
    ait::RecoveryResult value;
    int cols = 0;
};

namespace {

thread_local std::string g_last_error;

ait_status map_code(ait::ErrorCode code) {
    using EC = ait::ErrorCode;
    switch (code) {
        case EC::InvalidArgument: return AIT_ERR_INVALID_ARGUMENT;
        case EC::InvalidShape: return AIT_ERR_INVALID_SHAPE;
        case EC::NotUnderdetermined: return AIT_ERR_NOT_UNDERDETERMINED;
        case EC::ZeroColumn: return AIT_ERR_ZERO_COLUMN;
        case EC::DimensionMismatch: return AIT_ERR_DIMENSION_MISMATCH;
        case EC::NonFinite: return AIT_ERR_NON_FINITE;
        case EC::NonpositiveThreshold: return AIT_ERR_NONPOSITIVE_THRESHOLD;
        case EC::InvalidRule: return AIT_ERR_INVALID_RULE;
        case EC::InvalidScadA: return AIT_ERR_INVALID_SCAD_A;
        case EC::InvalidK: return AIT_ERR_INVALID_K;
        case EC::HypothesisViolated: return AIT_ERR_HYPOTHESIS_VIOLATED;
        case EC::LogDomain: return AIT_ERR_LOG_DOMAIN;
        case EC::EmptySupport: return AIT_ERR_EMPTY_SUPPORT;
        case EC::ZeroOnSupport: return AIT_ERR_ZERO_ON_SUPPORT;
        case EC::TooLarge: return AIT_ERR_TOO_LARGE;
        case EC::NoSolution: return AIT_ERR_NO_SOLUTION;
        case EC::SingularRefit: return AIT_ERR_SINGULAR_REFIT;
        case EC::IncompleteTrace: return AIT_ERR_INCOMPLETE_TRACE;
        case EC::IoError: return AIT_ERR_IO;
        case EC::ParseError: return AIT_ERR_PARSE;
    }
    return AIT_ERR_UNKNOWN;
}

ait_status set_error(ait_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

template <typename Fn>
ait_status guarded(Fn&& fn) noexcept {
    try {
        return fn();
    } catch (const ait::Error& e) {
        return set_error(map_code(e.code()), e.what());
    } catch (const std::exception& e) {
        return set_error(AIT_ERR_UNKNOWN, e.what());
    } catch (...) {
        return set_error(AIT_ERR_UNKNOWN, "unknown failure");
    }
}

ait_status require(bool condition, ait_status status, const char* message) {
    if (condition) return AIT_OK;
    return set_error(status, message);
}

#define AIT_CHECK(expr)                                  \
    do {                                                 \
        const ait_status status_ = (expr);               \
        if (status_ != AIT_OK) return status_;           \
    } while (0)

ait_status make_rule(int kind, double scad_a, ait::ThresholdRule* out) {
    switch (kind) {
        case AIT_RULE_HARD: out->kind = ait::RuleKind::Hard; break;
        case AIT_RULE_HALF: out->kind = ait::RuleKind::Half; break;
        case AIT_RULE_TWOTHIRDS: out->kind = ait::RuleKind::TwoThirds; break;
        case AIT_RULE_SOFT: out->kind = ait::RuleKind::Soft; break;
        case AIT_RULE_SCAD: out->kind = ait::RuleKind::Scad; break;
        default:
            return set_error(AIT_ERR_INVALID_RULE,
                             "rule kind must be one of the ait_rule_kind values");
    }
    out->scad_a = scad_a;
    return AIT_OK;
}

int rule_to_int(ait::RuleKind kind) {
    switch (kind) {
        case ait::RuleKind::Hard: return AIT_RULE_HARD;
        case ait::RuleKind::Half: return AIT_RULE_HALF;
        case ait::RuleKind::TwoThirds: return AIT_RULE_TWOTHIRDS;
        case ait::RuleKind::Soft: return AIT_RULE_SOFT;
        case ait::RuleKind::Scad: return AIT_RULE_SCAD;
    }
    return AIT_RULE_HARD;
}

ait_status copy_indices(const std::vector<int>& values, int* out, int capacity, int* len) {
    AIT_CHECK(require(len != nullptr, AIT_ERR_NULL_POINTER, "length output is null"));
    *len = static_cast<int>(values.size());
    const int count = std::min(capacity, static_cast<int>(values.size()));
    if (count > 0) {
        AIT_CHECK(require(out != nullptr, AIT_ERR_NULL_POINTER, "index buffer is null"));
        std::copy_n(values.begin(), count, out);
    }
    if (capacity < static_cast<int>(values.size()))
        return set_error(AIT_ERR_BUFFER_TOO_SMALL, "index buffer holds " +
                                                       std::to_string(capacity) + " but " +
                                                       std::to_string(values.size()) +
                                                       " are needed");
    return AIT_OK;
}

const ait::GroundTruth* truth_of(const ait_instance* instance) {
    return instance->value.truth.has_value() ? &*instance->value.truth : nullptr;
}

// Convergence bounds for the instance's realized coherence under (rule, k).
ait::TheoryBounds bounds_for(const ait::ProblemInstance& instance,
                             const ait::ThresholdRule& rule, int k) {
    const double c = ait::boundedness_constant(rule);
    const ait::CoherenceReport report = ait::coherence(instance.matrix);
    const ait::GroundTruth& truth = *instance.truth;
    if (truth.sparsity == 0) {
        ait::TheoryBounds bounds;
        bounds.c = c;
        bounds.k = k;
        bounds.k_star = 0;
        bounds.mu = report.mu;
        bounds.rho = ait::contraction_factor(c, k, report.mu);
        return bounds;
    }
    return ait::compute_bounds(c, k, truth.sparsity, report.mu, truth.dynamic_range);
}

void fill_verdict(const ait::VerificationVerdict& verdict, const ait::TheoryBounds& bounds,
                  ait_verdict* out) {
    out->support_identified_at =
        verdict.support_identified_at.has_value() ? *verdict.support_identified_at : -1;
    out->within_t_bound = verdict.within_t_bound ? 1 : 0;
    out->geometric_envelope_ok = verdict.geometric_envelope_ok ? 1 : 0;
    out->recruitment_order_ok = verdict.recruitment_order_ok ? 1 : 0;
    out->containment_persistent = verdict.containment_persistent ? 1 : 0;
    out->corollary_applicable = verdict.corollary_exact.has_value() ? 1 : 0;
    out->corollary_exact =
        verdict.corollary_exact.has_value() && *verdict.corollary_exact ? 1 : 0;
    out->envelope_anchor = verdict.envelope_anchor.has_value() ? *verdict.envelope_anchor : -1;
    out->envelope_from_identification = verdict.envelope_from_identification ? 1 : 0;
    out->rho = bounds.rho;
    out->t_bound = bounds.t_bound.has_value() ? *bounds.t_bound
                                              : std::numeric_limits<double>::quiet_NaN();
}

} // namespace

extern "C" {

const char* ait_version(void) { return "1.0.0"; }

const char* ait_status_name(int status) {
    switch (status) {
        case AIT_OK: return "ok";
        case AIT_ERR_INVALID_ARGUMENT: return "invalid_argument";
        case AIT_ERR_INVALID_SHAPE: return "invalid_shape";
        case AIT_ERR_NOT_UNDERDETERMINED: return "not_underdetermined";
        case AIT_ERR_ZERO_COLUMN: return "zero_column";
        case AIT_ERR_DIMENSION_MISMATCH: return "dimension_mismatch";
        case AIT_ERR_NON_FINITE: return "non_finite";
        case AIT_ERR_NONPOSITIVE_THRESHOLD: return "nonpositive_threshold";
        case AIT_ERR_INVALID_RULE: return "invalid_rule";
        case AIT_ERR_INVALID_SCAD_A: return "invalid_scad_a";
        case AIT_ERR_INVALID_K: return "invalid_k";
        case AIT_ERR_HYPOTHESIS_VIOLATED: return "hypothesis_violated";
        case AIT_ERR_LOG_DOMAIN: return "log_domain";
        case AIT_ERR_EMPTY_SUPPORT: return "empty_support";
        case AIT_ERR_ZERO_ON_SUPPORT: return "zero_on_support";
        case AIT_ERR_TOO_LARGE: return "too_large";
        case AIT_ERR_NO_SOLUTION: return "no_solution";
        case AIT_ERR_SINGULAR_REFIT: return "singular_refit";
        case AIT_ERR_INCOMPLETE_TRACE: return "incomplete_trace";
        case AIT_ERR_IO: return "io_error";
        case AIT_ERR_PARSE: return "parse_error";
        case AIT_ERR_NULL_POINTER: return "null_pointer";
        case AIT_ERR_BUFFER_TOO_SMALL: return "buffer_too_small";
        case AIT_ERR_NO_TRUTH: return "no_truth";
        default: return "unknown";
    }
}

const char* ait_last_error(void) { return g_last_error.c_str(); }

ait_status ait_instance_generate(int rows, int cols, int sparsity, double dynamic_range,
                                 int sign_rule, uint64_t seed, ait_instance** out) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(out != nullptr, AIT_ERR_NULL_POINTER, "output handle is null"));
        ait::SignRule signs;
        if (sign_rule == AIT_SIGNS_RANDOM) {
            signs = ait::SignRule::Random;
        } else if (sign_rule == AIT_SIGNS_POSITIVE) {
            signs = ait::SignRule::Positive;
        } else {
            return set_error(AIT_ERR_INVALID_ARGUMENT, "sign rule must be 0 or 1");
        }
        auto handle = std::make_unique<ait_instance>();
        handle->value = ait::generate_instance(rows, cols, sparsity, dynamic_range, signs, seed);
        *out = handle.release();
        return AIT_OK;
    });
}

ait_status ait_instance_create(const double* matrix, int rows, int cols, const double* y,
                               const double* truth_or_null, ait_instance** out) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(out != nullptr && matrix != nullptr && y != nullptr,
                          AIT_ERR_NULL_POINTER, "matrix, y, and output must be non-null"));
        AIT_CHECK(require(rows > 0 && cols > 0, AIT_ERR_INVALID_SHAPE,
                          "matrix dimensions must be positive"));
        ait::Matrix raw(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) raw(i, j) = matrix[static_cast<std::size_t>(i) * cols + j];
        auto handle = std::make_unique<ait_instance>();
        handle->value.matrix = ait::normalize_columns(raw);
        handle->value.observation = Eigen::Map<const ait::Vector>(y, rows);
        if (truth_or_null != nullptr) {
            ait::Vector signal = Eigen::Map<const ait::Vector>(truth_or_null, cols);
            handle->value.truth = ait::make_truth(signal);
            const ait::Vector reproduced =
                handle->value.matrix.entries *
                signal.cwiseProduct(handle->value.matrix.column_scales);
            const double gap = (reproduced - handle->value.observation).cwiseAbs().maxCoeff();
            if (gap > 1e-10)
                return set_error(AIT_ERR_INVALID_ARGUMENT,
                                 "observation is inconsistent with the supplied truth");
        }
        *out = handle.release();
        return AIT_OK;
    });
}

ait_status ait_instance_load(const char* directory, ait_instance** out) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(out != nullptr && directory != nullptr, AIT_ERR_NULL_POINTER,
                          "directory and output must be non-null"));
        auto handle = std::make_unique<ait_instance>();
        handle->value = ait::load_instance(directory);
        *out = handle.release();
        return AIT_OK;
    });
}

ait_status ait_instance_save(const ait_instance* instance, const char* directory) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(instance != nullptr && directory != nullptr, AIT_ERR_NULL_POINTER,
                          "instance and directory must be non-null"));
        ait::save_instance(instance->value, directory);
        return AIT_OK;
    });
}

void ait_instance_free(ait_instance* instance) { delete instance; }

ait_status ait_instance_dims(const ait_instance* instance, int* rows, int* cols) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(instance != nullptr, AIT_ERR_NULL_POINTER, "instance is null"));
        if (rows != nullptr) *rows = static_cast<int>(instance->value.matrix.rows());
        if (cols != nullptr) *cols = static_cast<int>(instance->value.matrix.cols());
        return AIT_OK;
    });
}

ait_status ait_instance_matrix(const ait_instance* instance, double* out) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(instance != nullptr && out != nullptr, AIT_ERR_NULL_POINTER,
                          "instance and output must be non-null"));
        const ait::Matrix& entries = instance->value.matrix.entries;
        for (Eigen::Index i = 0; i < entries.rows(); ++i)
            for (Eigen::Index j = 0; j < entries.cols(); ++j)
                out[static_cast<std::size_t>(i) * entries.cols() + j] = entries(i, j);
        return AIT_OK;
    });
}

ait_status ait_instance_scales(const ait_instance* instance, double* out) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(instance != nullptr && out != nullptr, AIT_ERR_NULL_POINTER,
                          "instance and output must be non-null"));
        const ait::Vector& scales = instance->value.matrix.column_scales;
        std::copy_n(scales.data(), scales.size(), out);
        return AIT_OK;
    });
}

ait_status ait_instance_observation(const ait_instance* instance, double* out) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(instance != nullptr && out != nullptr, AIT_ERR_NULL_POINTER,
                          "instance and output must be non-null"));
        const ait::Vector& y = instance->value.observation;
        std::copy_n(y.data(), y.size(), out);
        return AIT_OK;
    });
}

ait_status ait_instance_seed(const ait_instance* instance, uint64_t* out) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(instance != nullptr && out != nullptr, AIT_ERR_NULL_POINTER,
                          "instance and output must be non-null"));
        *out = instance->value.seed;
        return AIT_OK;
    });
}

ait_status ait_instance_has_truth(const ait_instance* instance, int* out) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(instance != nullptr && out != nullptr, AIT_ERR_NULL_POINTER,
                          "instance and output must be non-null"));
        *out = instance->value.truth.has_value() ? 1 : 0;
        return AIT_OK;
    });
}

ait_status ait_instance_sparsity(const ait_instance* instance, int* out) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(instance != nullptr && out != nullptr, AIT_ERR_NULL_POINTER,
                          "instance and output must be non-null"));
        const ait::GroundTruth* truth = truth_of(instance);
        AIT_CHECK(require(truth != nullptr, AIT_ERR_NO_TRUTH, "instance has no ground truth"));
        *out = truth->sparsity;
        return AIT_OK;
    });
}

ait_status ait_instance_dynamic_range(const ait_instance* instance, double* out) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(instance != nullptr && out != nullptr, AIT_ERR_NULL_POINTER,
                          "instance and output must be non-null"));
        const ait::GroundTruth* truth = truth_of(instance);
        AIT_CHECK(require(truth != nullptr, AIT_ERR_NO_TRUTH, "instance has no ground truth"));
        *out = truth->dynamic_range;
        return AIT_OK;
    });
}

ait_status ait_instance_truth_signal(const ait_instance* instance, double* out) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(instance != nullptr && out != nullptr, AIT_ERR_NULL_POINTER,
                          "instance and output must be non-null"));
        const ait::GroundTruth* truth = truth_of(instance);
        AIT_CHECK(require(truth != nullptr, AIT_ERR_NO_TRUTH, "instance has no ground truth"));
        std::copy_n(truth->signal.data(), truth->signal.size(), out);
        return AIT_OK;
    });
}

ait_status ait_instance_truth_support(const ait_instance* instance, int* out, int capacity,
                                      int* len) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(instance != nullptr, AIT_ERR_NULL_POINTER, "instance is null"));
        const ait::GroundTruth* truth = truth_of(instance);
        AIT_CHECK(require(truth != nullptr, AIT_ERR_NO_TRUTH, "instance has no ground truth"));
        return copy_indices(truth->support, out, capacity, len);
    });
}

ait_status ait_instance_coherence(const ait_instance* instance, double* mu, int* argmax_i,
                                  int* argmax_j, double* welch) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(instance != nullptr, AIT_ERR_NULL_POINTER, "instance is null"));
        const ait::CoherenceReport report = ait::coherence(instance->value.matrix);
        if (mu != nullptr) *mu = report.mu;
        if (argmax_i != nullptr) *argmax_i = report.argmax_i;
        if (argmax_j != nullptr) *argmax_j = report.argmax_j;
        if (welch != nullptr) *welch = report.welch_lower_bound;
        return AIT_OK;
    });
}

ait_status ait_welch_bound(int rows, int cols, double* out) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(out != nullptr, AIT_ERR_NULL_POINTER, "output is null"));
        *out = ait::welch_bound(rows, cols);
        return AIT_OK;
    });
}

ait_status ait_dynamic_range_of(const double* x, int n, const int* support, int support_len,
                                double* out) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(x != nullptr && out != nullptr, AIT_ERR_NULL_POINTER,
                          "x and output must be non-null"));
        AIT_CHECK(require(support_len == 0 || support != nullptr, AIT_ERR_NULL_POINTER,
                          "support is null"));
        AIT_CHECK(require(n >= 0, AIT_ERR_INVALID_SHAPE, "length must be non-negative"));
        const ait::Vector vector = Eigen::Map<const ait::Vector>(x, n);
        const std::vector<int> indices(support, support + support_len);
        *out = ait::dynamic_range_of(vector, indices);
        return AIT_OK;
    });
}

ait_status ait_rule_parse(const char* text, int* kind, double* scad_a) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(text != nullptr && kind != nullptr, AIT_ERR_NULL_POINTER,
                          "text and kind must be non-null"));
        const ait::ThresholdRule rule = ait::parse_rule(text);
        *kind = rule_to_int(rule.kind);
        if (scad_a != nullptr) *scad_a = rule.scad_a;
        return AIT_OK;
    });
}

ait_status ait_boundedness_constant(int kind, double scad_a, double* out) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(out != nullptr, AIT_ERR_NULL_POINTER, "output is null"));
        ait::ThresholdRule rule;
        AIT_CHECK(make_rule(kind, scad_a, &rule));
        *out = ait::boundedness_constant(rule);
        return AIT_OK;
    });
}

ait_status ait_threshold_scalar(int kind, double scad_a, double u, double tau, double* out) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(out != nullptr, AIT_ERR_NULL_POINTER, "output is null"));
        ait::ThresholdRule rule;
        AIT_CHECK(make_rule(kind, scad_a, &rule));
        *out = ait::apply_scalar(rule, u, tau);
        return AIT_OK;
    });
}

ait_status ait_threshold_vector(int kind, double scad_a, const double* z, int n, double tau,
                                double* out) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(z != nullptr && out != nullptr, AIT_ERR_NULL_POINTER,
                          "input and output must be non-null"));
        AIT_CHECK(require(n >= 0, AIT_ERR_INVALID_SHAPE, "length must be non-negative"));
        ait::ThresholdRule rule;
        AIT_CHECK(make_rule(kind, scad_a, &rule));
        const ait::Vector input = Eigen::Map<const ait::Vector>(z, n);
        const ait::Vector output = ait::apply_vector(rule, input, tau);
        std::copy_n(output.data(), output.size(), out);
        return AIT_OK;
    });
}

ait_status ait_solver_config_init(ait_solver_config* config, int k) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(config != nullptr, AIT_ERR_NULL_POINTER, "config is null"));
        AIT_CHECK(require(k >= 1, AIT_ERR_INVALID_K, "k must be at least 1"));
        config->rule_kind = AIT_RULE_HARD;
        config->scad_a = 3.7;
        config->k = k;
        config->max_iterations = 50L * k + 100L;
        config->stall_tolerance = 1e-10;
        config->stable_support_window = 5;
        config->keep_full_trace = -1;
        return AIT_OK;
    });
}

ait_status ait_solve(const ait_instance* instance, const ait_solver_config* config,
                     ait_result** out) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(instance != nullptr && config != nullptr && out != nullptr,
                          AIT_ERR_NULL_POINTER, "instance, config, and output must be non-null"));
        ait::SolverConfig solver_config;
        AIT_CHECK(make_rule(config->rule_kind, config->scad_a, &solver_config.rule));
        solver_config.specified_sparsity = config->k;
        solver_config.max_iterations = config->max_iterations;
        solver_config.stall_tolerance = config->stall_tolerance;
        solver_config.stable_support_window = config->stable_support_window;
        solver_config.keep_full_trace = config->keep_full_trace;
        auto handle = std::make_unique<ait_result>();
        handle->value = ait::solve(instance->value, solver_config);
        handle->cols = static_cast<int>(instance->value.matrix.cols());
        *out = handle.release();
        return AIT_OK;
    });
}

void ait_result_free(ait_result* result) { delete result; }

ait_status ait_result_final_x(const ait_result* result, double* out) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(result != nullptr && out != nullptr, AIT_ERR_NULL_POINTER,
                          "result and output must be non-null"));
        std::copy_n(result->value.final_x.data(), result->value.final_x.size(), out);
        return AIT_OK;
    });
}

ait_status ait_result_support(const ait_result* result, int* out, int capacity, int* len) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(result != nullptr, AIT_ERR_NULL_POINTER, "result is null"));
        return copy_indices(result->value.final_support, out, capacity, len);
    });
}

ait_status ait_result_iterations(const ait_result* result, long* out) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(result != nullptr && out != nullptr, AIT_ERR_NULL_POINTER,
                          "result and output must be non-null"));
        *out = result->value.iterations_run;
        return AIT_OK;
    });
}

ait_status ait_result_halt_reason(const ait_result* result, int* out) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(result != nullptr && out != nullptr, AIT_ERR_NULL_POINTER,
                          "result and output must be non-null"));
        switch (result->value.halt_reason) {
            case ait::HaltReason::MaxIterations: *out = AIT_HALT_MAX_ITERATIONS; break;
            case ait::HaltReason::Stalled: *out = AIT_HALT_STALLED; break;
            case ait::HaltReason::SupportStableAndStalled:
                *out = AIT_HALT_SUPPORT_STABLE_AND_STALLED;
                break;
        }
        return AIT_OK;
    });
}

ait_status ait_result_diverged(const ait_result* result, int* out) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(result != nullptr && out != nullptr, AIT_ERR_NULL_POINTER,
                          "result and output must be non-null"));
        *out = result->value.diverged ? 1 : 0;
        return AIT_OK;
    });
}

ait_status ait_result_trace_len(const ait_result* result, int* out) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(result != nullptr && out != nullptr, AIT_ERR_NULL_POINTER,
                          "result and output must be non-null"));
        *out = static_cast<int>(result->value.trace.size());
        return AIT_OK;
    });
}

ait_status ait_result_trace_is_full(const ait_result* result, int* out) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(result != nullptr && out != nullptr, AIT_ERR_NULL_POINTER,
                          "result and output must be non-null"));
        *out = result->value.full_trace ? 1 : 0;
        return AIT_OK;
    });
}

ait_status ait_result_trace_sample(const ait_result* result, int index, int* t, double* tau,
                                   int* support, int support_capacity, int* support_len,
                                   double* linf_error) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(result != nullptr, AIT_ERR_NULL_POINTER, "result is null"));
        AIT_CHECK(require(index >= 0 && index < static_cast<int>(result->value.trace.size()),
                          AIT_ERR_INVALID_ARGUMENT, "trace index out of range"));
        const ait::IterationRecord& record =
            result->value.trace[static_cast<std::size_t>(index)];
        if (t != nullptr) *t = record.t;
        if (tau != nullptr) *tau = record.tau;
        if (linf_error != nullptr)
            *linf_error = record.linf_error.has_value()
                              ? *record.linf_error
                              : std::numeric_limits<double>::quiet_NaN();
        if (support_len != nullptr)
            return copy_indices(record.support, support, support_capacity, support_len);
        return AIT_OK;
    });
}

ait_status ait_result_trace_vectors(const ait_result* result, int index, double* x, double* z) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(result != nullptr, AIT_ERR_NULL_POINTER, "result is null"));
        AIT_CHECK(require(index >= 0 && index < static_cast<int>(result->value.trace.size()),
                          AIT_ERR_INVALID_ARGUMENT, "trace index out of range"));
        AIT_CHECK(require(result->value.full_trace, AIT_ERR_INVALID_ARGUMENT,
                          "trace was thinned; per-iteration vectors were not kept"));
        const ait::IterationRecord& record =
            result->value.trace[static_cast<std::size_t>(index)];
        if (x != nullptr) std::copy_n(record.x.data(), record.x.size(), x);
        if (z != nullptr) std::copy_n(record.z.data(), record.z.size(), z);
        return AIT_OK;
    });
}

ait_status ait_result_write_trace_csv(const ait_result* result, const char* path) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(result != nullptr && path != nullptr, AIT_ERR_NULL_POINTER,
                          "result and path must be non-null"));
        ait::write_trace_csv(path, result->value);
        return AIT_OK;
    });
}

ait_status ait_result_errors(const ait_instance* instance, const ait_result* result,
                             double* linf, double* l2) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(instance != nullptr && result != nullptr, AIT_ERR_NULL_POINTER,
                          "instance and result must be non-null"));
        const ait::GroundTruth* truth = truth_of(instance);
        AIT_CHECK(require(truth != nullptr, AIT_ERR_NO_TRUTH, "instance has no ground truth"));
        AIT_CHECK(require(truth->signal.size() == result->value.final_x.size(),
                          AIT_ERR_DIMENSION_MISMATCH,
                          "result does not belong to this instance"));
        const ait::Vector difference = result->value.final_x - truth->signal;
        if (linf != nullptr) *linf = difference.cwiseAbs().maxCoeff();
        if (l2 != nullptr) *l2 = difference.norm();
        return AIT_OK;
    });
}

ait_status ait_contraction_factor(double c, int k, double mu, double* out) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(out != nullptr, AIT_ERR_NULL_POINTER, "output is null"));
        *out = ait::contraction_factor(c, k, mu);
        return AIT_OK;
    });
}

ait_status ait_check_hypotheses(double c, int k, int k_star, double mu,
                                ait_hypothesis_report* out) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(out != nullptr, AIT_ERR_NULL_POINTER, "output is null"));
        const ait::HypothesisReport report = ait::check_hypotheses(c, k, k_star, mu);
        out->theorem1 = report.theorem1 ? 1 : 0;
        out->corollary1 = report.corollary1 ? 1 : 0;
        out->mu_limit = report.mu_limit;
        out->mu_slack = report.mu_slack;
        out->k_upper = report.k_upper;
        out->k_lower_slack = report.k_lower_slack;
        out->k_upper_slack = report.k_upper_slack;
        out->uniqueness_k_limit = report.uniqueness_k_limit;
        return AIT_OK;
    });
}

ait_status ait_iteration_bound(double c, int k, int k_star, double mu, double dynamic_range,
                               double* out) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(out != nullptr, AIT_ERR_NULL_POINTER, "output is null"));
        *out = ait::iteration_bound(c, k, k_star, mu, dynamic_range);
        return AIT_OK;
    });
}

ait_status ait_detection_budget(double c, int k, double mu, double magnitude_ratio,
                                double* out) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(out != nullptr, AIT_ERR_NULL_POINTER, "output is null"));
        *out = ait::detection_budget(c, k, mu, magnitude_ratio);
        return AIT_OK;
    });
}

ait_status ait_verify_result(const ait_instance* instance, const ait_result* result,
                             int rule_kind, double scad_a, int k, ait_verdict* out) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(instance != nullptr && result != nullptr && out != nullptr,
                          AIT_ERR_NULL_POINTER, "instance, result, and output must be non-null"));
        const ait::GroundTruth* truth = truth_of(instance);
        AIT_CHECK(require(truth != nullptr, AIT_ERR_NO_TRUTH, "instance has no ground truth"));
        ait::ThresholdRule rule;
        AIT_CHECK(make_rule(rule_kind, scad_a, &rule));
        const ait::TheoryBounds bounds = bounds_for(instance->value, rule, k);
        const ait::VerificationVerdict verdict =
            ait::verify_trace(ait::as_trace_samples(result->value), *truth, bounds);
        fill_verdict(verdict, bounds, out);
        return AIT_OK;
    });
}

ait_status ait_verify_trace_csv(const ait_instance* instance, const char* trace_path,
                                int rule_kind, double scad_a, int k, ait_verdict* out) {
    return guarded([&]() -> ait_status {
        AIT_CHECK(require(instance != nullptr && trace_path != nullptr && out != nullptr,
                          AIT_ERR_NULL_POINTER,
                          "instance, trace path, and output must be non-null"));
        const ait::GroundTruth* truth = truth_of(instance);
        AIT_CHECK(require(truth != nullptr, AIT_ERR_NO_TRUTH, "instance has no ground truth"));
        ait::ThresholdRule rule;
        AIT_CHECK(make_rule(rule_kind, scad_a, &rule));
        const ait::TheoryBounds bounds = bounds_for(instance->value, rule, k);
        const std::vector<ait::TraceSample> samples = ait::read_trace_csv(trace_path);
        const ait::VerificationVerdict verdict = ait::verify_trace(samples, *truth, bounds);
        fill_verdict(verdict, bounds, out);
        return AIT_OK;
    });
}

} // extern "C"
