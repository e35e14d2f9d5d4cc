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

#include "ait/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ait/error.hpp"

namespace ait {

namespace {

// Iterates whose sup-norm exceeds this multiple of ||A^T y||_inf are declared
// divergent: the thresholded Landweber map is expansive outside the certified
// coherence regime and must fail loudly rather than loop to the cap.
constexpr double kDivergenceFactor = 1e12;

// Full traces (keeping every x and z) are retained automatically while
// N * max_iterations stays within this many stored entries.
constexpr double kFullTraceEntryLimit = 1e7;

long default_max_iterations(int k) { return 50L * static_cast<long>(k) + 100L; }

} // namespace

const char* halt_reason_name(HaltReason reason) noexcept {
    switch (reason) {
        case HaltReason::MaxIterations:
            return "max_iterations";
        case HaltReason::Stalled:
            return "stalled";
        case HaltReason::SupportStableAndStalled:
            return "support_stable_and_stalled";
    }
    return "unknown";
}

Vector landweber_step(const SensingMatrix& matrix, const Vector& y, const Vector& x) {
    if (y.size() != matrix.rows() || x.size() != matrix.cols())
        fail(ErrorCode::DimensionMismatch,
             "landweber step: matrix is " + std::to_string(matrix.rows()) + "x" +
                 std::to_string(matrix.cols()) + " but |y| = " + std::to_string(y.size()) +
                 ", |x| = " + std::to_string(x.size()));
    // Residual first: one M-vector intermediate, then the transpose product.
    Vector residual = y - matrix.entries * x;
    return x + matrix.entries.transpose() * residual;
}

std::pair<double, int> select_threshold(const Vector& z, int k) {
    const int n = static_cast<int>(z.size());
    if (k < 1 || k > n - 1)
        fail(ErrorCode::InvalidK, "need 1 <= k <= N-1 (got k = " + std::to_string(k) +
                                      ", N = " + std::to_string(n) + ")");
    // (k+1)-th largest magnitude via an O(N) expected-time order statistic.
    std::vector<double> magnitudes(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) magnitudes[static_cast<std::size_t>(i)] = std::abs(z[i]);
    std::nth_element(magnitudes.begin(), magnitudes.begin() + k, magnitudes.end(),
                     std::greater<double>());
    const double tau = magnitudes[static_cast<std::size_t>(k)];
    int pivot = -1;
    for (int i = 0; i < n; ++i) {
        if (std::abs(z[i]) == tau) {
            pivot = i;
            break;
        }
    }
    return {tau, pivot};
}

RecoveryResult solve(const ProblemInstance& instance, const SolverConfig& config) {
    const SensingMatrix& matrix = instance.matrix;
    const int n = static_cast<int>(matrix.cols());
    const int k = config.specified_sparsity;
    if (k < 1 || k > n - 1)
        fail(ErrorCode::InvalidK, "need 1 <= k <= N-1 (got k = " + std::to_string(k) +
                                      ", N = " + std::to_string(n) + ")");
    if (instance.observation.size() != matrix.rows())
        fail(ErrorCode::DimensionMismatch, "observation length does not match matrix rows");
    if (config.stable_support_window < 1)
        fail(ErrorCode::InvalidArgument, "stable support window must be at least 1");
    if (!(config.stall_tolerance >= 0.0))
        fail(ErrorCode::InvalidArgument, "stall tolerance must be non-negative");
    const long max_iterations =
        config.max_iterations == 0 ? default_max_iterations(k) : config.max_iterations;
    if (max_iterations < 1) fail(ErrorCode::InvalidArgument, "max iterations must be positive");
    // Validates the rule (including the scad parameter) before iterating.
    boundedness_constant(config.rule);

    bool full_trace = false;
    if (config.keep_full_trace > 0) {
        full_trace = true;
    } else if (config.keep_full_trace < 0) {
        full_trace = static_cast<double>(n) * static_cast<double>(max_iterations) <=
                     kFullTraceEntryLimit;
    }

    // Ground truth mapped into the normalized frame the iteration runs in:
    // y = A_raw x = A_norm (scale .* x).
    std::optional<Vector> truth_normalized;
    if (instance.truth.has_value())
        truth_normalized = instance.truth->signal.cwiseProduct(matrix.column_scales);

    const Vector correlate = matrix.entries.transpose() * instance.observation;
    const double divergence_limit = kDivergenceFactor * correlate.cwiseAbs().maxCoeff();

    RecoveryResult result;
    result.full_trace = full_trace;
    result.trace.reserve(static_cast<std::size_t>(
        std::min(max_iterations, static_cast<long>(100000))));

    Vector x = Vector::Zero(n);
    std::vector<int> previous_support;
    int stable_run = 0;

    for (long t = 1; t <= max_iterations; ++t) {
        Vector z = landweber_step(matrix, instance.observation, x);
        const auto [tau, pivot] = select_threshold(z, k);
        (void)pivot;

        Vector next(n);
        std::vector<int> support;
        for (int i = 0; i < n; ++i) {
            next[i] = detail::threshold_component(config.rule, z[i], tau);
            if (std::abs(z[i]) > tau) support.push_back(i);
        }

        IterationRecord record;
        record.t = static_cast<int>(t);
        record.tau = tau;
        record.support = support;
        if (truth_normalized.has_value())
            record.linf_error = (next - *truth_normalized).cwiseAbs().maxCoeff();
        if (full_trace) {
            record.x = next;
            record.z = z;
        }
        result.trace.push_back(std::move(record));
        result.iterations_run = t;

        const double magnitude = next.cwiseAbs().maxCoeff();
        if (!next.allFinite() || magnitude > divergence_limit) {
            result.diverged = true;
            result.halt_reason = HaltReason::MaxIterations;
            x = next;
            break;
        }

        // Exact fixed point: nothing can change from here on.
        if ((next.array() == x.array()).all()) {
            result.halt_reason = HaltReason::Stalled;
            x = next;
            break;
        }

        // Support stability + stalled values.
        const double delta = (next - x).cwiseAbs().maxCoeff();
        double relative_change;
        if (delta == 0.0) {
            relative_change = 0.0;
        } else if (magnitude == 0.0) {
            relative_change = std::numeric_limits<double>::infinity();
        } else {
            relative_change = delta / magnitude;
        }
        stable_run = (t > 1 && support == previous_support) ? stable_run + 1 : 1;
        previous_support = std::move(support);
        x = std::move(next);

        if (stable_run >= config.stable_support_window &&
            relative_change < config.stall_tolerance) {
            result.halt_reason = HaltReason::SupportStableAndStalled;
            break;
        }
        result.halt_reason = HaltReason::MaxIterations;
    }

    // Map back to the caller's coordinates.
    result.final_x = x.cwiseQuotient(matrix.column_scales);
    for (int i = 0; i < n; ++i)
        if (x[i] != 0.0) result.final_support.push_back(i);
    return result;
}

std::vector<TraceSample> as_trace_samples(const RecoveryResult& result) {
    std::vector<TraceSample> samples;
    samples.reserve(result.trace.size());
    for (const IterationRecord& record : result.trace) {
        TraceSample sample;
        sample.t = record.t;
        sample.tau = record.tau;
        sample.support = record.support;
        sample.linf_error = record.linf_error;
        samples.push_back(std::move(sample));
    }
    return samples;
}

} // namespace ait
