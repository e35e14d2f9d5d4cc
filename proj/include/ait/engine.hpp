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

#pragma once

#include <utility>

#include "ait/theory.hpp"
#include "ait/thresholding.hpp"

namespace ait {

struct SolverConfig {
    ThresholdRule rule;
    int specified_sparsity = 0;       // k, the per-iteration nonzero budget; 1 <= k <= N-1
    long max_iterations = 0;          // 0 selects the default 50*k + 100
    double stall_tolerance = 1e-10;   // relative l-inf change considered stalled
    int stable_support_window = 5;    // consecutive unchanged-support iterations required
    int keep_full_trace = -1;         // 1 keep x/z, 0 thin, -1 auto (N*max_iterations <= 1e7)
};

enum class HaltReason { MaxIterations, Stalled, SupportStableAndStalled };

const char* halt_reason_name(HaltReason reason) noexcept;

// One iteration of the solve. x and z are stored only in full traces (empty
// vectors when thinned); t/tau/support/linf_error are always present.
struct IterationRecord {
    int t = 0;
    double tau = 0.0;
    std::vector<int> support;  // ascending; exactly the components with |z_i| > tau
    std::optional<double> linf_error;  // vs. truth in the normalized frame
    Vector x;  // x^(t), normalized frame
    Vector z;  // z^(t)
};

struct RecoveryResult {
    Vector final_x;  // original (pre-normalization) coordinates
    std::vector<int> final_support;
    long iterations_run = 0;
    HaltReason halt_reason = HaltReason::MaxIterations;
    bool diverged = false;
    bool full_trace = false;
    std::vector<IterationRecord> trace;  // t = 1 .. iterations_run
};

// z = x + A^T (y - A x), computed residual-first with one M-vector intermediate.
Vector landweber_step(const SensingMatrix& matrix, const Vector& y, const Vector& x);

// (tau, pivot): tau is the (k+1)-th largest |z_i| (order statistic, O(N)
// expected time), pivot the smallest index attaining it. Requires 1 <= k <= N-1.
std::pair<double, int> select_threshold(const Vector& z, int k);

// Runs the iteration x^(t+1) = H_tau(x^(t) + A^T(y - A x^(t))) from x^(0) = 0
// with tau re-selected each step as the (k+1)-th largest magnitude. Halts on
// (a) the iteration cap, (b) an exact fixed point (Stalled), or (c) support
// unchanged for stable_support_window iterations with relative l-inf change
// below stall_tolerance (SupportStableAndStalled). If ||x||_inf ever exceeds
// 1e12 * ||A^T y||_inf the run halts with MaxIterations and diverged = true.
// Deterministic: identical inputs produce identical traces.
RecoveryResult solve(const ProblemInstance& instance, const SolverConfig& config);

// Adapts a result's trace to the verifier's sample type.
std::vector<TraceSample> as_trace_samples(const RecoveryResult& result);

} // namespace ait
