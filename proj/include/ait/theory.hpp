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

#include <optional>
#include <string>
#include <vector>

#include "ait/problem.hpp"

namespace ait {

// Both convergence hypotheses with their slack to each boundary.
// theorem1  <=>  0 < mu < 1/((3+c) k_star)  and  k_star <= k < 1/((3+c) mu)
// corollary1 <=> theorem1 and k == k_star
struct HypothesisReport {
    bool theorem1 = false;
    bool corollary1 = false;
    double mu_limit = 0.0;            // 1/((3+c) k_star)
    double mu_slack = 0.0;            // mu_limit - mu
    double k_upper = 0.0;             // 1/((3+c) mu)
    double k_lower_slack = 0.0;       // k - k_star
    double k_upper_slack = 0.0;       // k_upper - k
    double uniqueness_k_limit = 0.0;  // (1 + 1/mu)/2, informational
};

// Closed-form convergence quantities for one (rule, k, instance) pairing.
// t_bound is the support-identification iteration bound; real-valued, callers
// floor it for integer display. detection_budgets[r] is the extra-iteration
// budget to recruit the (r+2)-th largest component after the (r+1)-th, at the
// adjacent magnitude ratio supplied to compute_bounds.
struct TheoryBounds {
    double c = 0.0;
    int k = 0;
    int k_star = 0;
    double mu = 0.0;
    double dynamic_range = 1.0;
    double rho = 0.0;  // (1+c) k mu
    HypothesisReport hypotheses;
    std::optional<double> t_bound;          // present iff theorem1 holds
    std::optional<double> t_bound_exact_k;  // t_bound evaluated at k = k_star
    std::vector<double> detection_budgets;  // size k_star - 1 when ratios given
};

// One recorded solver iteration as seen by the verifier.
struct TraceSample {
    int t = 0;  // 1-based, contiguous
    double tau = 0.0;
    std::vector<int> support;  // ascending indices
    std::optional<double> linf_error;  // ||x^(t) - x*||_inf, if truth known
};

struct VerificationVerdict {
    // Smallest t such that the true support is contained in the iterate
    // support at every recorded s >= t. 0 when the truth is empty; nullopt
    // when containment fails at the last record.
    std::optional<int> support_identified_at;
    bool within_t_bound = false;
    bool geometric_envelope_ok = false;
    bool recruitment_order_ok = false;
    bool containment_persistent = false;
    // Present only when the exact-sparsity hypotheses hold: iterate support
    // equals the true support at every t >= support_identified_at.
    std::optional<bool> corollary_exact;
    // Anchor iteration at which the geometric envelope check succeeded, and
    // whether the stricter anchor (= support_identified_at) also succeeds.
    std::optional<int> envelope_anchor;
    bool envelope_from_identification = false;
    std::vector<std::string> notes;
};

// rho = (1+c) k mu. Pure arithmetic; no hypothesis check.
double contraction_factor(double c, int k, double mu);

HypothesisReport check_hypotheses(double c, int k, int k_star, double mu);

// Support-identification bound
//   T = k* + (k*-1) * log_rho[(1-(3+c)k mu) / ((3+c) - (c^2+4c+3+2/Dr) k mu)]
//       - log_rho(Dr)
// Requires the theorem1 hypotheses; throws HypothesisViolated naming the
// failing inequality, or LogDomain if a log argument is non-positive.
double iteration_bound(double c, int k, int k_star, double mu, double dynamic_range);

// Per-rank recruitment budget
//   l_r = log_rho[(1-(3+c)k mu) / ((3+c)(1-rho) ratio - 2 k mu)]
// for the adjacent magnitude ratio |x*_r| / |x*_{r+1}| >= 1. Real-valued;
// larger ratios cost more iterations. Same hypothesis requirements as
// iteration_bound.
double detection_budget(double c, int k, double mu, double magnitude_ratio);

// Bundles rho, hypotheses, bounds, and optional per-rank budgets. Bound fields
// are nullopt when the hypotheses fail (instead of throwing).
TheoryBounds compute_bounds(double c, int k, int k_star, double mu, double dynamic_range,
                            const std::vector<double>& adjacent_ratios = {});

// Checks a recorded trace against the convergence guarantees:
//  - support identification time and its bound floor(T)
//  - geometric error envelope (3+c)/2 * min|x*| * rho^(t - anchor + 1), with a
//    1e-9 relative slack and an absolute floor of 1e-13 * max|x*| for iterates
//    that have converged to the floating-point noise floor; the anchor is
//    searched over [identification time, floor(T)], and the verdict separately
//    reports whether the identification-time anchor itself suffices
//  - recruitment order: strictly larger true components never enter the
//    iterate support later than strictly smaller ones
//  - containment persistence: once the top-r true components (r at each strict
//    magnitude decrease, plus r = k*) are all in the support, they stay in it
//  - exact support equality from the identification time onward, when the
//    exact-sparsity hypotheses hold
// Requires contiguous t starting at 1 and, for nonempty truth, an l-inf error
// on every sample (IncompleteTrace otherwise).
VerificationVerdict verify_trace(const std::vector<TraceSample>& trace,
                                 const GroundTruth& truth, const TheoryBounds& bounds);

} // namespace ait
