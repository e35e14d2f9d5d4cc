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

#include "ait/theory.hpp"

#include <algorithm>
#include <cmath>

#include "ait/error.hpp"

namespace ait {

namespace {

// Relative slack absorbing floating-point accumulation in the envelope check.
constexpr double kEnvelopeSlack = 1e-9;
// Absolute floor: once the iterate error reaches the floating-point noise
// floor of the problem scale, the exact-arithmetic envelope no longer binds.
constexpr double kEnvelopeFloorScale = 1e-13;

void validate_bound_inputs(double c, int k, int k_star, double mu, double dynamic_range) {
    if (!(c >= 0.0 && c <= 1.0) || !std::isfinite(c))
        fail(ErrorCode::InvalidArgument, "boundedness constant must lie in [0, 1]");
    if (k_star < 1) fail(ErrorCode::InvalidArgument, "k* must be at least 1");
    if (k < 1) fail(ErrorCode::InvalidK, "k must be at least 1");
    if (!(mu > 0.0 && mu <= 1.0))
        fail(ErrorCode::InvalidArgument, "coherence must lie in (0, 1]");
    if (!(dynamic_range >= 1.0) || !std::isfinite(dynamic_range))
        fail(ErrorCode::InvalidArgument, "dynamic range must be finite and >= 1");
}

void require_theorem1(double c, int k, int k_star, double mu) {
    const HypothesisReport report = check_hypotheses(c, k, k_star, mu);
    if (report.theorem1) return;
    if (!(mu < report.mu_limit))
        fail(ErrorCode::HypothesisViolated,
             "coherence too large: need mu < 1/((3+c)k*) = " + std::to_string(report.mu_limit) +
                 ", got mu = " + std::to_string(mu));
    if (k < k_star)
        fail(ErrorCode::HypothesisViolated, "specified sparsity too small: need k >= k* = " +
                                                std::to_string(k_star) + ", got k = " +
                                                std::to_string(k));
    fail(ErrorCode::HypothesisViolated,
         "specified sparsity too large: need k < 1/((3+c)mu) = " + std::to_string(report.k_upper) +
             ", got k = " + std::to_string(k));
}

double checked_log_ratio(double numerator, double denominator, double rho,
                         const char* which) {
    if (!(denominator > 0.0) || !(numerator > 0.0))
        fail(ErrorCode::LogDomain, std::string(which) +
                                       ": log argument is non-positive (numerator " +
                                       std::to_string(numerator) + ", denominator " +
                                       std::to_string(denominator) + ")");
    // log base rho in (0, 1): log(arg)/log(rho).
    return std::log(numerator / denominator) / std::log(rho);
}

} // namespace

double contraction_factor(double c, int k, double mu) {
    if (!(c >= 0.0 && c <= 1.0) || !std::isfinite(c))
        fail(ErrorCode::InvalidArgument, "boundedness constant must lie in [0, 1]");
    if (k < 1) fail(ErrorCode::InvalidK, "k must be at least 1");
    if (!(mu > 0.0 && mu <= 1.0))
        fail(ErrorCode::InvalidArgument, "coherence must lie in (0, 1]");
    return (1.0 + c) * static_cast<double>(k) * mu;
}

HypothesisReport check_hypotheses(double c, int k, int k_star, double mu) {
    HypothesisReport report;
    report.mu_limit = 1.0 / ((3.0 + c) * static_cast<double>(k_star));
    report.mu_slack = report.mu_limit - mu;
    report.k_upper = 1.0 / ((3.0 + c) * mu);
    report.k_lower_slack = static_cast<double>(k - k_star);
    report.k_upper_slack = report.k_upper - static_cast<double>(k);
    report.uniqueness_k_limit = (1.0 + 1.0 / mu) / 2.0;
    report.theorem1 = mu > 0.0 && mu < report.mu_limit && k_star <= k &&
                      static_cast<double>(k) < report.k_upper;
    report.corollary1 = report.theorem1 && k == k_star;
    return report;
}

double iteration_bound(double c, int k, int k_star, double mu, double dynamic_range) {
    validate_bound_inputs(c, k, k_star, mu, dynamic_range);
    require_theorem1(c, k, k_star, mu);

    const double km = static_cast<double>(k) * mu;
    const double rho = (1.0 + c) * km;
    const double numerator = 1.0 - (3.0 + c) * km;
    const double denominator = (3.0 + c) - (c * c + 4.0 * c + 3.0 + 2.0 / dynamic_range) * km;
    const double stages = checked_log_ratio(numerator, denominator, rho, "iteration bound");
    const double range_term = std::log(dynamic_range) / std::log(rho);
    return static_cast<double>(k_star) + static_cast<double>(k_star - 1) * stages - range_term;
}

double detection_budget(double c, int k, double mu, double magnitude_ratio) {
    validate_bound_inputs(c, k, /*k_star=*/1, mu, /*dynamic_range=*/1.0);
    if (!(magnitude_ratio >= 1.0) || !std::isfinite(magnitude_ratio))
        fail(ErrorCode::InvalidArgument, "magnitude ratio must be finite and >= 1");
    const double km = static_cast<double>(k) * mu;
    const double rho = (1.0 + c) * km;
    if (!(rho < 0.5))
        fail(ErrorCode::HypothesisViolated, "contraction factor (1+c)k*mu = " +
                                                std::to_string(rho) + " is not below 1/2");
    const double numerator = 1.0 - (3.0 + c) * km;
    if (!(numerator > 0.0))
        fail(ErrorCode::HypothesisViolated,
             "need k < 1/((3+c)mu); got (3+c)k*mu = " + std::to_string((3.0 + c) * km));
    const double denominator = (3.0 + c) * (1.0 - rho) * magnitude_ratio - 2.0 * km;
    return checked_log_ratio(numerator, denominator, rho, "detection budget");
}

TheoryBounds compute_bounds(double c, int k, int k_star, double mu, double dynamic_range,
                            const std::vector<double>& adjacent_ratios) {
    validate_bound_inputs(c, k, k_star, mu, dynamic_range);
    TheoryBounds bounds;
    bounds.c = c;
    bounds.k = k;
    bounds.k_star = k_star;
    bounds.mu = mu;
    bounds.dynamic_range = dynamic_range;
    bounds.rho = contraction_factor(c, k, mu);
    bounds.hypotheses = check_hypotheses(c, k, k_star, mu);
    if (bounds.hypotheses.theorem1) {
        bounds.t_bound = iteration_bound(c, k, k_star, mu, dynamic_range);
        bounds.t_bound_exact_k = iteration_bound(c, k_star, k_star, mu, dynamic_range);
        for (double ratio : adjacent_ratios)
            bounds.detection_budgets.push_back(detection_budget(c, k, mu, ratio));
    }
    return bounds;
}

VerificationVerdict verify_trace(const std::vector<TraceSample>& trace,
                                 const GroundTruth& truth, const TheoryBounds& bounds) {
    VerificationVerdict verdict;

    // Trace completeness: contiguous 1-based iterations; error values present
    // whenever there is a truth to measure against.
    if (trace.empty()) fail(ErrorCode::IncompleteTrace, "trace has no samples");
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (trace[i].t != static_cast<int>(i) + 1)
            fail(ErrorCode::IncompleteTrace,
                 "trace iterations are not contiguous from 1 (sample " + std::to_string(i) +
                     " has t = " + std::to_string(trace[i].t) + ")");
        if (truth.sparsity > 0 && !trace[i].linf_error.has_value())
            fail(ErrorCode::IncompleteTrace, "sample t = " + std::to_string(trace[i].t) +
                                                 " lacks the error-to-truth column");
    }

    // Empty truth: every check is trivially satisfied.
    if (truth.sparsity == 0) {
        verdict.support_identified_at = 0;
        verdict.within_t_bound = true;
        verdict.geometric_envelope_ok = true;
        verdict.recruitment_order_ok = true;
        verdict.containment_persistent = true;
        verdict.envelope_from_identification = true;
        verdict.notes.push_back("empty truth: all checks hold trivially");
        return verdict;
    }

    const int total = static_cast<int>(trace.size());
    const std::vector<int>& ranked = truth.support;  // descending |x*|
    const int k_star = truth.sparsity;

    // Per-sample membership of each true index, and first entries.
    std::vector<std::vector<char>> contains(
        trace.size(), std::vector<char>(static_cast<std::size_t>(k_star), 0));
    std::vector<int> first_entry(static_cast<std::size_t>(k_star), -1);
    for (int s = 0; s < total; ++s) {
        const std::vector<int>& support = trace[static_cast<std::size_t>(s)].support;
        for (int r = 0; r < k_star; ++r) {
            const bool member =
                std::binary_search(support.begin(), support.end(), ranked[static_cast<std::size_t>(r)]);
            contains[static_cast<std::size_t>(s)][static_cast<std::size_t>(r)] = member ? 1 : 0;
            if (member && first_entry[static_cast<std::size_t>(r)] < 0)
                first_entry[static_cast<std::size_t>(r)] = s + 1;
        }
    }

    // Identification time: smallest t with full containment at every s >= t.
    int identified = -1;
    for (int s = total - 1; s >= 0; --s) {
        bool all = true;
        for (int r = 0; r < k_star && all; ++r)
            all = contains[static_cast<std::size_t>(s)][static_cast<std::size_t>(r)] != 0;
        if (!all) break;
        identified = s + 1;
    }
    if (identified > 0) verdict.support_identified_at = identified;

    // Identification bound.
    if (bounds.t_bound.has_value() && identified > 0) {
        const double bound_floor = std::floor(*bounds.t_bound);
        verdict.within_t_bound = static_cast<double>(identified) <= bound_floor;
        verdict.notes.push_back("identified at t = " + std::to_string(identified) +
                                ", bound floor(T) = " + std::to_string(bound_floor));
    } else if (!bounds.t_bound.has_value()) {
        verdict.notes.push_back("identification bound unavailable: hypotheses not satisfied");
    } else {
        verdict.notes.push_back("true support was not contained in the final iterate support");
    }

    // Geometric envelope: err(t) <= (3+c)/2 * min|x*| * rho^(t - anchor + 1)
    // for every recorded t >= anchor, allowing relative slack and an absolute
    // noise floor. The anchor may sit anywhere in [identification, floor(T)]:
    // the guarantee asserts existence of an identification event no later than
    // floor(T), and shrinkage rules can clip a just-recruited component so
    // hard that the first containment iteration starts above the envelope.
    double min_magnitude = std::abs(truth.signal[ranked.back()]);
    double max_magnitude = std::abs(truth.signal[ranked.front()]);
    const double floor_term = kEnvelopeFloorScale * max_magnitude;
    const double lead = (3.0 + bounds.c) / 2.0 * min_magnitude;
    auto envelope_holds_from = [&](int anchor) {
        double envelope = lead * bounds.rho;  // value at t = anchor
        for (int t = anchor; t <= total; ++t) {
            const double err = *trace[static_cast<std::size_t>(t - 1)].linf_error;
            if (err > std::max(envelope * (1.0 + kEnvelopeSlack), floor_term)) return false;
            envelope *= bounds.rho;
        }
        return true;
    };
    if (identified > 0 && bounds.t_bound.has_value()) {
        const int anchor_limit = std::min(
            total, static_cast<int>(std::max(std::floor(*bounds.t_bound),
                                             static_cast<double>(identified))));
        for (int anchor = identified; anchor <= anchor_limit; ++anchor) {
            if (envelope_holds_from(anchor)) {
                verdict.geometric_envelope_ok = true;
                verdict.envelope_anchor = anchor;
                verdict.envelope_from_identification = anchor == identified;
                break;
            }
        }
        if (verdict.geometric_envelope_ok) {
            verdict.notes.push_back(
                "geometric envelope holds from anchor t = " +
                std::to_string(*verdict.envelope_anchor) +
                (verdict.envelope_from_identification ? " (= identification time)" : ""));
        } else {
            verdict.notes.push_back("geometric envelope failed for every admissible anchor");
        }
    } else {
        verdict.notes.push_back("geometric envelope not evaluable without identification and bound");
    }

    // Recruitment order: a strictly larger true component never enters the
    // support later than a strictly smaller one. Equal-magnitude components
    // carry no order obligation.
    verdict.recruitment_order_ok = true;
    for (int r = 0; r + 1 < k_star && verdict.recruitment_order_ok; ++r) {
        for (int s = r + 1; s < k_star && verdict.recruitment_order_ok; ++s) {
            const double larger = std::abs(truth.signal[ranked[static_cast<std::size_t>(r)]]);
            const double smaller = std::abs(truth.signal[ranked[static_cast<std::size_t>(s)]]);
            if (!(larger > smaller)) continue;
            const int t_large = first_entry[static_cast<std::size_t>(r)];
            const int t_small = first_entry[static_cast<std::size_t>(s)];
            if (t_small < 0) continue;  // smaller never entered: nothing to compare
            if (t_large < 0 || t_large > t_small) {
                verdict.recruitment_order_ok = false;
                verdict.notes.push_back(
                    "recruitment order violated: |x*| rank " + std::to_string(r + 1) +
                    " entered at t = " + std::to_string(t_large) + " but rank " +
                    std::to_string(s + 1) + " at t = " + std::to_string(t_small));
            }
        }
    }

    // Containment persistence at each magnitude-group boundary: once the top-r
    // components (r at each strict decrease in |x*|, plus r = k*) are all
    // present, they remain present at every later record.
    std::vector<int> boundaries;
    for (int r = 0; r + 1 < k_star; ++r) {
        const double here = std::abs(truth.signal[ranked[static_cast<std::size_t>(r)]]);
        const double next = std::abs(truth.signal[ranked[static_cast<std::size_t>(r + 1)]]);
        if (here > next) boundaries.push_back(r + 1);
    }
    boundaries.push_back(k_star);
    verdict.containment_persistent = true;
    for (int r : boundaries) {
        int held_since = -1;
        for (int s = 0; s < total; ++s) {
            bool all = true;
            for (int i = 0; i < r && all; ++i)
                all = contains[static_cast<std::size_t>(s)][static_cast<std::size_t>(i)] != 0;
            if (all && held_since < 0) held_since = s + 1;
            if (!all && held_since >= 0) {
                verdict.containment_persistent = false;
                verdict.notes.push_back("containment of the top " + std::to_string(r) +
                                        " components held at t = " + std::to_string(held_since) +
                                        " but broke at t = " + std::to_string(s + 1));
                held_since = -1;
            }
        }
        if (!verdict.containment_persistent) break;
    }

    // Exact-sparsity conclusion: support equality from identification onward.
    if (bounds.hypotheses.corollary1) {
        bool exact = identified > 0;
        if (identified > 0) {
            for (int s = identified - 1; s < total && exact; ++s) {
                const std::vector<int>& support = trace[static_cast<std::size_t>(s)].support;
                exact = static_cast<int>(support.size()) == k_star;
            }
            // Containment at every s >= identified is already established, so
            // size equality makes the supports equal as sets.
        }
        verdict.corollary_exact = exact;
    }

    return verdict;
}

} // namespace ait
