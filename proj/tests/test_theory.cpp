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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ait/theory.hpp"

using ait::GroundTruth;
using ait::TheoryBounds;
using ait::TraceSample;
using ait::Vector;
using ait::VerificationVerdict;

namespace {

// The worked reference configuration: k = k* = 9, mu = 1/40, Dr = 10.
constexpr double kMu = 0.025;
constexpr int kNine = 9;
constexpr double kTen = 10.0;

// Tiny scenario used by the synthetic-trace tests: k = k* = 2, mu = 0.01,
// magnitudes {4, 1}. Hypotheses hold easily: 3*2*0.01 = 0.06 << 1.
GroundTruth tiny_truth() {
    Vector x = Vector::Zero(12);
    x[3] = 4.0;
    x[7] = -1.0;
    return ait::make_truth(x);
}

TheoryBounds tiny_bounds(int k = 2) {
    return ait::compute_bounds(0.0, k, 2, 0.01, 4.0);
}

TraceSample sample(int t, std::vector<int> support, double linf) {
    TraceSample s;
    s.t = t;
    s.tau = 0.5;
    s.support = std::move(support);
    s.linf_error = linf;
    return s;
}

// A trace that converges the way the theory describes: the large component
// enters first, the whole support is present from t = 2 on, and the error
// decays immediately at the contraction rate.
std::vector<TraceSample> clean_trace(const TheoryBounds& bounds, int length = 8) {
    const double lead = 1.5 * 1.0;  // (3+c)/2 * min|x*| with c = 0
    std::vector<TraceSample> trace;
    trace.push_back(sample(1, {3}, 1.0));
    for (int t = 2; t <= length; ++t)
        trace.push_back(sample(t, {3, 7}, lead * std::pow(bounds.rho, t - 1) * 0.9));
    return trace;
}

} // namespace

TEST_CASE("contraction factor") {
    CHECK(ait::contraction_factor(0.0, kNine, kMu) == doctest::Approx(0.225).epsilon(1e-15));
    CHECK(ait::contraction_factor(1.0, kNine, kMu) == doctest::Approx(0.45).epsilon(1e-15));
    CHECK(ait::contraction_factor(0.5, 4, 0.1) == doctest::Approx(0.6).epsilon(1e-15));
}

TEST_CASE("golden iteration bounds at the reference configuration") {
    // Frozen from an independent 50-digit evaluation of the closed form.
    const double hard = ait::iteration_bound(0.0, kNine, kNine, kMu, kTen);
    const double half = ait::iteration_bound(1.0 / 3.0, kNine, kNine, kMu, kTen);
    const double two_thirds = ait::iteration_bound(0.5, kNine, kNine, kMu, kTen);
    const double soft = ait::iteration_bound(1.0, kNine, kNine, kMu, kTen);

    CHECK(hard == doctest::Approx(20.991667568965138).epsilon(1e-12));
    CHECK(half == doctest::Approx(25.624569852783172).epsilon(1e-12));
    CHECK(two_thirds == doctest::Approx(28.577182218152673).epsilon(1e-12));
    CHECK(soft == doctest::Approx(42.64474976589985).epsilon(1e-12));

    CHECK(std::floor(hard) == 20.0);
    CHECK(std::floor(half) == 25.0);
    CHECK(std::floor(two_thirds) == 28.0);
    CHECK(std::floor(soft) == 42.0);

    // Equal magnitudes drop the dynamic-range term.
    CHECK(ait::iteration_bound(0.0, kNine, kNine, kMu, 1.0) ==
          doctest::Approx(18.399164824831974).epsilon(1e-12));
}

TEST_CASE("detection budgets: frozen values and monotonicity in the ratio") {
    CHECK(ait::detection_budget(0.0, kNine, kMu, 1.0) ==
          doctest::Approx(1.1748956031039968).epsilon(1e-12));
    CHECK(ait::detection_budget(0.0, kNine, kMu, 2.0) ==
          doctest::Approx(1.7155540881344639).epsilon(1e-12));
    CHECK(ait::detection_budget(0.0, kNine, kMu, 10.0) ==
          doctest::Approx(2.8496475282507477).epsilon(1e-12));

    // A larger gap to the next component costs more iterations to bridge:
    // the budget grows with the adjacent magnitude ratio.
    double previous = 0.0;
    for (double ratio = 1.0; ratio <= 100.0; ratio *= 1.5) {
        const double budget = ait::detection_budget(0.0, kNine, kMu, ratio);
        CHECK(budget > previous - 1e-12);
        previous = budget;
    }

    // Summation consistency: recruiting all k* components one by one, with the
    // dynamic range split into equal adjacent ratios, never exceeds the
    // all-at-once bound.
    const double total = ait::iteration_bound(0.0, kNine, kNine, kMu, kTen);
    const double equal_ratio = std::pow(kTen, 1.0 / (kNine - 1));
    const double stepwise =
        kNine + (kNine - 1) * ait::detection_budget(0.0, kNine, kMu, equal_ratio);
    CHECK(stepwise <= total + 1e-9);
}

TEST_CASE("hypothesis report") {
    const ait::HypothesisReport ok = ait::check_hypotheses(0.0, kNine, kNine, kMu);
    CHECK(ok.theorem1);
    CHECK(ok.corollary1);
    CHECK(ok.mu_limit == doctest::Approx(1.0 / 27.0).epsilon(1e-15));
    CHECK(ok.mu_slack == doctest::Approx(1.0 / 27.0 - kMu).epsilon(1e-12));
    CHECK(ok.k_upper == doctest::Approx(1.0 / (3.0 * kMu)).epsilon(1e-15));
    CHECK(ok.k_lower_slack == 0.0);
    CHECK(ok.uniqueness_k_limit == doctest::Approx((1.0 + 40.0) / 2.0).epsilon(1e-15));

    // Strict boundaries: mu exactly at the limit fails, and k must reach k*.
    CHECK_FALSE(ait::check_hypotheses(0.0, kNine, kNine, 1.0 / 27.0).theorem1);
    CHECK_FALSE(ait::check_hypotheses(0.0, 8, kNine, kMu).theorem1);
    CHECK_FALSE(ait::check_hypotheses(0.0, 14, kNine, kMu).theorem1);  // 14 >= 13.33
    CHECK(ait::check_hypotheses(0.0, 13, kNine, kMu).theorem1);
    CHECK_FALSE(ait::check_hypotheses(0.0, 13, kNine, kMu).corollary1);  // k != k*

    // Oversized k makes identification impossible to certify.
    const TheoryBounds loose = ait::compute_bounds(0.0, 14, kNine, kMu, kTen);
    CHECK_FALSE(loose.t_bound.has_value());
    CHECK_FALSE(loose.t_bound_exact_k.has_value());
}

TEST_CASE("bound functions reject out-of-domain inputs") {
    CHECK_THROWS_AS(ait::iteration_bound(-0.1, 2, 2, 0.01, 1.0), ait::Error);
    CHECK_THROWS_AS(ait::iteration_bound(1.5, 2, 2, 0.01, 1.0), ait::Error);
    CHECK_THROWS_AS(ait::iteration_bound(0.0, 2, 2, 0.0, 1.0), ait::Error);
    CHECK_THROWS_AS(ait::iteration_bound(0.0, 2, 2, 1.5, 1.0), ait::Error);
    CHECK_THROWS_AS(ait::iteration_bound(0.0, 2, 2, 0.01, 0.5), ait::Error);
    CHECK_THROWS_AS(ait::iteration_bound(0.0, 0, 2, 0.01, 1.0), ait::Error);
    try {
        ait::iteration_bound(0.0, 2, 2, 0.3, 1.0);  // 3*2*0.3 = 1.8 > 1
        FAIL("expected a hypothesis failure");
    } catch (const ait::Error& e) {
        CHECK(e.code() == ait::ErrorCode::HypothesisViolated);
    }
    CHECK_THROWS_AS(ait::detection_budget(0.0, 2, 0.01, 0.5), ait::Error);  // ratio < 1
    // rho must stay below 1/2 for the per-rank budget to be defined.
    CHECK_THROWS_AS(ait::detection_budget(0.0, 9, 0.06, 1.0), ait::Error);
}

TEST_CASE("compute_bounds composes the pieces") {
    const TheoryBounds bounds =
        ait::compute_bounds(0.0, kNine, kNine, kMu, kTen,
                            {2.0, 10.0});
    CHECK(bounds.rho == doctest::Approx(0.225).epsilon(1e-15));
    CHECK(bounds.hypotheses.corollary1);
    REQUIRE(bounds.t_bound.has_value());
    CHECK(*bounds.t_bound == doctest::Approx(20.991667568965138).epsilon(1e-12));
    REQUIRE(bounds.detection_budgets.size() == 2);
    CHECK(bounds.detection_budgets[0] == doctest::Approx(1.7155540881344639).epsilon(1e-12));
    CHECK(bounds.detection_budgets[1] == doctest::Approx(2.8496475282507477).epsilon(1e-12));
}

TEST_CASE("verify_trace accepts a theory-conforming trace") {
    const GroundTruth truth = tiny_truth();
    const TheoryBounds bounds = tiny_bounds();
    const VerificationVerdict verdict = ait::verify_trace(clean_trace(bounds), truth, bounds);

    REQUIRE(verdict.support_identified_at.has_value());
    CHECK(*verdict.support_identified_at == 2);
    CHECK(verdict.within_t_bound);
    CHECK(verdict.geometric_envelope_ok);
    CHECK(verdict.envelope_from_identification);
    REQUIRE(verdict.envelope_anchor.has_value());
    CHECK(*verdict.envelope_anchor == 2);
    CHECK(verdict.recruitment_order_ok);
    CHECK(verdict.containment_persistent);
    REQUIRE(verdict.corollary_exact.has_value());
    CHECK(*verdict.corollary_exact);
}

TEST_CASE("verify_trace: identification requires containment to persist") {
    const GroundTruth truth = tiny_truth();
    const TheoryBounds bounds = tiny_bounds();

    // The support is complete at t = 2, lost at t = 4, and complete again
    // from t = 5 on: identification is at 5, and top-2 persistence is broken.
    std::vector<TraceSample> trace;
    trace.push_back(sample(1, {3}, 1.0));
    trace.push_back(sample(2, {3, 7}, 0.5));
    trace.push_back(sample(3, {3, 7}, 0.25));
    trace.push_back(sample(4, {3, 9}, 0.4));
    trace.push_back(sample(5, {3, 7}, 1e-14));
    trace.push_back(sample(6, {3, 7}, 1e-15));
    const VerificationVerdict verdict = ait::verify_trace(trace, truth, bounds);
    REQUIRE(verdict.support_identified_at.has_value());
    CHECK(*verdict.support_identified_at == 5);
    CHECK_FALSE(verdict.containment_persistent);
    REQUIRE(verdict.corollary_exact.has_value());
    CHECK(*verdict.corollary_exact);  // support == truth from t = 5 onward

    // Never-contained truth: no identification, bound not met.
    std::vector<TraceSample> never;
    never.push_back(sample(1, {3}, 1.0));
    never.push_back(sample(2, {3, 9}, 1.0));
    const VerificationVerdict missing = ait::verify_trace(never, truth, bounds);
    CHECK_FALSE(missing.support_identified_at.has_value());
    CHECK_FALSE(missing.within_t_bound);
    CHECK_FALSE(missing.corollary_exact.value());
}

TEST_CASE("verify_trace: identification after the bound fails within_t_bound") {
    const GroundTruth truth = tiny_truth();
    const TheoryBounds bounds = tiny_bounds();
    const int limit = static_cast<int>(std::floor(*bounds.t_bound));
    std::vector<TraceSample> trace;
    for (int t = 1; t <= limit + 3; ++t) {
        if (t <= limit + 1)
            trace.push_back(sample(t, {3}, 1.0));
        else
            trace.push_back(sample(t, {3, 7}, 1e-14));
    }
    const VerificationVerdict verdict = ait::verify_trace(trace, truth, bounds);
    REQUIRE(verdict.support_identified_at.has_value());
    CHECK(*verdict.support_identified_at == limit + 2);
    CHECK_FALSE(verdict.within_t_bound);
}

TEST_CASE("verify_trace: stagnating error violates the geometric envelope") {
    const GroundTruth truth = tiny_truth();
    const TheoryBounds bounds = tiny_bounds();
    const int limit = static_cast<int>(std::floor(*bounds.t_bound));
    std::vector<TraceSample> trace;
    trace.push_back(sample(1, {3}, 1.0));
    // Support correct from t = 2, but the error never decays below half the
    // smallest component: no anchor in [2, floor(T)] can absorb that.
    for (int t = 2; t <= limit + 30; ++t)
        trace.push_back(sample(t, {3, 7}, 0.5));
    const VerificationVerdict verdict = ait::verify_trace(trace, truth, bounds);
    CHECK(*verdict.support_identified_at == 2);
    CHECK_FALSE(verdict.geometric_envelope_ok);
    CHECK_FALSE(verdict.envelope_anchor.has_value());
    CHECK_FALSE(verdict.envelope_from_identification);
}

TEST_CASE("verify_trace: converged iterates sit on the floating-point floor") {
    const GroundTruth truth = tiny_truth();
    const TheoryBounds bounds = tiny_bounds();
    // Errors collapse to machine noise immediately: the envelope holds via the
    // absolute floor even where rho^t is far smaller.
    std::vector<TraceSample> trace;
    trace.push_back(sample(1, {3}, 1.0));
    for (int t = 2; t <= 25; ++t)
        trace.push_back(sample(t, {3, 7}, 2e-16));
    const VerificationVerdict verdict = ait::verify_trace(trace, truth, bounds);
    CHECK(verdict.geometric_envelope_ok);
}

TEST_CASE("verify_trace: recruitment order of strictly larger components") {
    const GroundTruth truth = tiny_truth();  // |x*_3| = 4 > |x*_7| = 1
    const TheoryBounds bounds = tiny_bounds();
    // The small component enters at t = 1, the large one only at t = 2.
    std::vector<TraceSample> trace;
    trace.push_back(sample(1, {7}, 4.0));
    trace.push_back(sample(2, {3, 7}, 1e-14));
    trace.push_back(sample(3, {3, 7}, 1e-15));
    const VerificationVerdict verdict = ait::verify_trace(trace, truth, bounds);
    CHECK_FALSE(verdict.recruitment_order_ok);

    // Equal magnitudes impose no order.
    Vector x = Vector::Zero(12);
    x[3] = 2.0;
    x[7] = -2.0;
    const GroundTruth equal = ait::make_truth(x);
    const TheoryBounds equal_bounds = ait::compute_bounds(0.0, 2, 2, 0.01, 1.0);
    std::vector<TraceSample> swapped;
    swapped.push_back(sample(1, {7}, 2.0));
    swapped.push_back(sample(2, {3, 7}, 1e-14));
    CHECK(ait::verify_trace(swapped, equal, equal_bounds).recruitment_order_ok);
}

TEST_CASE("verify_trace: corollary exactness needs support equality") {
    const GroundTruth truth = tiny_truth();
    const TheoryBounds bounds = tiny_bounds();
    // Containment holds from t = 2 but a spurious index rides along.
    std::vector<TraceSample> trace;
    trace.push_back(sample(1, {3}, 1.0));
    trace.push_back(sample(2, {3, 7, 9}, 0.5));
    trace.push_back(sample(3, {3, 7}, 1e-14));
    const VerificationVerdict verdict = ait::verify_trace(trace, truth, bounds);
    CHECK(*verdict.support_identified_at == 2);
    REQUIRE(verdict.corollary_exact.has_value());
    CHECK_FALSE(*verdict.corollary_exact);

    // With k > k* the exact-sparsity hypotheses do not apply at all.
    const TheoryBounds loose = tiny_bounds(3);
    CHECK_FALSE(ait::verify_trace(trace, truth, loose).corollary_exact.has_value());
}

TEST_CASE("verify_trace: empty truth is trivially verified") {
    const GroundTruth empty = ait::make_truth(Vector::Zero(5));
    TheoryBounds bounds;  // never consulted beyond rho
    bounds.rho = 0.1;
    std::vector<TraceSample> trace;
    trace.push_back(sample(1, {}, 0.0));
    const VerificationVerdict verdict = ait::verify_trace(trace, empty, bounds);
    CHECK(verdict.support_identified_at.value() == 0);
    CHECK(verdict.within_t_bound);
    CHECK(verdict.geometric_envelope_ok);
    CHECK(verdict.recruitment_order_ok);
    CHECK(verdict.containment_persistent);
}

TEST_CASE("verify_trace rejects malformed traces") {
    const GroundTruth truth = tiny_truth();
    const TheoryBounds bounds = tiny_bounds();

    std::vector<TraceSample> gap;
    gap.push_back(sample(1, {3}, 1.0));
    gap.push_back(sample(3, {3, 7}, 0.5));  // skips t = 2
    CHECK_THROWS_AS(ait::verify_trace(gap, truth, bounds), ait::Error);

    std::vector<TraceSample> no_error;
    no_error.push_back(sample(1, {3}, 1.0));
    no_error.push_back(sample(2, {3, 7}, 0.5));
    no_error[1].linf_error.reset();
    try {
        ait::verify_trace(no_error, truth, bounds);
        FAIL("expected an incomplete-trace failure");
    } catch (const ait::Error& e) {
        CHECK(e.code() == ait::ErrorCode::IncompleteTrace);
    }
}
