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

#include "ait/thresholding.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "ait/error.hpp"

namespace ait {

namespace {

constexpr double kPi = std::numbers::pi;

void validate_rule(const ThresholdRule& rule) {
    switch (rule.kind) {
        case RuleKind::Hard:
        case RuleKind::Half:
        case RuleKind::TwoThirds:
        case RuleKind::Soft:
            return;
        case RuleKind::Scad:
            if (!(rule.scad_a > 2.0) || !std::isfinite(rule.scad_a))
                fail(ErrorCode::InvalidScadA, "scad parameter a must be finite and > 2 (got " +
                                                  std::to_string(rule.scad_a) + ")");
            return;
    }
    fail(ErrorCode::InvalidRule, "unknown thresholding rule");
}

// Minimizer of (1/2)(x-u)^2 + lambda |x|^(1/2) on x > 0, parameterized by the
// gate threshold tau (lambda chosen so the gate sits exactly at |u| = tau).
// Jumps to (2/3)tau as u -> tau+.
double half_positive(double u, double tau) {
    const double ratio = tau / u;  // in [0, 1) for u > tau
    const double inner = (std::numbers::sqrt2 / 2.0) * ratio * std::sqrt(ratio);
    const double angle = 2.0 * kPi / 3.0 - (2.0 / 3.0) * std::acos(inner);
    return (2.0 / 3.0) * u * (1.0 + std::cos(angle));
}

// Minimizer of (1/2)(x-u)^2 + lambda |x|^(2/3) on x > 0, same threshold
// parameterization. Jumps to tau/2 as u -> tau+. The arccosh argument is
// (3*sqrt(3)/4)(u/tau)^2 >= 1.299 for u >= tau in exact arithmetic; the
// max(...) clamp only absorbs rounding right at the branch point, and the
// discriminant is clamped at 0 for the same reason.
double two_thirds_positive(double u, double tau) {
    if (tau == 0.0) return u;
    static const double kArgCoefficient = 3.0 * std::sqrt(3.0) / 4.0;
    static const double kPhiCoefficient = std::pow(2.0, 2.0 / 3.0) / std::pow(3.0, 0.25);
    const double scaled = u / tau;
    const double theta = std::acosh(std::max(kArgCoefficient * scaled * scaled, 1.0));
    const double phi = kPhiCoefficient * std::cbrt(tau) * std::sqrt(std::cosh(theta / 3.0));
    const double discriminant = std::max(2.0 * u / phi - phi * phi, 0.0);
    const double root = (phi + std::sqrt(discriminant)) / 2.0;
    return root * root * root;
}

double scad_positive(double u, double tau, double a) {
    if (u > a * tau) return u;
    if (u > 2.0 * tau) return ((a - 1.0) * u - a * tau) / (a - 2.0);
    return u - tau;
}

// Defining function on u > tau >= 0; callers handle the gate and the sign.
double defining_function(const ThresholdRule& rule, double u, double tau) {
    switch (rule.kind) {
        case RuleKind::Hard:
            return u;
        case RuleKind::Half:
            return half_positive(u, tau);
        case RuleKind::TwoThirds:
            return two_thirds_positive(u, tau);
        case RuleKind::Soft:
            return u - tau;
        case RuleKind::Scad:
            return scad_positive(u, tau, rule.scad_a);
    }
    fail(ErrorCode::InvalidRule, "unknown thresholding rule");
}

} // namespace

namespace detail {

double threshold_component(const ThresholdRule& rule, double u, double tau) {
    if (tau == 0.0) return u;  // no active threshold: exact pass-through
    const double magnitude = std::abs(u);
    if (!(magnitude > tau)) return 0.0;  // strict gate: |u| == tau is zeroed
    const double value = defining_function(rule, magnitude, tau);
    return u < 0.0 ? -value : value;
}

} // namespace detail

ThresholdRule parse_rule(const std::string& text) {
    if (text == "hard") return {RuleKind::Hard, 3.7};
    if (text == "half") return {RuleKind::Half, 3.7};
    if (text == "twothirds") return {RuleKind::TwoThirds, 3.7};
    if (text == "soft") return {RuleKind::Soft, 3.7};
    if (text == "scad") return {RuleKind::Scad, 3.7};
    const std::string prefix = "scad:a=";
    if (text.rfind(prefix, 0) == 0) {
        const std::string value = text.substr(prefix.size());
        char* end = nullptr;
        const double a = std::strtod(value.c_str(), &end);
        if (value.empty() || end != value.c_str() + value.size())
            fail(ErrorCode::InvalidRule, "cannot parse scad parameter in '" + text + "'");
        ThresholdRule rule{RuleKind::Scad, a};
        validate_rule(rule);
        return rule;
    }
    fail(ErrorCode::InvalidRule,
         "unknown rule '" + text + "' (expected hard, half, twothirds, soft, scad[:a=...])");
}

std::string rule_name(const ThresholdRule& rule) {
    validate_rule(rule);
    switch (rule.kind) {
        case RuleKind::Hard:
            return "hard";
        case RuleKind::Half:
            return "half";
        case RuleKind::TwoThirds:
            return "twothirds";
        case RuleKind::Soft:
            return "soft";
        case RuleKind::Scad: {
            char digits[40];
            // Shortest representation that round-trips through parse_rule.
            const auto end =
                std::to_chars(digits, digits + sizeof digits, rule.scad_a).ptr;
            return "scad:a=" + std::string(digits, end);
        }
    }
    fail(ErrorCode::InvalidRule, "unknown thresholding rule");
}

double boundedness_constant(const ThresholdRule& rule) {
    validate_rule(rule);
    switch (rule.kind) {
        case RuleKind::Hard:
            return 0.0;
        case RuleKind::Half:
            return 1.0 / 3.0;
        case RuleKind::TwoThirds:
            return 0.5;
        case RuleKind::Soft:
        case RuleKind::Scad:
            return 1.0;
    }
    fail(ErrorCode::InvalidRule, "unknown thresholding rule");
}

double apply_scalar(const ThresholdRule& rule, double u, double tau) {
    validate_rule(rule);
    if (!std::isfinite(u)) fail(ErrorCode::NonFinite, "input to thresholding is not finite");
    if (!(tau > 0.0) || !std::isfinite(tau))
        fail(ErrorCode::NonpositiveThreshold,
             "threshold must be finite and positive (got " + std::to_string(tau) + ")");
    return detail::threshold_component(rule, u, tau);
}

Vector apply_vector(const ThresholdRule& rule, const Vector& z, double tau) {
    validate_rule(rule);
    if (!z.allFinite()) fail(ErrorCode::NonFinite, "input to thresholding is not finite");
    if (!(tau > 0.0) || !std::isfinite(tau))
        fail(ErrorCode::NonpositiveThreshold,
             "threshold must be finite and positive (got " + std::to_string(tau) + ")");
    Vector out(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i)
        out[i] = detail::threshold_component(rule, z[i], tau);
    return out;
}

} // namespace ait
