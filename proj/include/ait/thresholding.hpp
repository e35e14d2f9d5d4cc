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

#include <string>

#include "ait/problem.hpp"

namespace ait {

enum class RuleKind { Hard, Half, TwoThirds, Soft, Scad };

// A scalar thresholding rule: zero at or below the threshold (strict gate
// |u| > tau), a rule-specific defining function above it. scad_a is only
// meaningful for Scad and must be > 2.
struct ThresholdRule {
    RuleKind kind = RuleKind::Hard;
    double scad_a = 3.7;
};

// Parses "hard", "half", "twothirds", "soft", "scad", or "scad:a=<value>".
ThresholdRule parse_rule(const std::string& text);

// Canonical textual form ("scad:a=3.7" style for Scad).
std::string rule_name(const ThresholdRule& rule);

// Smallest c with u - c*tau <= f_tau(u) <= u for all u >= tau:
// Hard 0, Half 1/3, TwoThirds 1/2, Soft 1, Scad 1.
double boundedness_constant(const ThresholdRule& rule);

// h_tau(u): 0 when |u| <= tau, else the defining function. Odd in u exactly
// (computed as sign(u) * f(|u|)). Requires tau > 0 and finite u.
double apply_scalar(const ThresholdRule& rule, double u, double tau);

// Componentwise apply_scalar.
Vector apply_vector(const ThresholdRule& rule, const Vector& z, double tau);

namespace detail {

// Engine kernel: same map but additionally accepts tau == 0, where the strict
// gate keeps every nonzero component and each defining function degenerates to
// the identity. The solver reaches tau == 0 whenever the Landweber point has
// at most k nonzero components (e.g. y = 0).
double threshold_component(const ThresholdRule& rule, double u, double tau);

} // namespace detail

} // namespace ait
