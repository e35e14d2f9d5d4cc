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

#include "ait/problem.hpp"

namespace ait {

// Result of an exhaustive or greedy sparse solve. x is in the normalized
// frame of the supplied matrix; residual_norm = ||A x - y||_2 against it.
struct OracleResult {
    Vector x;
    std::vector<int> support;  // ascending
    double residual_norm = 0.0;
    long enumerated_supports = 0;
};

// Enumerates supports of size 1..k_max in increasing size, lexicographic
// within a size, solving the least-squares restriction for each; returns the
// first support whose residual is at most 1e-9 * ||y||_2. Guarded by
// C(N, k_max) <= 1e6 (TooLarge) and 1 <= k_max <= M (InvalidK); NoSolution if
// the enumeration exhausts. y = 0 short-circuits to the empty support.
OracleResult brute_force_sparsest(const SensingMatrix& matrix, const Vector& y, int k_max);

// Greedy baseline: k_star rounds of max-|A^T r| column selection (smallest
// index on exact ties), full least-squares refit on the selected columns, and
// residual update. SingularRefit if a refit is rank-deficient.
OracleResult omp_baseline(const SensingMatrix& matrix, const Vector& y, int k_star);

} // namespace ait
