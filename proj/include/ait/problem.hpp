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

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "ait/error.hpp"

namespace ait {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Column-normalized sensing matrix of an underdetermined system (M < N).
// `column_scales[j]` holds the original l2 norm of column j so solutions can be
// mapped back to the caller's coordinates: x_original[j] = x_normalized[j] / scale[j].
struct SensingMatrix {
    Matrix entries;        // M x N, unit-l2 columns
    Vector column_scales;  // length N, all > 0

    Eigen::Index rows() const { return entries.rows(); }
    Eigen::Index cols() const { return entries.cols(); }
};

// Known sparse solution of an instance. `support` is ordered by descending
// |signal| (ties by ascending index), so support[0] is the largest component.
struct GroundTruth {
    Vector signal;             // length N, exactly zero off support
    std::vector<int> support;  // size k_star
    int sparsity = 0;          // k_star
    double dynamic_range = 1.0;
};

struct ProblemInstance {
    SensingMatrix matrix;
    Vector observation;  // y, length M
    std::optional<GroundTruth> truth;
    std::uint64_t seed = 0;
};

struct CoherenceReport {
    double mu = 0.0;
    int argmax_i = -1;  // lexicographically smallest attaining pair, i < j
    int argmax_j = -1;
    double welch_lower_bound = 0.0;
};

enum class SignRule { Random, Positive };

// Scales each column of `raw` to unit l2 norm and records the original norms.
// Columns whose norm is already within 1e-13 of 1 are passed through unchanged
// (scale exactly 1), which makes the operation exactly idempotent.
SensingMatrix normalize_columns(const Matrix& raw);

// Maximum absolute off-diagonal entry of the Gram matrix, with the first
// attaining pair in lexicographic order and the Welch lower bound.
CoherenceReport coherence(const SensingMatrix& matrix);

// sqrt((N - M) / (M (N - 1))): universal coherence lower bound for M < N.
double welch_bound(int rows, int cols);

// max |x_i| / min |x_i| over i in support.
double dynamic_range_of(const Vector& x, const std::vector<int>& support);

// Builds a GroundTruth from a vector: support = nonzero entries ordered by
// descending magnitude (ties by ascending index).
GroundTruth make_truth(const Vector& signal);

// Draws a Gaussian matrix (normalized), a uniformly random size-k_star support,
// log-uniformly spaced magnitudes spanning [1, dynamic_range] (largest first),
// signs per `signs`, and y = A x*. Pure function of the arguments.
ProblemInstance generate_instance(int rows, int cols, int sparsity, double dynamic_range,
                                  SignRule signs, std::uint64_t seed);

// Same planted-truth construction against a caller-provided matrix. The matrix
// is normalized first and the normalized system becomes the system of record
// (column_scales reset to 1), so the planted magnitudes are exact in the frame
// the solver and the verification checks operate in.
ProblemInstance instance_from_matrix(const Matrix& raw, int sparsity, double dynamic_range,
                                     SignRule signs, std::uint64_t seed);

} // namespace ait
