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

#include "ait/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "ait/error.hpp"

namespace ait {

namespace {

// Deterministic sampler on top of std::mt19937_64. The raw engine is
// bit-stable across standard libraries, and the transforms below are spelled
// out (rather than using std::*_distribution) because the standard leaves
// distribution algorithms unspecified — bit-identical instances across
// toolchains are part of the generation contract.
class Sampler {
  public:
    explicit Sampler(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Standard normal via the Box-Muller transform; generates pairs.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 == 0.0) u1 = uniform();  // log(0) guard
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    // Uniform integer in [0, n) by rejection, bias-free.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v = engine_();
        while (v >= limit) v = engine_();
        return v % n;
    }

  private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Columns already within this distance of unit norm are passed through
// unchanged, which makes normalization exactly idempotent: renormalizing a
// normalized matrix finds every norm within a few ulps of 1 and leaves the
// entries and scales bit-identical.
constexpr double kUnitNormSnap = 1e-13;

void plant_truth(ProblemInstance& instance, int sparsity, double dynamic_range,
                 SignRule signs, Sampler& sampler) {
    const int cols = static_cast<int>(instance.matrix.cols());

    // Uniform support without replacement: partial Fisher-Yates shuffle.
    std::vector<int> indices(static_cast<std::size_t>(cols));
    std::iota(indices.begin(), indices.end(), 0);
    for (int i = 0; i < sparsity; ++i) {
        const int j = i + static_cast<int>(sampler.below(static_cast<std::uint64_t>(cols - i)));
        std::swap(indices[static_cast<std::size_t>(i)], indices[static_cast<std::size_t>(j)]);
    }

    // Log-uniformly spaced magnitudes spanning [1, Dr], largest first, so
    // every adjacent ratio equals Dr^(1/(k*-1)).
    Vector signal = Vector::Zero(cols);
    for (int i = 0; i < sparsity; ++i) {
        double magnitude = 1.0;
        if (sparsity > 1) {
            const double exponent =
                static_cast<double>(sparsity - 1 - i) / static_cast<double>(sparsity - 1);
            magnitude = std::pow(dynamic_range, exponent);
        }
        double sign = 1.0;
        if (signs == SignRule::Random) sign = sampler.below(2) == 0 ? 1.0 : -1.0;
        signal[indices[static_cast<std::size_t>(i)]] = sign * magnitude;
    }

    instance.truth = make_truth(signal);
    instance.observation = instance.matrix.entries * signal;
}

} // namespace

SensingMatrix normalize_columns(const Matrix& raw) {
    const Eigen::Index rows = raw.rows();
    const Eigen::Index cols = raw.cols();
    if (rows < 1 || cols < 1) fail(ErrorCode::InvalidShape, "matrix must be nonempty");
    if (rows >= cols)
        fail(ErrorCode::NotUnderdetermined,
             "matrix must have fewer rows than columns (got " + std::to_string(rows) + "x" +
                 std::to_string(cols) + ")");
    if (!raw.allFinite()) fail(ErrorCode::NonFinite, "matrix has NaN or infinite entries");

    SensingMatrix result;
    result.entries = raw;
    result.column_scales = Vector::Ones(cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        const double norm = raw.col(j).norm();
        if (norm < 1e-14)
            fail(ErrorCode::ZeroColumn, "column " + std::to_string(j) + " has zero norm");
        if (std::abs(norm - 1.0) > kUnitNormSnap) {
            result.entries.col(j) /= norm;
            result.column_scales[j] = norm;
        }
    }
    return result;
}

CoherenceReport coherence(const SensingMatrix& matrix) {
    const Eigen::Index cols = matrix.cols();
    if (cols < 2) fail(ErrorCode::InvalidShape, "coherence needs at least two columns");

    const Matrix gram = matrix.entries.transpose() * matrix.entries;
    CoherenceReport report;
    report.welch_lower_bound =
        welch_bound(static_cast<int>(matrix.rows()), static_cast<int>(cols));
    for (Eigen::Index i = 0; i + 1 < cols; ++i) {
        for (Eigen::Index j = i + 1; j < cols; ++j) {
            const double value = std::abs(gram(i, j));
            if (value > report.mu) {
                report.mu = value;
                report.argmax_i = static_cast<int>(i);
                report.argmax_j = static_cast<int>(j);
            }
        }
    }
    return report;
}

double welch_bound(int rows, int cols) {
    if (rows < 1)
        fail(ErrorCode::InvalidShape, "welch bound requires M >= 1 (got M=" +
                                          std::to_string(rows) + ")");
    if (cols <= rows)
        fail(ErrorCode::NotUnderdetermined,
             "welch bound requires M < N (got M=" + std::to_string(rows) +
                 ", N=" + std::to_string(cols) + ")");
    const double m = rows;
    const double n = cols;
    return std::sqrt((n - m) / (m * (n - 1.0)));
}

double dynamic_range_of(const Vector& x, const std::vector<int>& support) {
    if (support.empty()) fail(ErrorCode::EmptySupport, "support is empty");
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (int i : support) {
        if (i < 0 || i >= x.size())
            fail(ErrorCode::InvalidArgument, "support index " + std::to_string(i) +
                                                 " out of range for length " +
                                                 std::to_string(x.size()));
        const double magnitude = std::abs(x[i]);
        if (magnitude == 0.0)
            fail(ErrorCode::ZeroOnSupport, "x is zero at support index " + std::to_string(i));
        lo = std::min(lo, magnitude);
        hi = std::max(hi, magnitude);
    }
    return hi / lo;
}

GroundTruth make_truth(const Vector& signal) {
    GroundTruth truth;
    truth.signal = signal;
    for (Eigen::Index i = 0; i < signal.size(); ++i)
        if (signal[i] != 0.0) truth.support.push_back(static_cast<int>(i));
    std::stable_sort(truth.support.begin(), truth.support.end(), [&](int a, int b) {
        return std::abs(signal[a]) > std::abs(signal[b]);
    });
    truth.sparsity = static_cast<int>(truth.support.size());
    truth.dynamic_range = truth.support.empty() ? 1.0 : dynamic_range_of(signal, truth.support);
    return truth;
}

namespace {

void validate_plant_arguments(int rows, int cols, int sparsity, double dynamic_range) {
    if (rows >= cols)
        fail(ErrorCode::NotUnderdetermined,
             "need M < N (got M=" + std::to_string(rows) + ", N=" + std::to_string(cols) +
                 ")");
    if (!(0 < sparsity && sparsity < rows))
        fail(ErrorCode::InvalidShape,
             "need 0 < k* < M (got k*=" + std::to_string(sparsity) +
                 ", M=" + std::to_string(rows) + ")");
    if (!(dynamic_range >= 1.0) || !std::isfinite(dynamic_range))
        fail(ErrorCode::InvalidArgument, "dynamic range must be a finite value >= 1");
    if (sparsity == 1 && dynamic_range != 1.0)
        fail(ErrorCode::InvalidArgument,
             "a single nonzero cannot span a dynamic range other than 1");
}

} // namespace

ProblemInstance generate_instance(int rows, int cols, int sparsity, double dynamic_range,
                                  SignRule signs, std::uint64_t seed) {
    validate_plant_arguments(rows, cols, sparsity, dynamic_range);

    Sampler sampler(seed);
    Matrix raw(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) raw(i, j) = sampler.normal();

    ProblemInstance instance;
    instance.seed = seed;
    instance.matrix = normalize_columns(raw);
    // The generated system is defined directly in the normalized frame.
    instance.matrix.column_scales = Vector::Ones(cols);
    plant_truth(instance, sparsity, dynamic_range, signs, sampler);
    return instance;
}

ProblemInstance instance_from_matrix(const Matrix& raw, int sparsity, double dynamic_range,
                                     SignRule signs, std::uint64_t seed) {
    const int rows = static_cast<int>(raw.rows());
    const int cols = static_cast<int>(raw.cols());
    validate_plant_arguments(rows, cols, sparsity, dynamic_range);

    Sampler sampler(seed);
    ProblemInstance instance;
    instance.seed = seed;
    instance.matrix = normalize_columns(raw);
    instance.matrix.column_scales = Vector::Ones(cols);
    plant_truth(instance, sparsity, dynamic_range, signs, sampler);
    return instance;
}

} // namespace ait
