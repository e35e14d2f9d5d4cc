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

#include "ait/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "ait/error.hpp"

namespace ait {

namespace {

constexpr double kEnumerationGuard = 1e6;
constexpr double kResidualTolerance = 1e-9;  // relative to ||y||_2

double binomial(int n, int k) {
    double result = 1.0;
    for (int i = 1; i <= k; ++i) result *= static_cast<double>(n - k + i) / static_cast<double>(i);
    return result;
}

// Least-squares fit of y on the given columns via a rank-revealing QR.
// Returns the coefficient vector in selection order; rank through *rank.
Vector restricted_least_squares(const SensingMatrix& matrix, const Vector& y,
                                const std::vector<int>& columns, Eigen::Index* rank) {
    Matrix block(matrix.rows(), static_cast<Eigen::Index>(columns.size()));
    for (std::size_t j = 0; j < columns.size(); ++j)
        block.col(static_cast<Eigen::Index>(j)) = matrix.entries.col(columns[j]);
    Eigen::ColPivHouseholderQR<Matrix> qr(block);
    if (rank != nullptr) *rank = qr.rank();
    return qr.solve(y);
}

// Advances `combo` to the next size-k combination of {0..n-1} in lexicographic
// order; false when exhausted.
bool next_combination(std::vector<int>& combo, int n) {
    const int k = static_cast<int>(combo.size());
    for (int i = k - 1; i >= 0; --i) {
        if (combo[static_cast<std::size_t>(i)] < n - k + i) {
            ++combo[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < k; ++j)
                combo[static_cast<std::size_t>(j)] = combo[static_cast<std::size_t>(j - 1)] + 1;
            return true;
        }
    }
    return false;
}

} // namespace

OracleResult brute_force_sparsest(const SensingMatrix& matrix, const Vector& y, int k_max) {
    const int n = static_cast<int>(matrix.cols());
    const int m = static_cast<int>(matrix.rows());
    if (y.size() != matrix.rows())
        fail(ErrorCode::DimensionMismatch, "observation length does not match matrix rows");
    if (k_max < 1 || k_max > m)
        fail(ErrorCode::InvalidK, "need 1 <= k_max <= M (got k_max = " + std::to_string(k_max) +
                                      ", M = " + std::to_string(m) + ")");
    if (binomial(n, k_max) > kEnumerationGuard)
        fail(ErrorCode::TooLarge, "C(" + std::to_string(n) + ", " + std::to_string(k_max) +
                                      ") exceeds the enumeration guard of 1e6 supports");

    OracleResult result;
    result.x = Vector::Zero(n);
    const double y_norm = y.norm();
    if (y_norm == 0.0) return result;  // zero observation: empty support, zero solution

    for (int size = 1; size <= k_max; ++size) {
        std::vector<int> combo(static_cast<std::size_t>(size));
        for (int i = 0; i < size; ++i) combo[static_cast<std::size_t>(i)] = i;
        do {
            ++result.enumerated_supports;
            Vector coefficients = restricted_least_squares(matrix, y, combo, nullptr);
            Vector residual = y;
            for (std::size_t j = 0; j < combo.size(); ++j)
                residual -= coefficients[static_cast<Eigen::Index>(j)] *
                            matrix.entries.col(combo[j]);
            if (residual.norm() <= kResidualTolerance * y_norm) {
                result.support = combo;
                for (std::size_t j = 0; j < combo.size(); ++j)
                    result.x[combo[j]] = coefficients[static_cast<Eigen::Index>(j)];
                result.residual_norm = residual.norm();
                return result;
            }
        } while (next_combination(combo, n));
    }
    fail(ErrorCode::NoSolution, "no support of size <= " + std::to_string(k_max) +
                                    " represents the observation within tolerance");
}

OracleResult omp_baseline(const SensingMatrix& matrix, const Vector& y, int k_star) {
    const int m = static_cast<int>(matrix.rows());
    if (y.size() != matrix.rows())
        fail(ErrorCode::DimensionMismatch, "observation length does not match matrix rows");
    if (k_star < 1 || k_star >= m)
        fail(ErrorCode::InvalidK, "need 1 <= k* < M (got k* = " + std::to_string(k_star) +
                                      ", M = " + std::to_string(m) + ")");

    OracleResult result;
    result.x = Vector::Zero(matrix.cols());
    std::vector<int> selected;
    std::vector<char> in_support(static_cast<std::size_t>(matrix.cols()), 0);
    Vector residual = y;
    Vector coefficients;

    for (int round = 0; round < k_star; ++round) {
        const Vector correlations = matrix.entries.transpose() * residual;
        int best = -1;
        double best_value = -1.0;
        for (Eigen::Index i = 0; i < correlations.size(); ++i) {
            if (in_support[static_cast<std::size_t>(i)]) continue;
            const double value = std::abs(correlations[i]);
            if (value > best_value) {  // strict: ties keep the smallest index
                best_value = value;
                best = static_cast<int>(i);
            }
        }
        selected.push_back(best);
        in_support[static_cast<std::size_t>(best)] = 1;

        Eigen::Index rank = 0;
        coefficients = restricted_least_squares(matrix, y, selected, &rank);
        if (rank < static_cast<Eigen::Index>(selected.size()))
            fail(ErrorCode::SingularRefit,
                 "restricted least-squares system is rank-deficient after selecting column " +
                     std::to_string(best));
        residual = y;
        for (std::size_t j = 0; j < selected.size(); ++j)
            residual -=
                coefficients[static_cast<Eigen::Index>(j)] * matrix.entries.col(selected[j]);
        ++result.enumerated_supports;
    }

    for (std::size_t j = 0; j < selected.size(); ++j)
        result.x[selected[j]] = coefficients[static_cast<Eigen::Index>(j)];
    result.support = selected;
    std::sort(result.support.begin(), result.support.end());
    result.residual_norm = residual.norm();
    return result;
}

} // namespace ait
