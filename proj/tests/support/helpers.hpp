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

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "ait/problem.hpp"

namespace testing_support {

// Sylvester-type {-1, +1} orthogonal design; m must be a power of two.
// Entry (i, j) is (-1)^popcount(i & j).
inline ait::Matrix sylvester_design(int m) {
    ait::Matrix h(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            h(i, j) = (std::popcount(static_cast<unsigned>(i & j)) % 2 == 0) ? 1.0 : -1.0;
    return h;
}

// Two-ortho-basis dictionary [I | H/sqrt(m)], size m x 2m. Its coherence is
// exactly 1/sqrt(m), so convergence hypotheses genuinely hold at moderate
// sparsity levels, unlike random designs of the same size.
inline ait::Matrix union_basis(int m) {
    ait::Matrix a(m, 2 * m);
    a.leftCols(m) = ait::Matrix::Identity(m, m);
    a.rightCols(m) = sylvester_design(m) / std::sqrt(static_cast<double>(m));
    return a;
}

// Planted-truth instance on the union-basis dictionary.
inline ait::ProblemInstance union_instance(int m, int sparsity, double dynamic_range,
                                           std::uint64_t seed) {
    return ait::instance_from_matrix(union_basis(m), sparsity, dynamic_range,
                                     ait::SignRule::Random, seed);
}

inline std::vector<int> sorted(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return v;
}

// Reproducible scratch directory under the system temp root.
inline std::string scratch_dir(const std::string& tag) {
    const auto path = std::filesystem::temp_directory_path() /
                      ("ait_test_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
    return path.string();
}

} // namespace testing_support
