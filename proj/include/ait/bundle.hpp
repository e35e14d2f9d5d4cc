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

#include "ait/engine.hpp"
#include "ait/problem.hpp"

namespace ait {

// Matrix CSV: one row per line, comma-separated, printf %.17g (lossless for
// doubles). Vector CSV: one value per line.
void write_matrix_csv(const std::string& path, const Matrix& matrix);
Matrix read_matrix_csv(const std::string& path);
void write_vector_csv(const std::string& path, const Vector& vector);
Vector read_vector_csv(const std::string& path);

// An instance bundle is a directory holding A.csv (the matrix in original,
// pre-normalization coordinates), y.csv, optional xstar.csv, and meta.json
// with {"schema":1, "M", "N", "seed"} plus "k_star"/"dynamic_range" when truth
// is present. save/load round-trip bit-exactly.
void save_instance(const ProblemInstance& instance, const std::string& directory);
ProblemInstance load_instance(const std::string& directory);

// Trace CSV: header "t,tau,support,linf_err"; support is semicolon-joined
// ascending indices (empty cell for the empty support), linf_err empty when
// no truth is known.
void write_trace_csv(const std::string& path, const RecoveryResult& result);
std::vector<TraceSample> read_trace_csv(const std::string& path);

} // namespace ait
