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

#include <stdexcept>
#include <string>

namespace ait {

// Every recoverable failure in the library carries one of these codes.
// The C API maps them one-to-one onto ait_status values.
enum class ErrorCode {
    InvalidArgument,
    InvalidShape,
    NotUnderdetermined,
    ZeroColumn,
    DimensionMismatch,
    NonFinite,
    NonpositiveThreshold,
    InvalidRule,
    InvalidScadA,
    InvalidK,
    HypothesisViolated,
    LogDomain,
    EmptySupport,
    ZeroOnSupport,
    TooLarge,
    NoSolution,
    SingularRefit,
    IncompleteTrace,
    IoError,
    ParseError,
};

inline const char* error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "invalid_argument";
        case ErrorCode::InvalidShape: return "invalid_shape";
        case ErrorCode::NotUnderdetermined: return "not_underdetermined";
        case ErrorCode::ZeroColumn: return "zero_column";
        case ErrorCode::DimensionMismatch: return "dimension_mismatch";
        case ErrorCode::NonFinite: return "non_finite";
        case ErrorCode::NonpositiveThreshold: return "nonpositive_threshold";
        case ErrorCode::InvalidRule: return "invalid_rule";
        case ErrorCode::InvalidScadA: return "invalid_scad_a";
        case ErrorCode::InvalidK: return "invalid_k";
        case ErrorCode::HypothesisViolated: return "hypothesis_violated";
        case ErrorCode::LogDomain: return "log_domain";
        case ErrorCode::EmptySupport: return "empty_support";
        case ErrorCode::ZeroOnSupport: return "zero_on_support";
        case ErrorCode::TooLarge: return "too_large";
        case ErrorCode::NoSolution: return "no_solution";
        case ErrorCode::SingularRefit: return "singular_refit";
        case ErrorCode::IncompleteTrace: return "incomplete_trace";
        case ErrorCode::IoError: return "io_error";
        case ErrorCode::ParseError: return "parse_error";
    }
    return "unknown";
}

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace ait
