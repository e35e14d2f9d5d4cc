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

#include "ait/bundle.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ait/error.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace ait {

namespace {

// %.17g round-trips doubles exactly through text.
std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

std::ofstream open_for_write(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::IoError, "cannot open '" + path + "' for writing");
    return out;
}

std::ifstream open_for_read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::IoError, "cannot open '" + path + "' for reading");
    return in;
}

double parse_double(const std::string& text, const std::string& path, int line) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin || end != begin + text.size())
        fail(ErrorCode::ParseError,
             path + ":" + std::to_string(line) + ": cannot parse number '" + text + "'");
    return value;
}

std::vector<std::string> split(const std::string& line, char delimiter) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream stream(line);
    while (std::getline(stream, cell, delimiter)) cells.push_back(cell);
    if (!line.empty() && line.back() == delimiter) cells.push_back("");
    return cells;
}

// Strips one trailing carriage return (tolerates CRLF input).
std::string chomp(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

} // namespace

void write_matrix_csv(const std::string& path, const Matrix& matrix) {
    std::ofstream out = open_for_write(path);
    for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
        for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
            if (j > 0) out << ',';
            out << format_double(matrix(i, j));
        }
        out << '\n';
    }
    if (!out) fail(ErrorCode::IoError, "write to '" + path + "' failed");
}

Matrix read_matrix_csv(const std::string& path) {
    std::ifstream in = open_for_read(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        line = chomp(line);
        if (line.empty()) continue;
        std::vector<double> row;
        for (const std::string& cell : split(line, ','))
            row.push_back(parse_double(cell, path, line_number));
        if (!rows.empty() && row.size() != rows.front().size())
            fail(ErrorCode::ParseError, path + ":" + std::to_string(line_number) +
                                            ": expected " + std::to_string(rows.front().size()) +
                                            " columns, found " + std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) fail(ErrorCode::ParseError, path + ": no rows");
    Matrix matrix(static_cast<Eigen::Index>(rows.size()),
                  static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.front().size(); ++j)
            matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return matrix;
}

void write_vector_csv(const std::string& path, const Vector& vector) {
    std::ofstream out = open_for_write(path);
    for (Eigen::Index i = 0; i < vector.size(); ++i) out << format_double(vector[i]) << '\n';
    if (!out) fail(ErrorCode::IoError, "write to '" + path + "' failed");
}

Vector read_vector_csv(const std::string& path) {
    std::ifstream in = open_for_read(path);
    std::vector<double> values;
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        line = chomp(line);
        if (line.empty()) continue;
        values.push_back(parse_double(line, path, line_number));
    }
    Vector vector(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i)
        vector[static_cast<Eigen::Index>(i)] = values[i];
    return vector;
}

void save_instance(const ProblemInstance& instance, const std::string& directory) {
    std::error_code ec;
    fs::create_directories(directory, ec);
    if (ec) fail(ErrorCode::IoError, "cannot create directory '" + directory + "': " + ec.message());
    const fs::path base(directory);

    // The bundle stores the matrix in the caller's original coordinates.
    Matrix original = instance.matrix.entries;
    for (Eigen::Index j = 0; j < original.cols(); ++j)
        original.col(j) *= instance.matrix.column_scales[j];
    write_matrix_csv((base / "A.csv").string(), original);
    write_vector_csv((base / "y.csv").string(), instance.observation);

    ordered_json meta;
    meta["schema"] = 1;
    meta["M"] = static_cast<int>(instance.matrix.rows());
    meta["N"] = static_cast<int>(instance.matrix.cols());
    meta["seed"] = instance.seed;
    if (instance.truth.has_value()) {
        write_vector_csv((base / "xstar.csv").string(), instance.truth->signal);
        meta["k_star"] = instance.truth->sparsity;
        meta["dynamic_range"] = instance.truth->dynamic_range;
    }
    std::ofstream out = open_for_write((base / "meta.json").string());
    out << meta.dump(2) << '\n';
    if (!out) fail(ErrorCode::IoError, "write to '" + (base / "meta.json").string() + "' failed");
}

ProblemInstance load_instance(const std::string& directory) {
    const fs::path base(directory);
    const std::string meta_path = (base / "meta.json").string();
    std::ifstream meta_in = open_for_read(meta_path);
    ordered_json meta;
    try {
        meta_in >> meta;
    } catch (const std::exception& e) {
        fail(ErrorCode::ParseError, meta_path + ": " + e.what());
    }
    if (!meta.contains("schema") || meta["schema"] != 1)
        fail(ErrorCode::ParseError, meta_path + ": unsupported or missing schema (need 1)");

    ProblemInstance instance;
    Matrix raw = read_matrix_csv((base / "A.csv").string());
    instance.matrix = normalize_columns(raw);
    instance.observation = read_vector_csv((base / "y.csv").string());
    if (instance.observation.size() != instance.matrix.rows())
        fail(ErrorCode::DimensionMismatch,
             "y.csv has " + std::to_string(instance.observation.size()) +
                 " entries but A.csv has " + std::to_string(instance.matrix.rows()) + " rows");
    if (meta.contains("M") && meta["M"].get<int>() != static_cast<int>(instance.matrix.rows()))
        fail(ErrorCode::ParseError, meta_path + ": M does not match A.csv");
    if (meta.contains("N") && meta["N"].get<int>() != static_cast<int>(instance.matrix.cols()))
        fail(ErrorCode::ParseError, meta_path + ": N does not match A.csv");
    if (meta.contains("seed")) instance.seed = meta["seed"].get<std::uint64_t>();

    const fs::path truth_path = base / "xstar.csv";
    if (fs::exists(truth_path)) {
        Vector signal = read_vector_csv(truth_path.string());
        if (signal.size() != instance.matrix.cols())
            fail(ErrorCode::DimensionMismatch,
                 "xstar.csv has " + std::to_string(signal.size()) + " entries but A.csv has " +
                     std::to_string(instance.matrix.cols()) + " columns");
        instance.truth = make_truth(signal);
        // Consistency: the bundle must describe an exact system y = A x*.
        const Vector reproduced =
            instance.matrix.entries *
            signal.cwiseProduct(instance.matrix.column_scales);
        const double gap = (reproduced - instance.observation).cwiseAbs().maxCoeff();
        if (gap > 1e-10)
            fail(ErrorCode::InvalidArgument,
                 "bundle is inconsistent: ||A x* - y||_inf = " + format_double(gap));
    }
    return instance;
}

void write_trace_csv(const std::string& path, const RecoveryResult& result) {
    std::ofstream out = open_for_write(path);
    out << "t,tau,support,linf_err\n";
    for (const IterationRecord& record : result.trace) {
        out << record.t << ',' << format_double(record.tau) << ',';
        for (std::size_t i = 0; i < record.support.size(); ++i) {
            if (i > 0) out << ';';
            out << record.support[i];
        }
        out << ',';
        if (record.linf_error.has_value()) out << format_double(*record.linf_error);
        out << '\n';
    }
    if (!out) fail(ErrorCode::IoError, "write to '" + path + "' failed");
}

std::vector<TraceSample> read_trace_csv(const std::string& path) {
    std::ifstream in = open_for_read(path);
    std::string line;
    if (!std::getline(in, line)) fail(ErrorCode::ParseError, path + ": empty file");
    if (chomp(line) != "t,tau,support,linf_err")
        fail(ErrorCode::ParseError, path + ":1: expected header 't,tau,support,linf_err'");

    std::vector<TraceSample> samples;
    int line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        line = chomp(line);
        if (line.empty()) continue;
        const std::vector<std::string> cells = split(line, ',');
        if (cells.size() != 4)
            fail(ErrorCode::ParseError, path + ":" + std::to_string(line_number) +
                                            ": expected 4 columns, found " +
                                            std::to_string(cells.size()));
        TraceSample sample;
        sample.t = static_cast<int>(parse_double(cells[0], path, line_number));
        sample.tau = parse_double(cells[1], path, line_number);
        if (!cells[2].empty())
            for (const std::string& index : split(cells[2], ';'))
                sample.support.push_back(
                    static_cast<int>(parse_double(index, path, line_number)));
        if (!cells[3].empty()) sample.linf_error = parse_double(cells[3], path, line_number);
        samples.push_back(std::move(sample));
    }
    return samples;
}

} // namespace ait
