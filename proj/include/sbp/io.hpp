#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "sbp/grid.hpp"
#include "sbp/operators.hpp"

namespace sbp {

using Json = nlohmann::ordered_json;

/// 17 significant digits; parse_real reads it back to the identical double.
std::string format_real(double v);
double parse_real(const std::string& text);

Json grid_to_json(const Grid& grid);
Grid grid_from_json(const Json& j);

/// Scheme parameters plus every nonzero of D+ and D- and the diagonal of H,
/// all as 17-digit strings so a load reproduces the matrices bit for bit.
Json operator_set_to_json(const OperatorSet& set);
OperatorSet operator_set_from_json(const Json& j);
SchemeParams scheme_from_json(const Json& j);

void write_json(const std::filesystem::path& path, const Json& j);
Json read_json(const std::filesystem::path& path);

/// Buffers rows and writes the file on close(); reals use format_real.
class CsvWriter {
public:
    CsvWriter(std::filesystem::path path, const std::vector<std::string>& header);
    CsvWriter& cell(const std::string& v);
    CsvWriter& cell(double v);
    CsvWriter& cell(int v);
    void end_row();
    void close();

private:
    std::filesystem::path path_;
    std::string buffer_;
    bool row_open_ = false;
};

/// Lower-case hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Record of one CLI run: command line, parameters, version, digests of the
/// files read and written, and wall-clock time.
class RunManifest {
public:
    RunManifest(std::string command, Json parameters);
    void add_input(const std::filesystem::path& path);
    void add_output(const std::filesystem::path& path);
    /// Writes the manifest (digests are taken now) and returns its JSON.
    Json write(const std::filesystem::path& path) const;

private:
    std::string command_;
    Json parameters_;
    std::vector<std::filesystem::path> inputs_, outputs_;
    std::chrono::steady_clock::time_point start_;
};

const char* tool_version();

}  // namespace sbp
