#include "sbp/io.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <memory>

#include <openssl/evp.h>

#include "sbp/error.hpp"

namespace sbp {
namespace {

Json reals(const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(format_real(x));
    return a;
}

std::vector<double> reals_from(const Json& a) {
    std::vector<double> out;
    for (const auto& x : a) out.push_back(x.is_string() ? parse_real(x.get<std::string>()) : x.get<double>());
    return out;
}

Json sparse_rows(const SparseRowMatrix& m) {
    Json rows = Json::array();
    for (int r = 0; r < m.outerSize(); ++r) {
        Json cols = Json::array(), vals = Json::array();
        for (SparseRowMatrix::InnerIterator it(m, r); it; ++it) {
            cols.push_back(it.col());
            vals.push_back(format_real(it.value()));
        }
        rows.push_back({{"row", r}, {"cols", cols}, {"vals", vals}});
    }
    return rows;
}

SparseRowMatrix sparse_from(const Json& rows, int n) {
    std::vector<Eigen::Triplet<double>> t;
    for (const auto& row : rows) {
        const int r = row.at("row").get<int>();
        const auto& cols = row.at("cols");
        const auto& vals = row.at("vals");
        if (cols.size() != vals.size() || r < 0 || r >= n) {
            throw SbpError(ErrorCode::Io, "malformed operator row " + std::to_string(r));
        }
        for (std::size_t k = 0; k < cols.size(); ++k) {
            const int c = cols[k].get<int>();
            if (c < 0 || c >= n) throw SbpError(ErrorCode::Io, "column index out of range in row " + std::to_string(r));
            t.emplace_back(r, c, parse_real(vals[k].get<std::string>()));
        }
    }
    SparseRowMatrix m(n, n);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

const char* mode_name(GridMode m) { return m == GridMode::ScaledToUnitInterval ? "scaled" : "unit"; }

GridMode mode_from(const std::string& s) {
    if (s == "scaled") return GridMode::ScaledToUnitInterval;
    if (s == "unit") return GridMode::UnitInteriorSpacing;
    throw SbpError(ErrorCode::Io, "unknown grid mode '" + s + "'");
}

}  // namespace

std::string format_real(double v) {
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", v);
    return buf.data();
}

double parse_real(const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw SbpError(ErrorCode::Io, "not a number: '" + text + "'");
    }
    if (used != text.size()) throw SbpError(ErrorCode::Io, "trailing characters in number '" + text + "'");
    return v;
}

Json grid_to_json(const Grid& grid) {
    return {{"p", grid.p()},
            {"K", grid.spec.K()},
            {"N", grid.N()},
            {"mode", mode_name(grid.mode)},
            {"spacings", reals(grid.spec.boundary_spacings)},
            {"h", format_real(grid.h)},
            {"nodes", reals(grid.nodes)}};
}

Grid grid_from_json(const Json& j) {
    try {
        GridSpec spec{j.at("p").get<int>(), j.at("N").get<int>(), reals_from(j.at("spacings"))};
        Grid g = build_grid(spec, mode_from(j.at("mode").get<std::string>()));
        if (j.contains("nodes")) {
            const auto stored = reals_from(j.at("nodes"));
            if (stored.size() != g.nodes.size()) throw SbpError(ErrorCode::Io, "node count does not match N");
            g.nodes = stored;
        }
        return g;
    } catch (const nlohmann::json::exception& e) {
        throw SbpError(ErrorCode::Io, std::string("grid JSON: ") + e.what());
    }
}

Json operator_set_to_json(const OperatorSet& set) {
    return {{"p", set.p()},
            {"order", 2 * set.p()},
            {"K", set.scheme.K()},
            {"N", set.grid.N()},
            {"h_params", reals(set.scheme.h_params)},
            {"mu", reals(set.scheme.mu)},
            {"c", reals(set.scheme.c)},
            {"grid", grid_to_json(set.grid)},
            {"H", reals(std::vector<double>(set.H.data(), set.H.data() + set.H.size()))},
            {"dplus_rows", sparse_rows(set.Dplus)},
            {"dminus_rows", sparse_rows(set.Dminus)}};
}

SchemeParams scheme_from_json(const Json& j) {
    try {
        SchemeParams s;
        s.p = j.at("p").get<int>();
        s.h_params = reals_from(j.at("h_params"));
        if (j.contains("mu")) s.mu = reals_from(j.at("mu"));
        if (j.contains("c")) s.c = reals_from(j.at("c"));
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw SbpError(ErrorCode::Io, std::string("scheme JSON: ") + e.what());
    }
}

OperatorSet operator_set_from_json(const Json& j) {
    try {
        OperatorSet set;
        set.scheme = scheme_from_json(j);
        set.grid = grid_from_json(j.at("grid"));
        const int n = set.grid.N() + 1;
        const auto h = reals_from(j.at("H"));
        if (static_cast<int>(h.size()) != n) throw SbpError(ErrorCode::Io, "H has wrong length");
        set.H = Eigen::Map<const Eigen::VectorXd>(h.data(), n);
        set.Dplus = sparse_from(j.at("dplus_rows"), n);
        set.Dminus = sparse_from(j.at("dminus_rows"), n);
        const int m = 2 * set.p();
        set.dl_plus = Eigen::MatrixXd(set.Dplus.topLeftCorner(m, m)) * set.grid.h;
        return set;
    } catch (const nlohmann::json::exception& e) {
        throw SbpError(ErrorCode::Io, std::string("operator JSON: ") + e.what());
    }
}

void write_json(const std::filesystem::path& path, const Json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SbpError(ErrorCode::Io, "cannot write " + path.string());
    out << j.dump(2) << '\n';
}

Json read_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SbpError(ErrorCode::Io, "cannot read " + path.string());
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw SbpError(ErrorCode::Io, path.string() + ": " + e.what());
    }
}

CsvWriter::CsvWriter(std::filesystem::path path, const std::vector<std::string>& header) : path_(std::move(path)) {
    for (const auto& h : header) cell(h);
    end_row();
}

CsvWriter& CsvWriter::cell(const std::string& v) {
    if (row_open_) buffer_ += ',';
    buffer_ += v;
    row_open_ = true;
    return *this;
}

CsvWriter& CsvWriter::cell(double v) { return cell(format_real(v)); }
CsvWriter& CsvWriter::cell(int v) { return cell(std::to_string(v)); }

void CsvWriter::end_row() {
    buffer_ += '\n';
    row_open_ = false;
}

void CsvWriter::close() {
    std::ofstream out(path_, std::ios::binary);
    if (!out) throw SbpError(ErrorCode::Io, "cannot write " + path_.string());
    out << buffer_;
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SbpError(ErrorCode::Io, "cannot read " + path.string());
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
        throw SbpError(ErrorCode::Io, "SHA-256 unavailable");
    }
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

RunManifest::RunManifest(std::string command, Json parameters)
    : command_(std::move(command)), parameters_(std::move(parameters)), start_(std::chrono::steady_clock::now()) {}

void RunManifest::add_input(const std::filesystem::path& path) { inputs_.push_back(path); }
void RunManifest::add_output(const std::filesystem::path& path) { outputs_.push_back(path); }

Json RunManifest::write(const std::filesystem::path& path) const {
    auto files = [](const std::vector<std::filesystem::path>& list) {
        Json a = Json::array();
        for (const auto& f : list) a.push_back({{"path", f.string()}, {"sha256", sha256_file(f)}});
        return a;
    };
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    const Json j{{"command", command_},      {"parameters", parameters_}, {"version", tool_version()},
                 {"inputs", files(inputs_)}, {"outputs", files(outputs_)}, {"wall_seconds", seconds}};
    write_json(path, j);
    return j;
}

const char* tool_version() { return "1.0.0"; }

}  // namespace sbp
