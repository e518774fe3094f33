#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "sbp/error.hpp"
#include "sbp/io.hpp"

using namespace sbp;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
    const fs::path d = fs::temp_directory_path() / "sbpgen_io_test";
    fs::create_directories(d);
    return d;
}

bool sparse_equal(const SparseRowMatrix& a, const SparseRowMatrix& b) {
    return Eigen::MatrixXd(a) == Eigen::MatrixXd(b);
}

}  // namespace

TEST_CASE("reals survive text exactly") {
    for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.64701892}) CHECK(parse_real(format_real(x)) == x);
    CHECK_THROWS_AS(parse_real("1.5x"), SbpError);
    CHECK_THROWS_AS(parse_real("abc"), SbpError);
}

TEST_CASE("operator set round trip is bit exact") {
    const OperatorSet set = assemble_scheme(SchemeParams{3, {0.55, 0.95}, {0.3, -0.1, 0.7, 0.2}, {}}, 40);
    const fs::path path = scratch_dir() / "ops.json";
    write_json(path, operator_set_to_json(set));
    const OperatorSet back = operator_set_from_json(read_json(path));
    CHECK(back.grid.nodes == set.grid.nodes);
    CHECK(back.grid.h == set.grid.h);
    CHECK(back.H == set.H);
    CHECK(sparse_equal(back.Dplus, set.Dplus));
    CHECK(sparse_equal(back.Dminus, set.Dminus));
    CHECK(back.scheme.c == set.scheme.c);
    CHECK(back.scheme.h_params == set.scheme.h_params);
    CHECK(back.scheme.mu == set.scheme.mu);
}

TEST_CASE("grid round trip") {
    const Grid g = build_grid({2, 30, {0.7}}, GridMode::UnitInteriorSpacing);
    const Grid back = grid_from_json(grid_to_json(g));
    CHECK(back.mode == g.mode);
    CHECK(back.nodes == g.nodes);
}

TEST_CASE("malformed operator files are rejected") {
    const OperatorSet set = assemble_scheme(SchemeParams{2, {}, {0.0}, {}}, 20);
    Json j = operator_set_to_json(set);
    j["H"].erase(0);
    CHECK_THROWS_AS(operator_set_from_json(j), SbpError);
    Json k = operator_set_to_json(set);
    k["dplus_rows"][0]["cols"][0] = 999;
    CHECK_THROWS_AS(operator_set_from_json(k), SbpError);
    CHECK_THROWS_AS(read_json(scratch_dir() / "missing.json"), SbpError);
}

TEST_CASE("csv writer and manifest") {
    const fs::path csv = scratch_dir() / "t.csv";
    CsvWriter w(csv, {"a", "b"});
    w.cell(1).cell(0.5).end_row();
    w.close();
    std::ifstream in(csv);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == "a,b\n1,0.5\n");

    RunManifest m("test", {{"x", 1}});
    m.add_output(csv);
    const Json j = m.write(scratch_dir() / "m.json");
    CHECK(j["outputs"][0]["sha256"] == sha256_file(csv));
    CHECK(j["outputs"][0]["sha256"].get<std::string>().size() == 64);
    CHECK(j["version"] == tool_version());
}

TEST_CASE("sha256 of a known string") {
    const fs::path f = scratch_dir() / "abc.txt";
    std::ofstream(f, std::ios::binary) << "abc";
    CHECK(sha256_file(f) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
