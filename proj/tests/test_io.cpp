#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "cpg/io.hpp"
#include "cpg/rng.hpp"
#include "doctest.h"

using cpg::Mat;
using cpg::RngStream;
using cpg::Vec;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

struct FileGuard {
    std::string path;
    explicit FileGuard(std::string p) : path(std::move(p)) {}
    ~FileGuard() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("matrix CSV round trip is exact") {
    RngStream rng(3);
    Mat m(7, 4);
    for (int j = 0; j < 4; ++j) {
        for (int i = 0; i < 7; ++i) m(i, j) = rng.normal() * std::pow(10.0, (j - 2) * 3);
    }
    m(0, 0) = 0.1;
    m(1, 1) = -1.0 / 3.0;
    const std::string path = temp_path("cpg_io_mat.csv");
    FileGuard guard(path);
    cpg::write_csv(path, m);
    const Mat back = cpg::read_csv(path);
    REQUIRE(back.rows() == 7);
    REQUIRE(back.cols() == 4);
    CHECK((back - m).cwiseAbs().maxCoeff() == 0.0);  // %.17g round trips doubles
}

TEST_CASE("scores round trip") {
    Vec v(5);
    v << 0.1, -2.5, 1e-17, 3.0, 0.9999999999999999;
    const std::string path = temp_path("cpg_io_scores.txt");
    FileGuard guard(path);
    cpg::write_scores(path, v);
    const Vec back = cpg::read_scores(path);
    REQUIRE(back.size() == 5);
    CHECK((back - v).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("edge list round trip for a sparse symmetric matrix") {
    Mat m = Mat::Zero(6, 6);
    m(0, 1) = m(1, 0) = -0.75;
    m(2, 5) = m(5, 2) = 1.25;
    m(3, 3) = 2.0;
    const std::string path = temp_path("cpg_io_edges.txt");
    FileGuard guard(path);
    cpg::write_edge_list(path, m);
    const Mat back = cpg::read_edge_list(path, 6);
    CHECK((back - m).cwiseAbs().maxCoeff() == 0.0);

    // the format is 0-based "i j weight"
    std::ifstream f(path);
    std::string first;
    std::getline(f, first);
    CHECK(first == "0 1 -0.75");
}

TEST_CASE("json round trip") {
    cpg::Json j;
    j["table"] = "t2";
    j["seeds"] = 3;
    j["mean"] = 0.987654321;
    const std::string path = temp_path("cpg_io_rep.json");
    FileGuard guard(path);
    cpg::write_json_file(path, j);
    const cpg::Json back = cpg::read_json_file(path);
    CHECK(back["table"] == "t2");
    CHECK(back["seeds"] == 3);
    CHECK(back["mean"] == 0.987654321);
}

TEST_CASE("format_real uses maximal precision") {
    CHECK(cpg::format_real(0.1) == "0.10000000000000001");
    CHECK(cpg::format_real(1.0) == "1");
    CHECK(cpg::format_real(-2.5) == "-2.5");
}

TEST_CASE("parse failures are reported as validation errors") {
    const std::string path = temp_path("cpg_io_bad.csv");
    FileGuard guard(path);
    {
        std::ofstream f(path);
        f << "1,2,3\n4,5\n";
    }
    CHECK_THROWS_WITH_AS(cpg::read_csv(path), doctest::Contains("ragged"),
                         cpg::ValidationError);
    {
        std::ofstream f(path);
        f << "1,abc\n";
    }
    CHECK_THROWS_WITH_AS(cpg::read_csv(path), doctest::Contains("ParseError"),
                         cpg::ValidationError);
    CHECK_THROWS_WITH_AS(cpg::read_csv("/nonexistent/cpg_nope.csv"),
                         doctest::Contains("CannotOpen"), cpg::ValidationError);
    {
        std::ofstream f(path);
        f << "0 9 1.5\n";  // index out of range for n=3
    }
    CHECK_THROWS_AS(cpg::read_edge_list(path, 3), cpg::ValidationError);
}
