#include "cpg/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace cpg {
namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw ValidationError("CannotOpen: failed to open for writing: " + path);
    return f;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError("CannotOpen: failed to open for reading: " + path);
    return f;
}

double parse_real(const std::string& tok, const std::string& path) {
    try {
        size_t pos = 0;
        const double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("ParseError: bad numeric field '" + tok + "' in " + path);
    }
}

}  // namespace

std::string format_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_csv(const std::string& path, const Mat& m) {
    auto f = open_out(path);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) f << ',';
            f << format_real(m(i, j));
        }
        f << '\n';
    }
}

Mat read_csv(const std::string& path) {
    auto f = open_in(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) row.push_back(parse_real(tok, path));
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ValidationError("ParseError: ragged CSV rows in " + path);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ValidationError("ParseError: empty CSV file " + path);
    Mat m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (size_t i = 0; i < rows.size(); ++i) {
        for (size_t j = 0; j < rows.front().size(); ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return m;
}

void write_scores(const std::string& path, const Vec& v) {
    auto f = open_out(path);
    for (Eigen::Index i = 0; i < v.size(); ++i) f << format_real(v(i)) << '\n';
}

Vec read_scores(const std::string& path) {
    auto f = open_in(path);
    std::vector<double> vals;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        vals.push_back(parse_real(line, path));
    }
    if (vals.empty()) throw ValidationError("ParseError: empty scores file " + path);
    Vec v(static_cast<Eigen::Index>(vals.size()));
    for (size_t i = 0; i < vals.size(); ++i) v(static_cast<Eigen::Index>(i)) = vals[i];
    return v;
}

void write_edge_list(const std::string& path, const Mat& m) {
    if (m.rows() != m.cols()) throw ValidationError("NotSquare: edge list needs a square matrix");
    auto f = open_out(path);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = i; j < m.cols(); ++j) {
            if (m(i, j) != 0.0) f << i << ' ' << j << ' ' << format_real(m(i, j)) << '\n';
        }
    }
}

Mat read_edge_list(const std::string& path, int n) {
    if (n < 1) throw ValidationError("InvalidSize: edge list node count must be >= 1");
    auto f = open_in(path);
    Mat m = Mat::Zero(n, n);
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        long long i = -1, j = -1;
        std::string wtok;
        if (!(ss >> i >> j >> wtok)) {
            throw ValidationError("ParseError: bad edge line '" + line + "' in " + path);
        }
        if (i < 0 || j < 0 || i >= n || j >= n) {
            throw ValidationError("ParseError: edge index out of range in " + path);
        }
        const double w = parse_real(wtok, path);
        m(i, j) = w;
        m(j, i) = w;
    }
    return m;
}

void write_json_file(const std::string& path, const Json& j) {
    auto f = open_out(path);
    f << j.dump(2) << '\n';
}

Json read_json_file(const std::string& path) {
    auto f = open_in(path);
    Json j;
    try {
        f >> j;
    } catch (const std::exception& e) {
        throw ValidationError(std::string("ParseError: bad JSON in ") + path + ": " + e.what());
    }
    return j;
}

}  // namespace cpg
