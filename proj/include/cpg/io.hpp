#pragma once

#include <string>

#include "json.hpp"

#include "cpg/types.hpp"

namespace cpg {

using Json = nlohmann::ordered_json;

// matrices as CSV: one row per line, comma separated, no header, %.17g
void write_csv(const std::string& path, const Mat& m);
Mat read_csv(const std::string& path);

// one real per line
void write_scores(const std::string& path, const Vec& v);
Vec read_scores(const std::string& path);

// whitespace "i j weight" lines, 0-based, upper triangle incl. diagonal;
// read mirrors into a symmetric n x n matrix
void write_edge_list(const std::string& path, const Mat& m);
Mat read_edge_list(const std::string& path, int n);

void write_json_file(const std::string& path, const Json& j);
Json read_json_file(const std::string& path);

std::string format_real(double x);  // %.17g

}  // namespace cpg
