#pragma once

#include "tauthresh/kendall.hpp"
#include "tauthresh/sym_matrix.hpp"

#include <string>

namespace tauthresh {

// 17 significant digits, '.' decimal, locale independent; round-trips exactly
std::string format_double(double v);
double parse_double(const std::string& s);

// plain numeric grid, one row per line, comma separated, LF endings, no header
std::string matrix_to_csv(const SymMatrix& m);
std::string sample_to_csv(const SampleMatrix& m);
SymMatrix matrix_from_csv(const std::string& text);
SampleMatrix sample_from_csv(const std::string& text);

// {"p": int, "rows": [[...]]}
std::string matrix_to_json(const SymMatrix& m);
SymMatrix matrix_from_json(const std::string& text);

std::string read_file(const std::string& path);
// write to <path>.tmp then rename, so partial files never appear
void write_file_atomic(const std::string& path, const std::string& content);

} // namespace tauthresh
