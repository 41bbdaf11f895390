#include "tauthresh/io.hpp"

#include "tauthresh/errors.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace tauthresh {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    while (first != last && (*first == ' ' || *first == '\t')) ++first;
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{}) throw IoError("cannot parse number: '" + s + "'");
    return v;
}

namespace {

std::string grid_to_csv(const std::vector<double>& data, int rows, int cols) {
    std::string out;
    out.reserve(static_cast<std::size_t>(rows) * cols * 20);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            if (j) out.push_back(',');
            out += format_double(data[static_cast<std::size_t>(i) * cols + j]);
        }
        out.push_back('\n');
    }
    return out;
}

std::vector<std::vector<double>> parse_grid(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            const std::size_t comma = line.find(',', pos);
            const std::string cell =
                line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            row.push_back(parse_double(cell));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw IoError("ragged CSV: inconsistent column count");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError("empty CSV input");
    return rows;
}

} // namespace

std::string matrix_to_csv(const SymMatrix& m) {
    return grid_to_csv(m.data(), m.dim(), m.dim());
}

std::string sample_to_csv(const SampleMatrix& m) {
    return grid_to_csv(m.data(), m.rows(), m.cols());
}

SymMatrix matrix_from_csv(const std::string& text) {
    auto rows = parse_grid(text);
    const int p = static_cast<int>(rows.size());
    if (rows.front().size() != static_cast<std::size_t>(p))
        throw IoError("matrix CSV must be square");
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(p) * p);
    for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
    return SymMatrix::from_rows(p, std::move(flat));
}

SampleMatrix sample_from_csv(const std::string& text) {
    auto rows = parse_grid(text);
    const int n = static_cast<int>(rows.size());
    const int p = static_cast<int>(rows.front().size());
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(n) * p);
    for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
    return SampleMatrix(n, p, std::move(flat));
}

std::string matrix_to_json(const SymMatrix& m) {
    nlohmann::json j;
    j["p"] = m.dim();
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < m.dim(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int k = 0; k < m.dim(); ++k) row.push_back(m(i, k));
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    return j.dump();
}

SymMatrix matrix_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    const int p = j.at("p").get<int>();
    const auto& rows = j.at("rows");
    if (static_cast<int>(rows.size()) != p) throw IoError("matrix JSON: row count != p");
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(p) * p);
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != p) throw IoError("matrix JSON: ragged rows");
        for (const auto& v : row) flat.push_back(v.get<double>());
    }
    return SymMatrix::from_rows(p, std::move(flat));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for writing: " + tmp);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoError("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw IoError("atomic rename failed: " + path);
}

} // namespace tauthresh
