#pragma once
// Plain-text matrix file format: optional '#' comments and blank lines, then
// a "rows cols" header line, then exactly rows lines of cols numbers each.
// Parsing is strict and every failure carries a 1-based line number.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "ncn/errors.hpp"
#include "ncn/matrix.hpp"
#include "ncn/vector.hpp"

namespace ncn {

namespace detail {

inline std::string strip_comment(const std::string& line) {
    const auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

inline std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) toks.push_back(line.substr(start, i - start));
    }
    return toks;
}

inline double parse_number(const std::string& tok, long lineno) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + tok.size())
        throw ParseError("expected a number, got '" + tok + "'", lineno);
    if (!std::isfinite(v)) throw ParseError("matrix entry '" + tok + "' is not finite", lineno);
    return v;
}

inline long parse_dimension(const std::string& tok, long lineno) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    const long v = std::strtol(begin, &end, 10);
    if (end != begin + tok.size() || v < 1)
        throw ParseError("expected a positive dimension, got '" + tok + "'", lineno);
    return v;
}

}  // namespace detail

inline Matrix parse_matrix(std::istream& in) {
    std::string line;
    long lineno = 0;

    // Header: first line carrying any tokens must read "rows cols".
    long rows = 0, cols = 0;
    while (true) {
        if (!std::getline(in, line))
            throw ParseError("missing 'rows cols' header", lineno + 1);
        ++lineno;
        const auto toks = detail::tokenize(detail::strip_comment(line));
        if (toks.empty()) continue;
        if (toks.size() != 2)
            throw ParseError("header must be exactly 'rows cols'", lineno);
        rows = detail::parse_dimension(toks[0], lineno);
        cols = detail::parse_dimension(toks[1], lineno);
        break;
    }

    Matrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
    long filled = 0;
    while (filled < rows) {
        if (!std::getline(in, line))
            throw ParseError("matrix data ended early: expected " + std::to_string(rows) +
                                 " rows, got " + std::to_string(filled),
                             lineno + 1);
        ++lineno;
        const auto toks = detail::tokenize(detail::strip_comment(line));
        if (toks.empty()) continue;
        if (long(toks.size()) != cols)
            throw ParseError("expected " + std::to_string(cols) + " entries in row " +
                                 std::to_string(filled + 1) + ", got " +
                                 std::to_string(toks.size()),
                             lineno);
        for (long j = 0; j < cols; ++j)
            m(std::size_t(filled), std::size_t(j)) = detail::parse_number(toks[std::size_t(j)], lineno);
        ++filled;
    }

    // Anything after the last row except comments and blanks is an error.
    while (std::getline(in, line)) {
        ++lineno;
        if (!detail::tokenize(detail::strip_comment(line)).empty())
            throw ParseError("unexpected data after the last matrix row", lineno);
    }
    return m;
}

inline Matrix load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParameter("cannot open matrix file '" + path + "'");
    return parse_matrix(in);
}

// Vectors reuse the matrix format; entries are flattened row-major, so both
// "n 1" columns and "1 n" rows load the same way.
inline Vector load_vector(const std::string& path) {
    const Matrix m = load_matrix(path);
    std::vector<double> entries;
    entries.reserve(m.rows() * m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) entries.push_back(m(i, j));
    return Vector(std::move(entries));
}

inline void write_matrix(std::ostream& out, const Matrix& m) {
    char buf[64];
    out << m.rows() << ' ' << m.cols() << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
            if (j) out << ' ';
            out << buf;
        }
        out << '\n';
    }
}

}  // namespace ncn
