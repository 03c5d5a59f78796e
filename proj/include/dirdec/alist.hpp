#pragma once

// alist interchange format for binary parity-check matrices.
//
// Layout: "n m" / "max_col_deg max_row_deg" / n column degrees / m row
// degrees / n lines of 1-indexed check neighbours per column / m lines of
// 1-indexed qubit neighbours per row. Zero entries are padding and ignored.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dirdec/gf2.hpp"

namespace dirdec {

namespace detail {

inline std::string next_data_line(std::istream& in, const char* what) {
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream probe(line);
        std::string tok;
        if (probe >> tok) return line;
    }
    throw std::runtime_error(std::string("alist: unexpected end of file reading ") + what);
}

inline std::vector<long> parse_ints(const std::string& line, const char* what) {
    std::istringstream in(line);
    std::vector<long> out;
    long v;
    while (in >> v) out.push_back(v);
    if (!in.eof()) throw std::runtime_error(std::string("alist: malformed integer in ") + what);
    return out;
}

}  // namespace detail

inline BinaryMatrix load_alist(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("alist: cannot open " + path);

    const auto header = detail::parse_ints(detail::next_data_line(in, "header"), "header");
    if (header.size() != 2 || header[0] < 1 || header[1] < 1)
        throw std::runtime_error("alist: malformed header in " + path);
    const std::size_t n = static_cast<std::size_t>(header[0]);
    const std::size_t m = static_cast<std::size_t>(header[1]);

    const auto maxdeg = detail::parse_ints(detail::next_data_line(in, "max degrees"), "max degrees");
    if (maxdeg.size() != 2 || maxdeg[0] < 0 || maxdeg[1] < 0)
        throw std::runtime_error("alist: malformed max-degree line in " + path);

    const auto col_deg = detail::parse_ints(detail::next_data_line(in, "column degrees"), "column degrees");
    const auto row_deg = detail::parse_ints(detail::next_data_line(in, "row degrees"), "row degrees");
    if (col_deg.size() != n || row_deg.size() != m)
        throw std::runtime_error("alist: degree list length mismatch in " + path);
    long col_sum = 0, row_sum = 0;
    for (long d : col_deg) {
        if (d < 0 || d > maxdeg[0]) throw std::runtime_error("alist: column degree out of range in " + path);
        col_sum += d;
    }
    for (long d : row_deg) {
        if (d < 0 || d > maxdeg[1]) throw std::runtime_error("alist: row degree out of range in " + path);
        row_sum += d;
    }
    if (col_sum != row_sum)
        throw std::runtime_error("alist: column/row degree sums disagree in " + path);

    BinaryMatrix mat(m, n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto entries = detail::parse_ints(detail::next_data_line(in, "column neighbour list"),
                                                "column neighbour list");
        long nonzero = 0;
        for (long e : entries) {
            if (e < 0 || e > static_cast<long>(m))
                throw std::runtime_error("alist: check index out of range in " + path);
            if (e == 0) continue;  // padding
            if (mat.get(static_cast<std::size_t>(e - 1), j))
                throw std::runtime_error("alist: duplicate entry in column list of " + path);
            mat.set(static_cast<std::size_t>(e - 1), j, true);
            ++nonzero;
        }
        if (nonzero != col_deg[j])
            throw std::runtime_error("alist: column degree disagrees with neighbour list in " + path);
    }
    for (std::size_t i = 0; i < m; ++i) {
        const auto entries = detail::parse_ints(detail::next_data_line(in, "row neighbour list"),
                                                "row neighbour list");
        long nonzero = 0;
        for (long e : entries) {
            if (e < 0 || e > static_cast<long>(n))
                throw std::runtime_error("alist: qubit index out of range in " + path);
            if (e == 0) continue;
            if (!mat.get(i, static_cast<std::size_t>(e - 1)))
                throw std::runtime_error("alist: row list disagrees with column lists in " + path);
            ++nonzero;
        }
        if (nonzero != row_deg[i])
            throw std::runtime_error("alist: row degree disagrees with neighbour list in " + path);
    }
    return mat;
}

inline void save_alist(const BinaryMatrix& mat, const std::string& path) {
    if (mat.rows() < 1 || mat.cols() < 1)
        throw std::invalid_argument("alist: refusing to save an empty matrix");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("alist: cannot write " + path);

    const std::size_t m = mat.rows(), n = mat.cols();
    std::vector<std::vector<std::size_t>> col_nbrs(n), row_nbrs(m);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c : mat.row_support(r)) {
            row_nbrs[r].push_back(c + 1);
            col_nbrs[c].push_back(r + 1);
        }
    std::size_t max_col = 0, max_row = 0;
    for (const auto& v : col_nbrs) max_col = std::max(max_col, v.size());
    for (const auto& v : row_nbrs) max_row = std::max(max_row, v.size());

    out << n << ' ' << m << '\n';
    out << max_col << ' ' << max_row << '\n';
    for (std::size_t j = 0; j < n; ++j) out << col_nbrs[j].size() << (j + 1 < n ? ' ' : '\n');
    for (std::size_t i = 0; i < m; ++i) out << row_nbrs[i].size() << (i + 1 < m ? ' ' : '\n');
    // a lone padding zero keeps one data line per empty neighbour list
    const auto write_list = [&out](const std::vector<std::size_t>& v) {
        if (v.empty()) {
            out << "0\n";
            return;
        }
        for (std::size_t t = 0; t < v.size(); ++t) out << v[t] << (t + 1 < v.size() ? " " : "");
        out << '\n';
    };
    for (const auto& v : col_nbrs) write_list(v);
    for (const auto& v : row_nbrs) write_list(v);
    if (!out) throw std::runtime_error("alist: write failed for " + path);
}

}  // namespace dirdec
