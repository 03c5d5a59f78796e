#pragma once

// CSS code construction and validation: the toric family, single-sided tree
// codes for decoder cross-checks, and exhaustive distance computation for
// small fixtures.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dirdec/gf2.hpp"

namespace dirdec {

// Which Pauli error type is being decoded. X errors are detected by the
// Z checks (H_Z), and X stabilizers (rows of H_X) act trivially on them.
enum class Side { XErrors, ZErrors };

struct CssCode {
    BinaryMatrix h_x;  // m_X x n
    BinaryMatrix h_z;  // m_Z x n
    std::size_t n = 0;
    std::size_t k = 0;
    std::optional<std::vector<std::pair<int, int>>> coords;  // per-qubit planar embedding
    std::string name;

    double rate() const { return n ? static_cast<double>(k) / static_cast<double>(n) : 0.0; }
};

inline const BinaryMatrix& detection_matrix(const CssCode& code, Side side) {
    return side == Side::XErrors ? code.h_z : code.h_x;
}

inline const BinaryMatrix& stabilizer_matrix(const CssCode& code, Side side) {
    return side == Side::XErrors ? code.h_x : code.h_z;
}

inline CssCode new_css(BinaryMatrix h_x, BinaryMatrix h_z,
                       std::optional<std::vector<std::pair<int, int>>> coords = std::nullopt,
                       std::string name = "css") {
    if (h_x.rows() && h_z.rows() && h_x.cols() != h_z.cols())
        throw std::invalid_argument("new_css: H_X and H_Z have different qubit counts");
    const std::size_t n = h_x.rows() ? h_x.cols() : h_z.cols();
    for (std::size_t i = 0; i < h_x.rows(); ++i)
        for (std::size_t j = 0; j < h_z.rows(); ++j)
            if (h_x.rows_overlap_odd(i, h_z, j))
                throw std::invalid_argument("new_css: checks anticommute, H_X row " +
                                            std::to_string(i) + " overlaps H_Z row " +
                                            std::to_string(j) + " oddly");
    if (coords && coords->size() != n)
        throw std::invalid_argument("new_css: coordinate list length differs from qubit count");
    CssCode code;
    code.n = n;
    code.k = n - rank(h_x) - rank(h_z);
    // normalize empty sides so every matrix carries the qubit count
    if (h_x.rows() == 0) h_x = BinaryMatrix(0, n);
    if (h_z.rows() == 0) h_z = BinaryMatrix(0, n);
    code.h_x = std::move(h_x);
    code.h_z = std::move(h_z);
    code.coords = std::move(coords);
    code.name = std::move(name);
    return code;
}

// L x L toric code on a periodic lattice, one qubit per edge. Horizontal
// edge (x,y) gets index y*L + x and coordinate (2x, 2y); vertical edge (x,y)
// gets index L^2 + y*L + x and coordinate (2x+1, 2y+1). H_X holds the vertex
// (star) operators, H_Z the plaquettes.
inline CssCode toric(std::size_t L) {
    if (L < 2) throw std::invalid_argument("toric: L must be at least 2");
    const std::size_t n = 2 * L * L;
    const auto idx_h = [L](std::size_t x, std::size_t y) { return y * L + x; };
    const auto idx_v = [L](std::size_t x, std::size_t y) { return L * L + y * L + x; };

    BinaryMatrix h_x(L * L, n), h_z(L * L, n);
    for (std::size_t y = 0; y < L; ++y) {
        for (std::size_t x = 0; x < L; ++x) {
            const std::size_t star = y * L + x;
            h_x.set(star, idx_h(x, y), true);
            h_x.set(star, idx_h((x + L - 1) % L, y), true);
            h_x.set(star, idx_v(x, y), true);
            h_x.set(star, idx_v(x, (y + L - 1) % L), true);

            const std::size_t plaq = y * L + x;
            h_z.set(plaq, idx_h(x, y), true);
            h_z.set(plaq, idx_h(x, (y + 1) % L), true);
            h_z.set(plaq, idx_v(x, y), true);
            h_z.set(plaq, idx_v((x + 1) % L, y), true);
        }
    }

    std::vector<std::pair<int, int>> coords(n);
    for (std::size_t y = 0; y < L; ++y)
        for (std::size_t x = 0; x < L; ++x) {
            coords[idx_h(x, y)] = {static_cast<int>(2 * x), static_cast<int>(2 * y)};
            coords[idx_v(x, y)] = {static_cast<int>(2 * x + 1), static_cast<int>(2 * y + 1)};
        }

    return new_css(std::move(h_x), std::move(h_z), std::move(coords), "toric-" + std::to_string(L));
}

// Single-sided code whose only check matrix is h, placed on the Z side so
// that X-error decoding runs on the factor graph of h. Rejects matrices
// whose Tanner graph contains a cycle.
inline CssCode tree_code(BinaryMatrix h) {
    const std::size_t m = h.rows(), n = h.cols();
    std::vector<std::size_t> parent(m + n);
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
    const auto find = [&parent](std::size_t a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    };
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c : h.row_support(r)) {
            const std::size_t ra = find(r);
            const std::size_t rb = find(m + c);
            if (ra == rb)
                throw std::invalid_argument("tree_code: factor graph has a cycle through check " +
                                            std::to_string(r) + " and qubit " + std::to_string(c));
            parent[ra] = rb;
        }
    }
    return new_css(BinaryMatrix(0, n), std::move(h), std::nullopt, "tree");
}

// Coordinate sidecar for externally loaded codes: one "x y" integer pair per
// line, n lines. Blank lines are skipped.
inline std::vector<std::pair<int, int>> load_coords(const std::string& path, std::size_t n) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("coords: cannot open " + path);
    std::vector<std::pair<int, int>> coords;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        int x, y;
        if (ls >> x >> y) {
            coords.emplace_back(x, y);
        } else {
            std::string tok;
            if (std::istringstream(line) >> tok)
                throw std::runtime_error("coords: malformed line in " + path);
        }
    }
    if (coords.size() != n)
        throw std::runtime_error("coords: " + path + " has " + std::to_string(coords.size()) +
                                 " entries, expected " + std::to_string(n));
    return coords;
}

inline void save_coords(const std::vector<std::pair<int, int>>& coords, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("coords: cannot write " + path);
    for (const auto& [x, y] : coords) out << x << ' ' << y << '\n';
    if (!out) throw std::runtime_error("coords: write failed for " + path);
}

struct CodeDistances {
    std::size_t d = 0;    // min(d_x, d_z)
    std::size_t d_x = 0;  // min weight over ker(H_Z) \ rowsp(H_X); 0 when that side has no logicals
    std::size_t d_z = 0;  // min weight over ker(H_X) \ rowsp(H_Z)
    std::size_t d_s = 0;  // min weight over nonzero members of rowsp(H_X) and rowsp(H_Z)
};

namespace detail {

inline std::size_t min_logical_weight(const BinaryMatrix& h_det, const BinaryMatrix& h_stab) {
    const BinaryMatrix kernel = nullspace_basis(h_det);
    if (kernel.rows() > kAffineIterCap)
        throw std::invalid_argument("distances: kernel too large for exhaustive search");
    const RowspaceMembership stab(h_stab);
    std::size_t best = 0;
    bool found = false;
    iterate_affine_space(BitVector(h_det.cols()), kernel, [&](const BitVector& v) {
        if (v.is_zero()) return;
        const std::size_t wt = v.weight();
        if ((!found || wt < best) && !stab.contains(v)) {
            best = wt;
            found = true;
        }
    });
    return found ? best : 0;
}

inline std::size_t min_rowspace_weight(const BinaryMatrix& h) {
    const RowReduceResult rr = row_reduce(h);
    const std::size_t r = rr.pivot_cols.size();
    if (r == 0) return 0;
    if (r > kAffineIterCap)
        throw std::invalid_argument("distances: rowspace too large for exhaustive search");
    BinaryMatrix basis(r, h.cols());
    for (std::size_t i = 0; i < r; ++i) basis.set_row(i, rr.rref.row(i));
    std::size_t best = 0;
    bool found = false;
    iterate_affine_space(BitVector(h.cols()), basis, [&](const BitVector& v) {
        if (v.is_zero()) return;
        const std::size_t wt = v.weight();
        if (!found || wt < best) {
            best = wt;
            found = true;
        }
    });
    return best;
}

}  // namespace detail

// Exhaustive distances for small codes. Refuses above the qubit cap; the
// underlying sweeps are additionally capped at 2^24 elements each.
inline CodeDistances distances(const CssCode& code, std::size_t cap = 20) {
    if (code.n > cap)
        throw std::invalid_argument("distances: code has " + std::to_string(code.n) +
                                    " qubits, above the exhaustive cap of " + std::to_string(cap));
    CodeDistances out;
    out.d_x = detail::min_logical_weight(code.h_z, code.h_x);
    out.d_z = detail::min_logical_weight(code.h_x, code.h_z);
    if (out.d_x && out.d_z)
        out.d = std::min(out.d_x, out.d_z);
    else
        out.d = std::max(out.d_x, out.d_z);
    const std::size_t sx = detail::min_rowspace_weight(code.h_x);
    const std::size_t sz = detail::min_rowspace_weight(code.h_z);
    if (sx && sz)
        out.d_s = std::min(sx, sz);
    else
        out.d_s = std::max(sx, sz);
    return out;
}

}  // namespace dirdec
