#pragma once

// Directional annotations: per-edge orientation weights on the Tanner
// graphs, their reduction to per-qubit weights, the weighted error cost, and
// the geometric weight-field constructors.

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dirdec/code.hpp"
#include "dirdec/gf2.hpp"

namespace dirdec {

struct QubitWeights {
    std::vector<double> values;

    QubitWeights() = default;
    explicit QubitWeights(std::vector<double> v) : values(std::move(v)) {}
    static QubitWeights zeros(std::size_t n) { return QubitWeights(std::vector<double>(n, 0.0)); }

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
};

// Nonnegative weights on Tanner edges, one list per qubit and side. The
// support is fixed at construction to the edges of H_X and H_Z; only weights
// on existing edges can be assigned.
class EdgeWeights {
  public:
    using EdgeList = std::vector<std::pair<std::size_t, double>>;  // (check, weight)

    explicit EdgeWeights(const CssCode& code) : x_edges_(code.n), z_edges_(code.n) {
        for (std::size_t r = 0; r < code.h_x.rows(); ++r)
            for (std::size_t c : code.h_x.row_support(r)) x_edges_[c].emplace_back(r, 0.0);
        for (std::size_t r = 0; r < code.h_z.rows(); ++r)
            for (std::size_t c : code.h_z.row_support(r)) z_edges_[c].emplace_back(r, 0.0);
    }

    std::size_t qubit_count() const { return x_edges_.size(); }
    const std::vector<EdgeList>& x_edges() const { return x_edges_; }
    const std::vector<EdgeList>& z_edges() const { return z_edges_; }

    void set_x(std::size_t qubit, std::size_t check, double weight) {
        assign(x_edges_, qubit, check, weight, "X");
    }
    void set_z(std::size_t qubit, std::size_t check, double weight) {
        assign(z_edges_, qubit, check, weight, "Z");
    }

  private:
    static void assign(std::vector<EdgeList>& side, std::size_t qubit, std::size_t check,
                       double weight, const char* label) {
        if (weight < 0.0) throw std::invalid_argument("EdgeWeights: negative edge weight");
        if (qubit >= side.size()) throw std::invalid_argument("EdgeWeights: qubit out of range");
        for (auto& [chk, wt] : side[qubit]) {
            if (chk == check) {
                wt = weight;
                return;
            }
        }
        throw std::invalid_argument(std::string("EdgeWeights: (qubit ") + std::to_string(qubit) +
                                    ", " + label + " check " + std::to_string(check) +
                                    ") is not a Tanner edge");
    }

    std::vector<EdgeList> x_edges_, z_edges_;
};

// w_i = sum of the orientation weights on every edge incident to qubit i.
inline QubitWeights per_qubit_from_edges(const EdgeWeights& e) {
    std::vector<double> w(e.qubit_count(), 0.0);
    for (std::size_t i = 0; i < w.size(); ++i) {
        for (const auto& [chk, wt] : e.x_edges()[i]) w[i] += wt;
        for (const auto& [chk, wt] : e.z_edges()[i]) w[i] += wt;
    }
    return QubitWeights(std::move(w));
}

// Weighted error cost <w, E>.
inline double directional_cost(const QubitWeights& w, const BitVector& e) {
    if (w.size() != e.size()) throw std::invalid_argument("directional_cost: length mismatch");
    double total = 0.0;
    for (std::size_t word = 0; word < e.words().size(); ++word) {
        Word x = e.words()[word];
        while (x) {
            total += w[word * kWordBits + std::countr_zero(x)];
            x &= x - 1;
        }
    }
    return total;
}

// Centers and scales to sample variance one ((n-1) divisor). A constant
// input has no direction to express and maps to the all-zero field.
inline QubitWeights standardize(const std::vector<double>& c) {
    if (c.size() < 2) throw std::invalid_argument("standardize: need at least two values");
    double mean = 0.0;
    double lo = c[0], hi = c[0];
    for (double v : c) {
        mean += v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    mean /= static_cast<double>(c.size());
    double var = 0.0;
    for (double v : c) var += (v - mean) * (v - mean);
    var /= static_cast<double>(c.size() - 1);
    const double sd = std::sqrt(var);
    if (hi == lo || sd <= 1e-12 * std::max({std::abs(lo), std::abs(hi), 1.0}))
        return QubitWeights::zeros(c.size());
    std::vector<double> w(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) w[i] = (c[i] - mean) / sd;
    return QubitWeights(std::move(w));
}

enum class Axis { X, Y };

inline const std::vector<std::pair<int, int>>& require_coords(const CssCode& code,
                                                              const char* who) {
    if (!code.coords)
        throw std::runtime_error(std::string(who) + ": code '" + code.name +
                                 "' has no qubit coordinates");
    return *code.coords;
}

// Standardized coordinate along one lattice axis.
inline QubitWeights orientation_field(const CssCode& code, Axis axis) {
    const auto& coords = require_coords(code, "orientation_field");
    std::vector<double> c(code.n);
    for (std::size_t i = 0; i < code.n; ++i)
        c[i] = axis == Axis::X ? coords[i].first : coords[i].second;
    return standardize(c);
}

// +w0 on qubits whose x-coordinate is favoured, -w0 elsewhere.
inline QubitWeights strip_field(const CssCode& code, const std::set<int>& favored_cols, double w0) {
    if (w0 <= 0.0) throw std::invalid_argument("strip_field: contrast w0 must be positive");
    const auto& coords = require_coords(code, "strip_field");
    std::vector<double> w(code.n);
    for (std::size_t i = 0; i < code.n; ++i)
        w[i] = favored_cols.count(coords[i].first) ? w0 : -w0;
    return QubitWeights(std::move(w));
}

// Standardized Euclidean distance from a centre point.
inline QubitWeights radial_field(const CssCode& code, std::pair<double, double> center) {
    const auto& coords = require_coords(code, "radial_field");
    std::vector<double> c(code.n);
    for (std::size_t i = 0; i < code.n; ++i)
        c[i] = std::hypot(coords[i].first - center.first, coords[i].second - center.second);
    return standardize(c);
}

enum class EdgeSplit { UniformSplit, Replicate };

// Spread a nonnegative per-qubit budget back onto Tanner edges. UniformSplit
// divides each qubit's budget evenly over its incident edges (so the
// per-qubit reduction recovers the input); Replicate copies it onto each.
inline EdgeWeights edges_from_qubit(const CssCode& code, const std::vector<double>& w_raw,
                                    EdgeSplit scheme) {
    if (w_raw.size() != code.n) throw std::invalid_argument("edges_from_qubit: length mismatch");
    EdgeWeights e(code);
    for (std::size_t i = 0; i < code.n; ++i) {
        if (w_raw[i] < 0.0)
            throw std::invalid_argument("edges_from_qubit: negative per-qubit weight");
        const std::size_t deg = e.x_edges()[i].size() + e.z_edges()[i].size();
        if (deg == 0) {
            if (w_raw[i] > 0.0)
                throw std::invalid_argument("edges_from_qubit: qubit " + std::to_string(i) +
                                            " is isolated but has nonzero weight");
            continue;
        }
        const double per_edge =
            scheme == EdgeSplit::UniformSplit ? w_raw[i] / static_cast<double>(deg) : w_raw[i];
        for (const auto& [chk, wt] : e.x_edges()[i]) e.set_x(i, chk, per_edge);
        for (const auto& [chk, wt] : e.z_edges()[i]) e.set_z(i, chk, per_edge);
    }
    return e;
}

// Plain-text weight vectors: one decimal real per line.
inline QubitWeights load_weights(const std::string& path, std::size_t expected_n) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_weights: cannot open " + path);
    std::vector<double> w;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        double v;
        if (!(ls >> v)) {
            std::string tok;
            if (!(std::istringstream(line) >> tok)) continue;  // blank line
            throw std::runtime_error("load_weights: malformed line in " + path);
        }
        w.push_back(v);
    }
    if (w.size() != expected_n)
        throw std::runtime_error("load_weights: " + path + " has " + std::to_string(w.size()) +
                                 " entries, expected " + std::to_string(expected_n));
    return QubitWeights(std::move(w));
}

inline void save_weights(const QubitWeights& w, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_weights: cannot write " + path);
    out.precision(17);
    for (double v : w.values) out << v << '\n';
    if (!out) throw std::runtime_error("save_weights: write failed for " + path);
}

}  // namespace dirdec
