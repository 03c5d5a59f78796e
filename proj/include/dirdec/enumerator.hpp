#pragma once

// Exhaustive machinery for degeneracy classes and their directional scores:
// class tables with weighted coset leaders, the biased class enumerator and
// its tail counts, directional distances, and the global enumerator with its
// dual-form evaluation and Gibbs gradient.
//
// Everything here enumerates spaces of dimension <= 24 and is meant for
// desk-scale codes; the Monte Carlo path never calls into this module.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dirdec/code.hpp"
#include "dirdec/directional.hpp"
#include "dirdec/gf2.hpp"

namespace dirdec {

namespace detail {

struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

// Streams exp(x_t) terms and produces log(sum exp(x_t)) without underflow.
struct LogSumExp {
    double max_term = -std::numeric_limits<double>::infinity();
    double scaled = 0.0;
    void add(double x) {
        if (x <= max_term) {
            scaled += std::exp(x - max_term);
        } else {
            scaled = scaled * std::exp(max_term - x) + 1.0;
            max_term = x;
        }
    }
    double value() const {
        if (scaled == 0.0) return -std::numeric_limits<double>::infinity();
        return max_term + std::log(scaled);
    }
};

// Independent generating rows of rowsp(m), taken from its rref.
inline BinaryMatrix rowspace_basis(const BinaryMatrix& m) {
    const RowReduceResult rr = row_reduce(m);
    BinaryMatrix basis(rr.pivot_cols.size(), m.cols());
    for (std::size_t i = 0; i < rr.pivot_cols.size(); ++i) basis.set_row(i, rr.rref.row(i));
    return basis;
}

}  // namespace detail

// Representatives of the k logical operators on the opposite side, used to
// label degeneracy classes: vectors of ker(h_stab) independent of
// rowsp(h_det). Pairing an error with these is invariant on each class and
// separates all 2^k of them.
inline BinaryMatrix logical_duals(const CssCode& code, Side side = Side::XErrors) {
    const BinaryMatrix& h_det = detection_matrix(code, side);
    const BinaryMatrix& h_stab = stabilizer_matrix(code, side);
    const BinaryMatrix opposite_kernel = nullspace_basis(h_stab);
    IncrementalRowspace span(code.n);
    for (std::size_t r = 0; r < h_det.rows(); ++r) span.insert(h_det.row(r));
    BinaryMatrix duals(code.k, code.n);
    std::size_t found = 0;
    for (std::size_t r = 0; r < opposite_kernel.rows() && found < code.k; ++r) {
        const BitVector row = opposite_kernel.row(r);
        if (span.insert(row)) duals.set_row(found++, row);
    }
    if (found != code.k) throw std::logic_error("logical_duals: found fewer duals than k");
    return duals;
}

struct DegeneracyClasses {
    BitVector syndrome;
    // 2^k entries, the lexicographically least member of each class, indexed
    // by the class signature against logical_duals().
    std::vector<BitVector> reps;
};

// Partition of the solution set of the syndrome into stabilizer cosets.
inline DegeneracyClasses degeneracy_classes(const CssCode& code, const BitVector& s,
                                            std::size_t cap = kAffineIterCap,
                                            Side side = Side::XErrors) {
    const BinaryMatrix& h_det = detection_matrix(code, side);
    const auto e0 = solve(h_det, s);
    if (!e0) throw std::runtime_error("degeneracy_classes: syndrome has no solution");
    const BinaryMatrix kernel = nullspace_basis(h_det);
    if (kernel.rows() > cap || kernel.rows() > kAffineIterCap)
        throw std::runtime_error("degeneracy_classes: solution set of dimension " +
                                 std::to_string(kernel.rows()) + " exceeds the exhaustive cap");
    const BinaryMatrix duals = logical_duals(code, side);
    const std::size_t k = code.k;

    const auto signature_of = [&](const BitVector& v) {
        std::uint32_t sig = 0;
        for (std::size_t j = 0; j < k; ++j)
            if (v.dot(duals.row(j))) sig |= std::uint32_t(1) << j;
        return sig;
    };
    std::vector<std::uint32_t> row_sig(kernel.rows());
    for (std::size_t r = 0; r < kernel.rows(); ++r) row_sig[r] = signature_of(kernel.row(r));

    std::vector<BitVector> reps(std::size_t(1) << k);
    std::vector<char> seen(std::size_t(1) << k, 0);
    BitVector v = *e0;
    std::uint32_t sig = signature_of(v);
    const auto visit = [&]() {
        if (!seen[sig]) {
            reps[sig] = v;
            seen[sig] = 1;
        } else if (v.lex_less(reps[sig])) {
            reps[sig] = v;
        }
    };
    visit();
    const std::uint64_t count = std::uint64_t(1) << kernel.rows();
    for (std::uint64_t t = 1; t < count; ++t) {
        const unsigned idx = std::countr_zero(t);
        v.xor_words(kernel.row_words(idx), kernel.words_per_row());
        sig ^= row_sig[idx];
        visit();
    }
    for (char c : seen)
        if (!c) throw std::logic_error("degeneracy_classes: some class was never visited");
    return {s, std::move(reps)};
}

// Cost of the cheapest representative of rep's class: min over the
// stabilizer rowspace of the weighted cost of rep + u.
inline double class_score(const CssCode& code, const BitVector& rep, const QubitWeights& w,
                          std::size_t cap = kAffineIterCap, Side side = Side::XErrors) {
    if (w.size() != code.n) throw std::invalid_argument("class_score: weight length mismatch");
    const BinaryMatrix basis = detail::rowspace_basis(stabilizer_matrix(code, side));
    if (basis.rows() > cap || basis.rows() > kAffineIterCap)
        throw std::runtime_error("class_score: stabilizer rank " + std::to_string(basis.rows()) +
                                 " exceeds the exhaustive cap");
    std::vector<std::vector<std::size_t>> support(basis.rows());
    for (std::size_t r = 0; r < basis.rows(); ++r) support[r] = basis.row_support(r);

    BitVector v = rep;
    double cost = directional_cost(w, v);
    double best = cost;
    const std::uint64_t count = std::uint64_t(1) << basis.rows();
    for (std::uint64_t t = 1; t < count; ++t) {
        const unsigned idx = std::countr_zero(t);
        for (std::size_t j : support[idx]) {
            cost += v.get(j) ? -w[j] : w[j];
            v.flip(j);
        }
        if (cost < best) best = cost;
    }
    return best;
}

struct ClassScoreTable {
    BitVector syndrome;
    std::vector<BitVector> reps;
    std::vector<double> scores;
};

inline ClassScoreTable class_score_table(const CssCode& code, const BitVector& s,
                                         const QubitWeights& w, std::size_t cap = kAffineIterCap,
                                         Side side = Side::XErrors) {
    DegeneracyClasses classes = degeneracy_classes(code, s, cap, side);
    ClassScoreTable table;
    table.syndrome = std::move(classes.syndrome);
    table.reps = std::move(classes.reps);
    table.scores.reserve(table.reps.size());
    for (const BitVector& rep : table.reps)
        table.scores.push_back(class_score(code, rep, w, cap, side));
    return table;
}

struct EnumeratorReport {
    double beta = 0.0;
    double value = 0.0;       // sum over classes of exp(-beta * score)
    double mean_score = 0.0;  // mean class score (minus the slope of the sum at beta = 0)
    double var_score = 0.0;   // score variance under the uniform class distribution
};

inline EnumeratorReport enumerator_from_scores(const std::vector<double>& scores, double beta) {
    if (beta < 0.0) throw std::invalid_argument("directional_enumerator: beta must be >= 0");
    double max_abs = 0.0;
    double mean = 0.0;
    for (double s : scores) {
        max_abs = std::max(max_abs, std::abs(s));
        mean += s;
    }
    mean /= static_cast<double>(scores.size());
    double var = 0.0;
    for (double s : scores) var += (s - mean) * (s - mean);
    var /= static_cast<double>(scores.size());

    // direct summation unless exp would underflow; at beta = 0 this makes
    // the value exactly the class count
    double value;
    if (beta * max_abs <= 700.0) {
        detail::KahanSum sum;
        for (double s : scores) sum.add(std::exp(-beta * s));
        value = sum.sum;
    } else {
        detail::LogSumExp lse;
        for (double s : scores) lse.add(-beta * s);
        value = std::exp(lse.value());
    }
    return {beta, value, mean, var};
}

inline EnumeratorReport directional_enumerator(const ClassScoreTable& table, double beta) {
    return enumerator_from_scores(table.scores, beta);
}

inline EnumeratorReport directional_enumerator(const CssCode& code, const BitVector& s,
                                               const QubitWeights& w, double beta,
                                               std::size_t cap = kAffineIterCap,
                                               Side side = Side::XErrors) {
    return directional_enumerator(class_score_table(code, s, w, cap, side), beta);
}

// Number of classes whose score is at most t.
inline std::size_t tail_count(const ClassScoreTable& table, double t) {
    std::size_t count = 0;
    for (double s : table.scores)
        if (s <= t) ++count;
    return count;
}

inline std::size_t tail_count(const CssCode& code, const BitVector& s, const QubitWeights& w,
                              double t, std::size_t cap = kAffineIterCap,
                              Side side = Side::XErrors) {
    return tail_count(class_score_table(code, s, w, cap, side), t);
}

// Fraction of classes admissible under the score-threshold rule.
inline double admissible_fraction(const ClassScoreTable& table, double t) {
    return static_cast<double>(tail_count(table, t)) / static_cast<double>(table.scores.size());
}

inline double admissible_fraction(const CssCode& code, const BitVector& s, const QubitWeights& w,
                                  double t, std::size_t cap = kAffineIterCap,
                                  Side side = Side::XErrors) {
    return admissible_fraction(class_score_table(code, s, w, cap, side), t);
}

struct DirectionalDistances {
    double stabilizer = 0.0;  // min cost over nontrivial stabilizers of both rowspaces
    double logical = 0.0;     // min cost over nontrivial logical operators of both sides
};

namespace detail {

inline bool min_cost_rowspace(const BinaryMatrix& h, const QubitWeights& w, double& best,
                              std::size_t cap) {
    const BinaryMatrix basis = rowspace_basis(h);
    if (basis.rows() == 0) return false;
    if (basis.rows() > cap || basis.rows() > kAffineIterCap)
        throw std::runtime_error("directional_distances: rowspace exceeds the exhaustive cap");
    std::vector<std::vector<std::size_t>> support(basis.rows());
    for (std::size_t r = 0; r < basis.rows(); ++r) support[r] = basis.row_support(r);
    BitVector v(h.cols());
    double cost = 0.0;
    bool found = false;
    const std::uint64_t count = std::uint64_t(1) << basis.rows();
    for (std::uint64_t t = 1; t < count; ++t) {
        const unsigned idx = std::countr_zero(t);
        for (std::size_t j : support[idx]) {
            cost += v.get(j) ? -w[j] : w[j];
            v.flip(j);
        }
        if (!found || cost < best) {
            best = cost;
            found = true;
        }
    }
    return found;
}

inline bool min_cost_logical(const BinaryMatrix& h_det, const BinaryMatrix& h_stab,
                             const QubitWeights& w, double& best, std::size_t cap) {
    const BinaryMatrix kernel = nullspace_basis(h_det);
    if (kernel.rows() > cap || kernel.rows() > kAffineIterCap)
        throw std::runtime_error("directional_distances: kernel exceeds the exhaustive cap");
    std::vector<std::vector<std::size_t>> support(kernel.rows());
    for (std::size_t r = 0; r < kernel.rows(); ++r) support[r] = kernel.row_support(r);
    const RowspaceMembership stab(h_stab);
    BitVector v(h_det.cols());
    double cost = 0.0;
    bool found = false;
    const std::uint64_t count = std::uint64_t(1) << kernel.rows();
    for (std::uint64_t t = 1; t < count; ++t) {
        const unsigned idx = std::countr_zero(t);
        for (std::size_t j : support[idx]) {
            cost += v.get(j) ? -w[j] : w[j];
            v.flip(j);
        }
        if ((!found || cost < best) && !v.is_zero() && !stab.contains(v)) {
            best = cost;
            found = true;
        }
    }
    return found;
}

}  // namespace detail

// Weighted analogues of the stabilizer and logical distances. Requires
// nonnegative weights so the sweeps range over well-defined minima.
inline DirectionalDistances directional_distances(const CssCode& code, const QubitWeights& w,
                                                  std::size_t cap = kAffineIterCap) {
    if (w.size() != code.n)
        throw std::invalid_argument("directional_distances: weight length mismatch");
    for (double x : w.values)
        if (x < 0.0)
            throw std::invalid_argument("directional_distances: weights must be nonnegative");

    DirectionalDistances out;
    double sx = 0.0, sz = 0.0;
    const bool hx = detail::min_cost_rowspace(code.h_x, w, sx, cap);
    const bool hz = detail::min_cost_rowspace(code.h_z, w, sz, cap);
    if (hx && hz)
        out.stabilizer = std::min(sx, sz);
    else
        out.stabilizer = hx ? sx : sz;

    double lx = 0.0, lz = 0.0;
    const bool fx = detail::min_cost_logical(code.h_z, code.h_x, w, lx, cap);
    const bool fz = detail::min_cost_logical(code.h_x, code.h_z, w, lz, cap);
    if (fx && fz)
        out.logical = std::min(lx, lz);
    else
        out.logical = fx ? lx : lz;
    return out;
}

// Basis of C = ker(H_X) ∩ ker(H_Z), the codewords shared by both sides.
inline BinaryMatrix intersection_basis(const CssCode& code) {
    return nullspace_basis(BinaryMatrix::vstack(code.h_x, code.h_z));
}

// Direct sum of exp(alpha * <w, v>) over the row space of the given basis.
inline double global_enumerator_basis(const BinaryMatrix& basis_rows, const QubitWeights& w,
                                      double alpha) {
    if (alpha <= 0.0) throw std::invalid_argument("global_enumerator: alpha must be positive");
    if (w.size() != basis_rows.cols())
        throw std::invalid_argument("global_enumerator: weight length mismatch");
    const BinaryMatrix basis = detail::rowspace_basis(basis_rows);
    if (basis.rows() > kAffineIterCap)
        throw std::runtime_error("global_enumerator: code dimension exceeds the exhaustive cap");
    std::vector<std::vector<std::size_t>> support(basis.rows());
    for (std::size_t r = 0; r < basis.rows(); ++r) support[r] = basis.row_support(r);

    BitVector v(basis.cols());
    double dot = 0.0;
    detail::KahanSum sum;
    sum.add(1.0);  // zero codeword
    const std::uint64_t count = std::uint64_t(1) << basis.rows();
    for (std::uint64_t t = 1; t < count; ++t) {
        const unsigned idx = std::countr_zero(t);
        for (std::size_t j : support[idx]) {
            dot += v.get(j) ? -w[j] : w[j];
            v.flip(j);
        }
        sum.add(std::exp(alpha * dot));
    }
    return sum.sum;
}

inline double global_enumerator(const CssCode& code, const QubitWeights& w, double alpha) {
    return global_enumerator_basis(intersection_basis(code), w, alpha);
}

// Same quantity evaluated through the dual code: the coordinate-factorized
// transform sum over C^perp, divided by |C^perp|.
inline double macwilliams_enumerator_basis(const BinaryMatrix& basis_rows, const QubitWeights& w,
                                           double alpha) {
    if (alpha <= 0.0) throw std::invalid_argument("macwilliams_enumerator: alpha must be positive");
    const std::size_t n = basis_rows.cols();
    if (w.size() != n) throw std::invalid_argument("macwilliams_enumerator: weight length mismatch");
    const BinaryMatrix dual = nullspace_basis(basis_rows);
    if (dual.rows() > kAffineIterCap)
        throw std::runtime_error("macwilliams_enumerator: dual dimension exceeds the exhaustive cap");
    std::vector<double> plus(n), minus(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = std::exp(alpha * w[i]);
        plus[i] = 1.0 + t;
        minus[i] = 1.0 - t;
    }
    detail::KahanSum sum;
    iterate_affine_space(BitVector(n), dual, [&](const BitVector& u) {
        double prod = 1.0;
        for (std::size_t i = 0; i < n; ++i) prod *= u.get(i) ? minus[i] : plus[i];
        sum.add(prod);
    });
    return sum.sum / static_cast<double>(std::uint64_t(1) << dual.rows());
}

inline double macwilliams_enumerator(const CssCode& code, const QubitWeights& w, double alpha) {
    return macwilliams_enumerator_basis(intersection_basis(code), w, alpha);
}

// Gradient of log of the global enumerator: component i equals
// alpha * E[v_i] under the Gibbs distribution pi(v) ∝ exp(alpha <w, v>).
inline std::vector<double> enumerator_gradient_basis(const BinaryMatrix& basis_rows,
                                                     const QubitWeights& w, double alpha) {
    if (alpha <= 0.0) throw std::invalid_argument("enumerator_gradient: alpha must be positive");
    const std::size_t n = basis_rows.cols();
    if (w.size() != n) throw std::invalid_argument("enumerator_gradient: weight length mismatch");
    const BinaryMatrix basis = detail::rowspace_basis(basis_rows);
    if (basis.rows() > kAffineIterCap)
        throw std::runtime_error("enumerator_gradient: code dimension exceeds the exhaustive cap");
    std::vector<std::vector<std::size_t>> support(basis.rows());
    for (std::size_t r = 0; r < basis.rows(); ++r) support[r] = basis.row_support(r);

    // pass 1: largest exponent, for stable scaling
    double max_dot = 0.0;
    {
        BitVector v(n);
        double dot = 0.0;
        const std::uint64_t count = std::uint64_t(1) << basis.rows();
        for (std::uint64_t t = 1; t < count; ++t) {
            const unsigned idx = std::countr_zero(t);
            for (std::size_t j : support[idx]) {
                dot += v.get(j) ? -w[j] : w[j];
                v.flip(j);
            }
            if (alpha * dot > max_dot) max_dot = alpha * dot;
        }
    }
    // pass 2: scaled Gibbs expectations
    std::vector<double> numer(n, 0.0);
    double denom = 0.0;
    {
        BitVector v(n);
        double dot = 0.0;
        const auto accumulate = [&]() {
            const double weight = std::exp(alpha * dot - max_dot);
            denom += weight;
            for (std::size_t word = 0; word < v.words().size(); ++word) {
                Word x = v.words()[word];
                while (x) {
                    numer[word * kWordBits + std::countr_zero(x)] += weight;
                    x &= x - 1;
                }
            }
        };
        accumulate();
        const std::uint64_t count = std::uint64_t(1) << basis.rows();
        for (std::uint64_t t = 1; t < count; ++t) {
            const unsigned idx = std::countr_zero(t);
            for (std::size_t j : support[idx]) {
                dot += v.get(j) ? -w[j] : w[j];
                v.flip(j);
            }
            accumulate();
        }
    }
    std::vector<double> grad(n);
    for (std::size_t i = 0; i < n; ++i) grad[i] = alpha * numer[i] / denom;
    return grad;
}

inline std::vector<double> enumerator_gradient(const CssCode& code, const QubitWeights& w,
                                               double alpha) {
    return enumerator_gradient_basis(intersection_basis(code), w, alpha);
}

}  // namespace dirdec
