#pragma once

// Dense bit-packed linear algebra over GF(2): rank, row reduction, solving,
// nullspaces, rowspace membership and exhaustive affine-space sweeps.
// Rows are packed 64 bits to a word; elimination works word-wise with XOR.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dirdec {

using Word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

inline std::size_t words_for(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

class BitVector {
  public:
    BitVector() = default;
    explicit BitVector(std::size_t len) : len_(len), words_(words_for(len), 0) {}

    static BitVector from_bits(const std::vector<int>& bits) {
        BitVector v(bits.size());
        for (std::size_t i = 0; i < bits.size(); ++i)
            if (bits[i]) v.set(i, true);
        return v;
    }
    static BitVector from_bits(std::initializer_list<int> bits) {
        return from_bits(std::vector<int>(bits));
    }

    std::size_t size() const { return len_; }

    bool get(std::size_t i) const { return (words_[i / kWordBits] >> (i % kWordBits)) & 1u; }

    void set(std::size_t i, bool v) {
        const Word mask = Word(1) << (i % kWordBits);
        if (v)
            words_[i / kWordBits] |= mask;
        else
            words_[i / kWordBits] &= ~mask;
    }

    void flip(std::size_t i) { words_[i / kWordBits] ^= Word(1) << (i % kWordBits); }

    void xor_with(const BitVector& o) {
        if (o.len_ != len_) throw std::invalid_argument("BitVector::xor_with: length mismatch");
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
    }

    void xor_words(const Word* w, std::size_t nwords) {
        for (std::size_t i = 0; i < nwords; ++i) words_[i] ^= w[i];
    }

    std::size_t weight() const {
        std::size_t c = 0;
        for (Word w : words_) c += std::popcount(w);
        return c;
    }

    bool is_zero() const {
        for (Word w : words_)
            if (w) return false;
        return true;
    }

    // Parity of the AND with o, i.e. the GF(2) inner product.
    bool dot(const BitVector& o) const {
        if (o.len_ != len_) throw std::invalid_argument("BitVector::dot: length mismatch");
        Word acc = 0;
        for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & o.words_[w];
        return std::popcount(acc) & 1u;
    }

    // Lexicographic order on bit strings read from index 0: at the first
    // differing position, 0 sorts before 1.
    bool lex_less(const BitVector& o) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            const Word d = words_[w] ^ o.words_[w];
            if (d) {
                const Word low = d & (~d + 1);
                return (words_[w] & low) == 0;
            }
        }
        return false;
    }

    bool operator==(const BitVector&) const = default;

    const std::vector<Word>& words() const { return words_; }
    std::vector<Word>& words() { return words_; }

  private:
    std::size_t len_ = 0;
    std::vector<Word> words_;
};

class BinaryMatrix {
  public:
    BinaryMatrix() = default;
    BinaryMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), wpr_(words_for(cols)), bits_(rows * wpr_, 0) {}

    static BinaryMatrix identity(std::size_t n) {
        BinaryMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
        return m;
    }

    static BinaryMatrix from_rows(const std::vector<std::vector<int>>& rows01) {
        const std::size_t r = rows01.size();
        const std::size_t c = r ? rows01[0].size() : 0;
        BinaryMatrix m(r, c);
        for (std::size_t i = 0; i < r; ++i) {
            if (rows01[i].size() != c)
                throw std::invalid_argument("BinaryMatrix::from_rows: ragged rows");
            for (std::size_t j = 0; j < c; ++j)
                if (rows01[i][j]) m.set(i, j, true);
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t words_per_row() const { return wpr_; }

    bool get(std::size_t r, std::size_t c) const {
        return (bits_[r * wpr_ + c / kWordBits] >> (c % kWordBits)) & 1u;
    }

    void set(std::size_t r, std::size_t c, bool v) {
        const Word mask = Word(1) << (c % kWordBits);
        if (v)
            bits_[r * wpr_ + c / kWordBits] |= mask;
        else
            bits_[r * wpr_ + c / kWordBits] &= ~mask;
    }

    const Word* row_words(std::size_t r) const { return bits_.data() + r * wpr_; }
    Word* row_words(std::size_t r) { return bits_.data() + r * wpr_; }

    void xor_rows(std::size_t dst, std::size_t src) {
        Word* d = row_words(dst);
        const Word* s = row_words(src);
        for (std::size_t w = 0; w < wpr_; ++w) d[w] ^= s[w];
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        Word* pa = row_words(a);
        Word* pb = row_words(b);
        for (std::size_t w = 0; w < wpr_; ++w) std::swap(pa[w], pb[w]);
    }

    BitVector row(std::size_t r) const {
        BitVector v(cols_);
        const Word* p = row_words(r);
        for (std::size_t w = 0; w < wpr_; ++w) v.words()[w] = p[w];
        return v;
    }

    void set_row(std::size_t r, const BitVector& v) {
        if (v.size() != cols_) throw std::invalid_argument("BinaryMatrix::set_row: length mismatch");
        Word* p = row_words(r);
        for (std::size_t w = 0; w < wpr_; ++w) p[w] = v.words()[w];
    }

    std::size_t row_weight(std::size_t r) const {
        const Word* p = row_words(r);
        std::size_t c = 0;
        for (std::size_t w = 0; w < wpr_; ++w) c += std::popcount(p[w]);
        return c;
    }

    bool row_is_zero(std::size_t r) const {
        const Word* p = row_words(r);
        for (std::size_t w = 0; w < wpr_; ++w)
            if (p[w]) return false;
        return true;
    }

    std::vector<std::size_t> row_support(std::size_t r) const {
        std::vector<std::size_t> out;
        const Word* p = row_words(r);
        for (std::size_t w = 0; w < wpr_; ++w) {
            Word x = p[w];
            while (x) {
                out.push_back(w * kWordBits + std::countr_zero(x));
                x &= x - 1;
            }
        }
        return out;
    }

    // M·v over GF(2); result has one bit per row.
    BitVector mul_vec(const BitVector& v) const {
        if (v.size() != cols_) throw std::invalid_argument("BinaryMatrix::mul_vec: length mismatch");
        BitVector out(rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            Word acc = 0;
            const Word* p = row_words(r);
            for (std::size_t w = 0; w < wpr_; ++w) acc ^= p[w] & v.words()[w];
            if (std::popcount(acc) & 1u) out.set(r, true);
        }
        return out;
    }

    // Parity of the overlap between row r of *this and row ro of other.
    bool rows_overlap_odd(std::size_t r, const BinaryMatrix& other, std::size_t ro) const {
        Word acc = 0;
        const Word* a = row_words(r);
        const Word* b = other.row_words(ro);
        for (std::size_t w = 0; w < wpr_; ++w) acc ^= a[w] & b[w];
        return std::popcount(acc) & 1u;
    }

    BinaryMatrix transpose() const {
        BinaryMatrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c : row_support(r)) t.set(c, r, true);
        return t;
    }

    static BinaryMatrix vstack(const BinaryMatrix& a, const BinaryMatrix& b) {
        if (a.cols() != b.cols() && a.rows() != 0 && b.rows() != 0)
            throw std::invalid_argument("BinaryMatrix::vstack: column mismatch");
        const std::size_t cols = a.rows() ? a.cols() : b.cols();
        BinaryMatrix out(a.rows() + b.rows(), cols);
        for (std::size_t r = 0; r < a.rows(); ++r)
            for (std::size_t w = 0; w < out.wpr_; ++w)
                out.row_words(r)[w] = a.row_words(r)[w];
        for (std::size_t r = 0; r < b.rows(); ++r)
            for (std::size_t w = 0; w < out.wpr_; ++w)
                out.row_words(a.rows() + r)[w] = b.row_words(r)[w];
        return out;
    }

    bool operator==(const BinaryMatrix&) const = default;

  private:
    std::size_t rows_ = 0, cols_ = 0, wpr_ = 0;
    std::vector<Word> bits_;
};

struct RowReduceResult {
    BinaryMatrix rref;
    std::vector<std::size_t> pivot_cols;  // strictly increasing
};

// Reduced row-echelon form. Pivots are chosen lowest column first so the
// output is the same on every run.
inline RowReduceResult row_reduce(BinaryMatrix m) {
    std::vector<std::size_t> pivots;
    std::size_t next_row = 0;
    for (std::size_t c = 0; c < m.cols() && next_row < m.rows(); ++c) {
        std::size_t pivot_row = m.rows();
        for (std::size_t r = next_row; r < m.rows(); ++r) {
            if (m.get(r, c)) {
                pivot_row = r;
                break;
            }
        }
        if (pivot_row == m.rows()) continue;
        m.swap_rows(next_row, pivot_row);
        for (std::size_t r = 0; r < m.rows(); ++r)
            if (r != next_row && m.get(r, c)) m.xor_rows(r, next_row);
        pivots.push_back(c);
        ++next_row;
    }
    return {std::move(m), std::move(pivots)};
}

inline std::size_t rank(const BinaryMatrix& m) { return row_reduce(m).pivot_cols.size(); }

// Some solution of M·e = s with free variables set to 0, or nullopt when the
// system is inconsistent.
inline std::optional<BitVector> solve(const BinaryMatrix& m, const BitVector& s) {
    if (s.size() != m.rows()) throw std::invalid_argument("solve: syndrome length mismatch");
    BinaryMatrix work = m;
    BitVector rhs = s;
    std::vector<std::size_t> pivots;
    std::size_t next_row = 0;
    for (std::size_t c = 0; c < work.cols() && next_row < work.rows(); ++c) {
        std::size_t pivot_row = work.rows();
        for (std::size_t r = next_row; r < work.rows(); ++r) {
            if (work.get(r, c)) {
                pivot_row = r;
                break;
            }
        }
        if (pivot_row == work.rows()) continue;
        if (pivot_row != next_row) {
            work.swap_rows(next_row, pivot_row);
            const bool a = rhs.get(next_row);
            const bool b = rhs.get(pivot_row);
            rhs.set(next_row, b);
            rhs.set(pivot_row, a);
        }
        for (std::size_t r = 0; r < work.rows(); ++r) {
            if (r != next_row && work.get(r, c)) {
                work.xor_rows(r, next_row);
                if (rhs.get(next_row)) rhs.flip(r);
            }
        }
        pivots.push_back(c);
        ++next_row;
    }
    for (std::size_t r = next_row; r < work.rows(); ++r)
        if (rhs.get(r)) return std::nullopt;
    BitVector e(m.cols());
    for (std::size_t i = 0; i < pivots.size(); ++i)
        if (rhs.get(i)) e.set(pivots[i], true);
    return e;
}

// Basis of ker(M); one row per free column, ordered by free column index.
inline BinaryMatrix nullspace_basis(const BinaryMatrix& m) {
    const RowReduceResult rr = row_reduce(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t c : rr.pivot_cols) is_pivot[c] = true;
    const std::size_t dim = m.cols() - rr.pivot_cols.size();
    BinaryMatrix basis(dim, m.cols());
    std::size_t out = 0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        if (is_pivot[j]) continue;
        basis.set(out, j, true);
        for (std::size_t r = 0; r < rr.pivot_cols.size(); ++r)
            if (rr.rref.get(r, j)) basis.set(out, rr.pivot_cols[r], true);
        ++out;
    }
    return basis;
}

// Precomputed membership test for rowsp(M); reduces queries against the rref.
class RowspaceMembership {
  public:
    explicit RowspaceMembership(const BinaryMatrix& m) : cols_(m.cols()) {
        RowReduceResult rr = row_reduce(m);
        rref_ = std::move(rr.rref);
        pivot_cols_ = std::move(rr.pivot_cols);
    }

    std::size_t rank() const { return pivot_cols_.size(); }
    std::size_t cols() const { return cols_; }

    bool contains(const BitVector& v) const {
        if (v.size() != cols_) throw std::invalid_argument("RowspaceMembership: length mismatch");
        BitVector t = v;
        reduce_in_place(t);
        return t.is_zero();
    }

    void reduce_in_place(BitVector& t) const {
        for (std::size_t r = 0; r < pivot_cols_.size(); ++r)
            if (t.get(pivot_cols_[r])) t.xor_words(rref_.row_words(r), rref_.words_per_row());
    }

  private:
    std::size_t cols_;
    BinaryMatrix rref_;
    std::vector<std::size_t> pivot_cols_;
};

inline bool in_rowspace(const BinaryMatrix& m, const BitVector& v) {
    return RowspaceMembership(m).contains(v);
}

// Growing row space in echelon form; insert() reports whether the row was
// independent of everything inserted so far.
class IncrementalRowspace {
  public:
    explicit IncrementalRowspace(std::size_t cols) : cols_(cols) {}

    bool insert(const BitVector& v) {
        BitVector t = reduce(v);
        if (t.is_zero()) return false;
        std::size_t pivot = first_set_bit(t);
        std::size_t pos = 0;
        while (pos < pivots_.size() && pivots_[pos] < pivot) ++pos;
        pivots_.insert(pivots_.begin() + pos, pivot);
        rows_.insert(rows_.begin() + pos, std::move(t));
        return true;
    }

    bool contains(const BitVector& v) const { return reduce(v).is_zero(); }
    std::size_t rank() const { return rows_.size(); }

  private:
    BitVector reduce(BitVector t) const {
        if (t.size() != cols_) throw std::invalid_argument("IncrementalRowspace: length mismatch");
        for (std::size_t i = 0; i < rows_.size(); ++i)
            if (t.get(pivots_[i])) t.xor_with(rows_[i]);
        return t;
    }

    static std::size_t first_set_bit(const BitVector& v) {
        for (std::size_t w = 0; w < v.words().size(); ++w)
            if (v.words()[w]) return w * kWordBits + std::countr_zero(v.words()[w]);
        throw std::logic_error("first_set_bit: zero vector");
    }

    std::size_t cols_;
    std::vector<BitVector> rows_;
    std::vector<std::size_t> pivots_;
};

inline constexpr std::size_t kAffineIterCap = 24;

// Visits e0 + every GF(2) combination of the basis rows exactly once, in Gray
// order, mutating one shared vector in place. Basis rows must be linearly
// independent; at most 2^24 elements are allowed.
template <class Visit>
void iterate_affine_space(const BitVector& e0, const BinaryMatrix& basis, Visit&& visit) {
    if (basis.rows() > kAffineIterCap)
        throw std::invalid_argument("iterate_affine_space: basis larger than 2^24 elements");
    if (basis.rows() && basis.cols() != e0.size())
        throw std::invalid_argument("iterate_affine_space: dimension mismatch");
    if (rank(basis) != basis.rows())
        throw std::invalid_argument("iterate_affine_space: basis rows are dependent");
    BitVector v = e0;
    visit(static_cast<const BitVector&>(v));
    const std::uint64_t count = std::uint64_t(1) << basis.rows();
    for (std::uint64_t t = 1; t < count; ++t) {
        const unsigned idx = std::countr_zero(t);
        v.xor_words(basis.row_words(idx), basis.words_per_row());
        visit(static_cast<const BitVector&>(v));
    }
}

inline std::vector<BitVector> affine_space_elements(const BitVector& e0, const BinaryMatrix& basis) {
    std::vector<BitVector> out;
    out.reserve(std::size_t(1) << basis.rows());
    iterate_affine_space(e0, basis, [&](const BitVector& v) { out.push_back(v); });
    return out;
}

}  // namespace dirdec
