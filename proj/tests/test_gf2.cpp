#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "dirdec/code.hpp"
#include "dirdec/fixtures.hpp"
#include "dirdec/gf2.hpp"
#include "dirdec/rng.hpp"

using namespace dirdec;

namespace {

BinaryMatrix random_matrix(TrialRng& rng, std::size_t rows, std::size_t cols, double density = 0.4) {
    BinaryMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (rng.bernoulli(density)) m.set(r, c, true);
    return m;
}

}  // namespace

TEST_CASE("rank") {
    CHECK(rank(BinaryMatrix::identity(3)) == 3);
    CHECK(rank(BinaryMatrix(4, 6)) == 0);

    // the product of all vertex operators is the only dependency
    const CssCode t3 = toric(3);
    CHECK(rank(t3.h_x) == 8);
    BitVector sum(t3.n);
    for (std::size_t r = 0; r < t3.h_x.rows(); ++r) sum.xor_with(t3.h_x.row(r));
    CHECK(sum.is_zero());
    CHECK(rank(t3.h_z) == 8);
}

TEST_CASE("row_reduce") {
    const auto id = row_reduce(BinaryMatrix::identity(3));
    CHECK(id.rref == BinaryMatrix::identity(3));
    CHECK(id.pivot_cols == std::vector<std::size_t>{0, 1, 2});

    const auto rr = row_reduce(BinaryMatrix::from_rows({{1, 1}, {1, 1}}));
    CHECK(rr.rref == BinaryMatrix::from_rows({{1, 1}, {0, 0}}));
    CHECK(rr.pivot_cols == std::vector<std::size_t>{0});

    // rowspace is preserved: rows of each matrix lie in the other's rowspace
    TrialRng rng(7, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const BinaryMatrix m = random_matrix(rng, 5, 8);
        const auto red = row_reduce(m);
        for (std::size_t r = 0; r < m.rows(); ++r) {
            CHECK(in_rowspace(red.rref, m.row(r)));
            CHECK(in_rowspace(m, red.rref.row(r)));
        }
        for (std::size_t i = 1; i < red.pivot_cols.size(); ++i)
            CHECK(red.pivot_cols[i - 1] < red.pivot_cols[i]);
    }
}

TEST_CASE("solve") {
    const BinaryMatrix m = BinaryMatrix::from_rows({{1, 1}});
    const auto e = solve(m, BitVector::from_bits({1}));
    REQUIRE(e.has_value());
    CHECK((e->get(0) ^ e->get(1)) == true);

    const auto zero = solve(m, BitVector(1));
    REQUIRE(zero.has_value());
    CHECK(zero->is_zero());

    TrialRng rng(11, 0);
    for (int trial = 0; trial < 30; ++trial) {
        const BinaryMatrix a = random_matrix(rng, 6, 9);
        const BitVector x = random_bitvector(rng, 9);
        const BitVector s = a.mul_vec(x);
        const auto sol = solve(a, s);
        REQUIRE(sol.has_value());
        CHECK(a.mul_vec(*sol) == s);
    }

    // inconsistent system
    const BinaryMatrix dep = BinaryMatrix::from_rows({{1, 0}, {1, 0}});
    CHECK_FALSE(solve(dep, BitVector::from_bits({1, 0})).has_value());
}

TEST_CASE("nullspace_basis") {
    CHECK(nullspace_basis(BinaryMatrix::identity(4)).rows() == 0);

    const BinaryMatrix m = BinaryMatrix::from_rows({{1, 1, 0}, {0, 1, 1}});
    const BinaryMatrix basis = nullspace_basis(m);
    REQUIRE(basis.rows() == 1);
    CHECK(basis.row(0) == BitVector::from_bits({1, 1, 1}));

    TrialRng rng(13, 0);
    for (int trial = 0; trial < 30; ++trial) {
        const BinaryMatrix a = random_matrix(rng, 5, 10);
        const BinaryMatrix nb = nullspace_basis(a);
        CHECK(rank(a) + nb.rows() == a.cols());
        for (std::size_t r = 0; r < nb.rows(); ++r) CHECK(a.mul_vec(nb.row(r)).is_zero());
        CHECK(rank(nb) == nb.rows());
    }
}

TEST_CASE("in_rowspace") {
    TrialRng rng(17, 0);
    const BinaryMatrix m = random_matrix(rng, 3, 6);
    CHECK(in_rowspace(m, BitVector(6)));
    BitVector two = m.row(0);
    two.xor_with(m.row(1));
    CHECK(in_rowspace(m, two));

    // exhaustively collect the span, then compare membership for all vectors
    std::set<std::vector<Word>> span;
    for (unsigned mask = 0; mask < 8; ++mask) {
        BitVector v(6);
        for (unsigned b = 0; b < 3; ++b)
            if ((mask >> b) & 1) v.xor_with(m.row(b));
        span.insert(v.words());
    }
    for (unsigned bits = 0; bits < 64; ++bits) {
        BitVector v(6);
        for (unsigned b = 0; b < 6; ++b)
            if ((bits >> b) & 1) v.set(b, true);
        CHECK(in_rowspace(m, v) == (span.count(v.words()) > 0));
    }

    for (std::size_t r = 0; r < m.rows(); ++r) CHECK(in_rowspace(m, m.row(r)));
    const auto red = row_reduce(m);
    for (unsigned bits = 0; bits < 64; ++bits) {
        BitVector v(6);
        for (unsigned b = 0; b < 6; ++b)
            if ((bits >> b) & 1) v.set(b, true);
        CHECK(in_rowspace(m, v) == in_rowspace(red.rref, v));
    }
}

TEST_CASE("iterate_affine_space") {
    const BitVector e0 = BitVector::from_bits({1, 0, 1, 0});
    CHECK(affine_space_elements(e0, BinaryMatrix(0, 4)) == std::vector<BitVector>{e0});

    const BinaryMatrix basis = BinaryMatrix::from_rows({{1, 1, 0, 0}, {0, 0, 1, 1}});
    const auto elems = affine_space_elements(e0, basis);
    CHECK(elems.size() == 4);
    std::set<std::vector<Word>> uniq;
    for (const auto& v : elems) uniq.insert(v.words());
    CHECK(uniq.size() == 4);

    // syndrome is preserved across the kernel coset
    TrialRng rng(19, 0);
    const BinaryMatrix m = random_matrix(rng, 4, 9);
    const BitVector x = random_bitvector(rng, 9);
    const BitVector s = m.mul_vec(x);
    iterate_affine_space(x, nullspace_basis(m),
                         [&](const BitVector& v) { CHECK(m.mul_vec(v) == s); });

    CHECK_THROWS_AS(
        iterate_affine_space(BitVector(30), BinaryMatrix::identity(30), [](const BitVector&) {}),
        std::invalid_argument);

    // dependent basis rows are rejected
    CHECK_THROWS_AS(
        iterate_affine_space(BitVector(2), BinaryMatrix::from_rows({{1, 1}, {1, 1}}),
                             [](const BitVector&) {}),
        std::invalid_argument);
}

TEST_CASE("solution set equality with exhaustive sweep") {
    TrialRng rng(23, 0);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t cols = 8 + rng.below(4);
        const BinaryMatrix m = random_matrix(rng, 1 + rng.below(4), cols);
        const BitVector x = random_bitvector(rng, cols);
        const BitVector s = m.mul_vec(x);

        std::set<std::vector<Word>> brute;
        for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << cols); ++mask) {
            BitVector v(cols);
            for (std::size_t b = 0; b < cols; ++b)
                if ((mask >> b) & 1) v.set(b, true);
            if (m.mul_vec(v) == s) brute.insert(v.words());
        }
        std::set<std::vector<Word>> iterated;
        iterate_affine_space(x, nullspace_basis(m),
                             [&](const BitVector& v) { iterated.insert(v.words()); });
        CHECK(brute == iterated);
    }
}

TEST_CASE("lexicographic order and weight") {
    const BitVector a = BitVector::from_bits({0, 1, 1});
    const BitVector b = BitVector::from_bits({1, 0, 1});
    CHECK(a.lex_less(b));
    CHECK_FALSE(b.lex_less(a));
    CHECK_FALSE(a.lex_less(a));
    CHECK(a.weight() == 2);
    CHECK(BitVector(5).weight() == 0);
    CHECK(a.dot(b) == true);  // overlap {2} has odd size
}
