#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "dirdec/code.hpp"
#include "dirdec/directional.hpp"
#include "dirdec/enumerator.hpp"
#include "dirdec/fixtures.hpp"
#include "dirdec/rng.hpp"

using namespace dirdec;
using Catch::Approx;

namespace {

// k = 0 fixture: two disjoint single-qubit checks
CssCode k0_code() {
    return new_css(BinaryMatrix::from_rows({{1, 0}}), BinaryMatrix::from_rows({{0, 1}}));
}

// brute-force class score: sweep every combination of the raw stabilizer
// rows (dependent rows included) instead of an independent basis
double brute_class_score(const CssCode& code, const BitVector& rep, const QubitWeights& w) {
    const std::size_t m = code.h_x.rows();
    double best = directional_cost(w, rep);
    for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << m); ++mask) {
        BitVector v = rep;
        for (std::size_t r = 0; r < m; ++r)
            if ((mask >> r) & 1) v.xor_with(code.h_x.row(r));
        best = std::min(best, directional_cost(w, v));
    }
    return best;
}

}  // namespace

TEST_CASE("degeneracy_classes") {
    CHECK(degeneracy_classes(k0_code(), BitVector(1)).reps.size() == 1);

    const CssCode t3 = toric(3);
    const auto zero_classes = degeneracy_classes(t3, BitVector(9));
    CHECK(zero_classes.reps.size() == 4);

    // class count does not depend on the syndrome
    const CssCode tiny = new_css(BinaryMatrix::from_rows({{1, 1, 1, 1}}),
                                 BinaryMatrix::from_rows({{1, 1, 0, 0}, {0, 0, 1, 1}}));
    for (const BitVector& s : all_consistent_syndromes(tiny.h_z))
        CHECK(degeneracy_classes(tiny, s).reps.size() == (std::size_t(1) << tiny.k));

    // all representatives answer to their own syndrome and sit in distinct classes
    TrialRng rng(51, 0);
    const BitVector err = random_bitvector(rng, t3.n);
    const BitVector s = t3.h_z.mul_vec(err);
    const auto classes = degeneracy_classes(t3, s);
    const RowspaceMembership stab(t3.h_x);
    for (std::size_t a = 0; a < classes.reps.size(); ++a) {
        CHECK(t3.h_z.mul_vec(classes.reps[a]) == s);
        for (std::size_t b = a + 1; b < classes.reps.size(); ++b) {
            BitVector diff = classes.reps[a];
            diff.xor_with(classes.reps[b]);
            CHECK_FALSE(stab.contains(diff));
        }
    }

    // inconsistent syndrome: a zero-row check can never fire
    BinaryMatrix h_z(2, 3);
    h_z.set(0, 0, true);
    const CssCode padded = new_css(BinaryMatrix(0, 3), h_z);
    CHECK_THROWS_AS(degeneracy_classes(padded, BitVector::from_bits({0, 1})), std::runtime_error);
}

TEST_CASE("class_score") {
    const CssCode t3 = toric(3);
    TrialRng rng(53, 0);
    const QubitWeights w = random_weights(rng, t3.n, 0.0, 2.0);

    // the stabilizer class itself scores zero under nonnegative weights
    BitVector stab_elem = t3.h_x.row(0);
    stab_elem.xor_with(t3.h_x.row(4));
    CHECK(class_score(t3, stab_elem, w) == Approx(0.0).margin(1e-12));

    const QubitWeights zero = QubitWeights::zeros(t3.n);
    const BitVector any = random_bitvector(rng, t3.n);
    CHECK(class_score(t3, any, zero) == 0.0);

    // against the raw-row brute force
    const CssCode small = random_css_code(rng, 6, 10);
    const QubitWeights ws = random_weights(rng, small.n, 0.0, 3.0);
    const auto syndromes = all_consistent_syndromes(small.h_z);
    for (const BitVector& s : syndromes) {
        for (const BitVector& rep : degeneracy_classes(small, s).reps)
            CHECK(class_score(small, rep, ws) == Approx(brute_class_score(small, rep, ws)).margin(1e-9));
    }
}

TEST_CASE("directional_enumerator") {
    const CssCode t3 = toric(3);
    TrialRng rng(59, 0);
    const QubitWeights w = random_weights(rng, t3.n, 0.5, 2.0);

    const ClassScoreTable table = class_score_table(t3, BitVector(9), w);
    CHECK(directional_enumerator(table, 0.0).value == 4.0);  // 2^k exactly

    // strictly positive weights: the zero class dominates at large beta
    CHECK(directional_enumerator(table, 50.0).value == Approx(1.0).margin(1e-9));

    // forward difference of the sum at beta = 0 approximates -sum of scores
    const double h = 1e-6;
    const double fd =
        (directional_enumerator(table, h).value - directional_enumerator(table, 0.0).value) / h;
    double score_sum = 0.0;
    for (double s : table.scores) score_sum += s;
    CHECK(fd == Approx(-score_sum).epsilon(1e-4));

    // report moments
    const EnumeratorReport rep = directional_enumerator(table, 0.7);
    double mean = 0.0;
    for (double s : table.scores) mean += s;
    mean /= 4.0;
    CHECK(rep.mean_score == Approx(mean));
    CHECK(rep.beta == 0.7);
    CHECK(rep.value > 0.0);

    CHECK_THROWS_AS(directional_enumerator(table, -0.1), std::invalid_argument);

    // nonincreasing in beta for nonnegative weights
    double prev_value = directional_enumerator(table, 0.0).value;
    for (double beta : {0.2, 0.5, 1.0, 2.0, 4.0}) {
        const double value = directional_enumerator(table, beta).value;
        CHECK(value <= prev_value + 1e-12);
        prev_value = value;
    }
}

TEST_CASE("tail_count and admissible_fraction") {
    const CssCode t3 = toric(3);
    TrialRng rng(61, 0);
    const QubitWeights w = random_weights(rng, t3.n, 0.0, 2.0);
    const BitVector s = t3.h_z.mul_vec(random_bitvector(rng, t3.n));
    const ClassScoreTable table = class_score_table(t3, s, w);

    CHECK(tail_count(table, -1.0) == 0);  // nonnegative weights, nonnegative scores
    double max_score = table.scores[0];
    for (double v : table.scores) max_score = std::max(max_score, v);
    CHECK(tail_count(table, max_score) == 4);

    CHECK(admissible_fraction(table, max_score + 1.0) == 1.0);
    double min_score = table.scores[0];
    for (double v : table.scores) min_score = std::min(min_score, v);
    CHECK(admissible_fraction(table, min_score - 1e-9) == 0.0);

    // nondecreasing in the threshold and within [0, 1]
    double prev = 0.0;
    for (int i = 0; i <= 20; ++i) {
        const double t = min_score - 0.5 + (max_score - min_score + 1.0) * i / 20.0;
        const double f = admissible_fraction(table, t);
        CHECK(f >= prev);
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
        prev = f;
    }
}

TEST_CASE("directional_distances") {
    const CssCode t3 = toric(3);
    const CodeDistances dist = distances(t3, t3.n);

    const QubitWeights ones(std::vector<double>(t3.n, 1.0));
    const DirectionalDistances unit = directional_distances(t3, ones);
    CHECK(unit.logical == Approx(static_cast<double>(dist.d)));
    CHECK(unit.stabilizer == Approx(static_cast<double>(dist.d_s)));

    const QubitWeights threes(std::vector<double>(t3.n, 3.0));
    CHECK(directional_distances(t3, threes).logical == Approx(3.0 * dist.d));

    const QubitWeights neg(std::vector<double>(t3.n, -1.0));
    CHECK_THROWS_AS(directional_distances(t3, neg), std::invalid_argument);
}

TEST_CASE("global_enumerator") {
    // two-codeword code {00, 11}
    const BinaryMatrix basis = BinaryMatrix::from_rows({{1, 1}});
    const QubitWeights w(std::vector<double>{0.3, -0.7});
    const double alpha = 0.9;
    CHECK(global_enumerator_basis(basis, w, alpha) ==
          Approx(1.0 + std::exp(alpha * (0.3 - 0.7))));

    const QubitWeights zero2 = QubitWeights::zeros(2);
    CHECK(global_enumerator_basis(basis, zero2, 1.0) == Approx(2.0));

    TrialRng rng(67, 0);
    for (int i = 0; i < 10; ++i) {
        const std::size_t n = 4 + rng.below(8);
        const BinaryMatrix sub = random_subspace(rng, n, 1 + rng.below(4));
        const QubitWeights wr = random_weights(rng, n, -2.0, 2.0);
        CHECK(global_enumerator_basis(sub, wr, 0.5) >= 1.0);
    }

    // code-level wrapper agrees with the basis route on the intersection
    const CssCode t2 = toric(2);
    const QubitWeights wt = random_weights(rng, t2.n, -1.0, 1.0);
    CHECK(global_enumerator(t2, wt, 0.5) ==
          Approx(global_enumerator_basis(intersection_basis(t2), wt, 0.5)));

    CHECK_THROWS_AS(global_enumerator_basis(basis, w, 0.0), std::invalid_argument);
}

TEST_CASE("macwilliams_enumerator") {
    const BinaryMatrix basis = BinaryMatrix::from_rows({{1, 1}});
    const QubitWeights w(std::vector<double>{0.4, 1.1});
    const double alpha = 0.6;
    // dual of {00,11} is itself; expansion collapses to 1 + e^(alpha(w1+w2))
    const double expect = 1.0 + std::exp(alpha * (0.4 + 1.1));
    CHECK(macwilliams_enumerator_basis(basis, w, alpha) == Approx(expect).epsilon(1e-12));
    CHECK(global_enumerator_basis(basis, w, alpha) == Approx(expect).epsilon(1e-12));

    // zero weights: only the all-zero dual word survives, giving |C|
    const QubitWeights zero2 = QubitWeights::zeros(2);
    CHECK(macwilliams_enumerator_basis(basis, zero2, 1.0) == Approx(2.0));

    TrialRng rng(71, 0);
    for (int i = 0; i < 15; ++i) {
        const std::size_t n = 4 + rng.below(9);
        const std::size_t dim = 1 + rng.below(std::min<std::size_t>(6, n - 1));
        const BinaryMatrix sub = random_subspace(rng, n, dim);
        const QubitWeights wr = random_weights(rng, n, -3.0, 3.0);
        const double g = global_enumerator_basis(sub, wr, 0.5);
        const double m = macwilliams_enumerator_basis(sub, wr, 0.5);
        CHECK(std::abs(g - m) / g < 1e-10);
    }
}

TEST_CASE("enumerator_gradient") {
    // uniform Gibbs over {00,11}: coordinate appears in half the codewords
    const BinaryMatrix basis = BinaryMatrix::from_rows({{1, 1}});
    const QubitWeights zero2 = QubitWeights::zeros(2);
    const auto grad = enumerator_gradient_basis(basis, zero2, 0.8);
    CHECK(grad[0] == Approx(0.4));
    CHECK(grad[1] == Approx(0.4));

    TrialRng rng(73, 0);
    for (int i = 0; i < 10; ++i) {
        const std::size_t n = 5 + rng.below(6);
        const BinaryMatrix sub = random_subspace(rng, n, 2 + rng.below(3));
        const QubitWeights wr = random_weights(rng, n, -1.0, 1.0);
        const double alpha = 0.5;
        const auto g = enumerator_gradient_basis(sub, wr, alpha);
        for (double v : g) {
            CHECK(v >= 0.0);
            CHECK(v <= alpha + 1e-12);
        }
    }
}
