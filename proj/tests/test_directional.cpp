#include <catch2/catch_amalgamated.hpp>

#include <cstdio>

#include "dirdec/code.hpp"
#include "dirdec/directional.hpp"
#include "dirdec/fixtures.hpp"
#include "dirdec/rng.hpp"

using namespace dirdec;
using Catch::Approx;

TEST_CASE("per_qubit_from_edges") {
    const CssCode code = new_css(BinaryMatrix::from_rows({{1, 1, 1, 1}}),
                                 BinaryMatrix::from_rows({{1, 1, 0, 0}, {0, 0, 1, 1}}));
    EdgeWeights zero(code);
    const QubitWeights w0 = per_qubit_from_edges(zero);
    for (double v : w0.values) CHECK(v == 0.0);

    EdgeWeights e(code);
    e.set_x(0, 0, 2.5);
    e.set_z(0, 0, 1.5);
    CHECK(per_qubit_from_edges(e)[0] == 4.0);

    // weights only live on Tanner edges
    CHECK_THROWS_AS(e.set_z(0, 1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(e.set_x(0, 0, -0.5), std::invalid_argument);

    const CssCode t3 = toric(3);
    EdgeWeights ones(t3);
    for (std::size_t q = 0; q < t3.n; ++q) {
        for (const auto& [chk, wt] : ones.x_edges()[q]) ones.set_x(q, chk, 1.0);
        for (const auto& [chk, wt] : ones.z_edges()[q]) ones.set_z(q, chk, 1.0);
    }
    for (double v : per_qubit_from_edges(ones).values) CHECK(v == 4.0);  // degree 2 + 2
}

TEST_CASE("directional_cost") {
    const QubitWeights w(std::vector<double>{1.0, 2.0, 3.0});
    CHECK(directional_cost(w, BitVector(3)) == 0.0);
    CHECK(directional_cost(w, BitVector::from_bits({1, 0, 1})) == 4.0);

    // additive over disjoint supports
    TrialRng rng(41, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 10 + rng.below(20);
        const QubitWeights wr = random_weights(rng, n, -2.0, 2.0);
        BitVector a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double u = rng.uniform();
            if (u < 0.3)
                a.set(i, true);
            else if (u < 0.6)
                b.set(i, true);
        }
        BitVector both = a;
        both.xor_with(b);
        CHECK(directional_cost(wr, both) ==
              Approx(directional_cost(wr, a) + directional_cost(wr, b)).margin(1e-12));
    }
}

TEST_CASE("standardize") {
    const QubitWeights w = standardize({0.0, 1.0, 2.0});
    CHECK(w[0] == Approx(-1.0));
    CHECK(w[1] == Approx(0.0).margin(1e-15));
    CHECK(w[2] == Approx(1.0));

    for (double v : standardize(std::vector<double>(5, 0.1)).values) CHECK(v == 0.0);

    CHECK_THROWS_AS(standardize({1.0}), std::invalid_argument);

    // moments of the toric(9) x-coordinate field
    const QubitWeights field = orientation_field(toric(9), Axis::X);
    double mean = 0.0;
    for (double v : field.values) mean += v;
    mean /= static_cast<double>(field.size());
    double var = 0.0;
    for (double v : field.values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(field.size() - 1);
    CHECK(std::abs(mean) < 1e-12);
    CHECK(std::abs(var - 1.0) < 1e-12);
}

TEST_CASE("orientation_field") {
    const CssCode t3 = toric(3);
    const QubitWeights wx = orientation_field(t3, Axis::X);
    // qubits sharing an x coordinate share a weight, monotone in x
    for (std::size_t i = 0; i < t3.n; ++i)
        for (std::size_t j = 0; j < t3.n; ++j) {
            const int xi = (*t3.coords)[i].first, xj = (*t3.coords)[j].first;
            if (xi == xj) CHECK(wx[i] == wx[j]);
            if (xi < xj) CHECK(wx[i] < wx[j]);
        }

    // the y field equals the x field of the coordinate-swapped code
    CssCode swapped = t3;
    for (auto& [x, y] : *swapped.coords) std::swap(x, y);
    const QubitWeights wy = orientation_field(t3, Axis::Y);
    const QubitWeights wx_swapped = orientation_field(swapped, Axis::X);
    for (std::size_t i = 0; i < t3.n; ++i) CHECK(wy[i] == wx_swapped[i]);

    CssCode bare = t3;
    bare.coords.reset();
    CHECK_THROWS_AS(orientation_field(bare, Axis::X), std::runtime_error);
}

TEST_CASE("strip_field") {
    const CssCode t3 = toric(3);
    std::set<int> all;
    for (const auto& [x, y] : *t3.coords) all.insert(x);
    for (double v : strip_field(t3, all, 1.5).values) CHECK(v == 1.5);
    for (double v : strip_field(t3, {}, 1.5).values) CHECK(v == -1.5);

    const QubitWeights w = strip_field(t3, {0, 1}, 2.0);
    for (std::size_t i = 0; i < t3.n; ++i) {
        const int x = (*t3.coords)[i].first;
        CHECK(w[i] == ((x == 0 || x == 1) ? 2.0 : -2.0));
    }
    CHECK_THROWS_AS(strip_field(t3, {0}, 0.0), std::invalid_argument);
}

TEST_CASE("radial_field") {
    // equidistant ring collapses to the zero field
    CssCode ring = new_css(BinaryMatrix(0, 4), BinaryMatrix::from_rows({{1, 1, 1, 1}}),
                           std::vector<std::pair<int, int>>{{1, 0}, {0, 1}, {-1, 0}, {0, -1}});
    for (double v : radial_field(ring, {0.0, 0.0}).values) CHECK(v == 0.0);

    const CssCode t3 = toric(3);
    const QubitWeights w = radial_field(t3, {0.0, 0.0});
    // the qubit at the centre has the smallest weight
    std::size_t origin = 0;
    for (std::size_t i = 0; i < t3.n; ++i)
        if ((*t3.coords)[i] == std::pair<int, int>{0, 0}) origin = i;
    for (std::size_t i = 0; i < t3.n; ++i)
        if (i != origin) CHECK(w[origin] <= w[i]);

    // strictly monotone in the radius
    for (std::size_t i = 0; i < t3.n; ++i)
        for (std::size_t j = 0; j < t3.n; ++j) {
            const auto [xi, yi] = (*t3.coords)[i];
            const auto [xj, yj] = (*t3.coords)[j];
            const double ri = std::hypot(xi, yi), rj = std::hypot(xj, yj);
            if (ri < rj) CHECK(w[i] < w[j]);
        }
}

TEST_CASE("edges_from_qubit") {
    const CssCode t3 = toric(3);
    const EdgeWeights zero = edges_from_qubit(t3, std::vector<double>(t3.n, 0.0),
                                              EdgeSplit::UniformSplit);
    for (double v : per_qubit_from_edges(zero).values) CHECK(v == 0.0);

    std::vector<double> four(t3.n, 4.0);
    const EdgeWeights split = edges_from_qubit(t3, four, EdgeSplit::UniformSplit);
    for (std::size_t q = 0; q < t3.n; ++q)
        for (const auto& [chk, wt] : split.x_edges()[q]) CHECK(wt == 1.0);

    // round trip through the per-qubit reduction
    TrialRng rng(43, 0);
    const std::vector<double> raw = random_reals(rng, t3.n, 0.0, 5.0);
    const QubitWeights back =
        per_qubit_from_edges(edges_from_qubit(t3, raw, EdgeSplit::UniformSplit));
    for (std::size_t q = 0; q < t3.n; ++q) CHECK(back[q] == Approx(raw[q]).margin(1e-12));

    // replicate copies the budget onto each edge
    const EdgeWeights rep = edges_from_qubit(t3, four, EdgeSplit::Replicate);
    for (const auto& [chk, wt] : rep.z_edges()[0]) CHECK(wt == 4.0);

    // isolated qubit with positive budget
    const CssCode lonely = new_css(BinaryMatrix(0, 3), BinaryMatrix::from_rows({{1, 1, 0}}));
    CHECK_THROWS_AS(edges_from_qubit(lonely, {1.0, 1.0, 1.0}, EdgeSplit::UniformSplit),
                    std::invalid_argument);
    CHECK_NOTHROW(edges_from_qubit(lonely, {1.0, 1.0, 0.0}, EdgeSplit::UniformSplit));
}

TEST_CASE("weight vector files") {
    const std::string path = "weights_tmp.txt";
    const QubitWeights w(std::vector<double>{-1.25, 0.0, 3.5e-3, 7.0});
    save_weights(w, path);
    const QubitWeights back = load_weights(path, 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(back[i] == w[i]);
    CHECK_THROWS_AS(load_weights(path, 5), std::runtime_error);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_weights(path, 4), std::runtime_error);
}
