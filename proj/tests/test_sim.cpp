#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "dirdec/code.hpp"
#include "dirdec/directional.hpp"
#include "dirdec/fixtures.hpp"
#include "dirdec/rng.hpp"
#include "dirdec/sim.hpp"

using namespace dirdec;
using Catch::Approx;

TEST_CASE("sample_error") {
    TrialRng rng(101, 0);
    const BitVector none = sample_error(std::vector<double>(20, 0.0), rng);
    CHECK(none.is_zero());
    const BitVector all = sample_error(std::vector<double>(20, 1.0), rng);
    CHECK(all.weight() == 20);

    // empirical site rates stay within four sigma
    const std::vector<double> p{0.02, 0.1, 0.33, 0.7};
    std::vector<std::size_t> hits(p.size(), 0);
    const std::size_t samples = 100000;
    for (std::size_t t = 0; t < samples; ++t) {
        TrialRng r(424242, t);
        const BitVector e = sample_error(p, r);
        for (std::size_t i = 0; i < p.size(); ++i)
            if (e.get(i)) ++hits[i];
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double mean = static_cast<double>(hits[i]) / samples;
        const double sigma = std::sqrt(p[i] * (1.0 - p[i]) / samples);
        CHECK(std::abs(mean - p[i]) <= 4.0 * sigma);
    }
}

TEST_CASE("is_logical_failure") {
    const CssCode t3 = toric(3);
    TrialRng rng(103, 0);
    const BitVector e = random_bitvector(rng, t3.n);

    CHECK_FALSE(is_logical_failure(t3, Side::XErrors, e, e));

    BitVector stab_shift = e;
    stab_shift.xor_with(t3.h_x.row(2));
    CHECK_FALSE(is_logical_failure(t3, Side::XErrors, e, stab_shift));

    // a column of horizontal edges is a nontrivial logical: in ker(H_Z),
    // outside rowsp(H_X)
    BitVector loop(t3.n);
    for (std::size_t y = 0; y < 3; ++y) loop.set(y * 3 + 0, true);  // idx_h(0, y)
    CHECK(t3.h_z.mul_vec(loop).is_zero());
    CHECK_FALSE(in_rowspace(t3.h_x, loop));
    BitVector wrong = e;
    wrong.xor_with(loop);
    CHECK(is_logical_failure(t3, Side::XErrors, e, wrong));

    // mismatched syndromes are a bug, not a decode result
    BitVector other = e;
    other.flip(0);
    if (t3.h_z.mul_vec(other) != t3.h_z.mul_vec(e))
        CHECK_THROWS_AS(is_logical_failure(t3, Side::XErrors, e, other), std::logic_error);
}

TEST_CASE("failure judge agrees with the logical-loop oracle") {
    // an X-side residual is a failure exactly when it pairs oddly with one of
    // the two Z-side loops; checked over the whole kernel of H_Z
    const CssCode t3 = toric(3);
    BitVector loop_h(t3.n), loop_v(t3.n);
    for (std::size_t x = 0; x < 3; ++x) loop_h.set(0 * 3 + x, true);      // idx_h(x, 0)
    for (std::size_t y = 0; y < 3; ++y) loop_v.set(9 + y * 3 + 0, true);  // idx_v(0, y)
    REQUIRE(t3.h_x.mul_vec(loop_h).is_zero());
    REQUIRE(t3.h_x.mul_vec(loop_v).is_zero());
    REQUIRE_FALSE(in_rowspace(t3.h_z, loop_h));
    REQUIRE_FALSE(in_rowspace(t3.h_z, loop_v));

    const LogicalJudge judge(t3);
    const BitVector zero(t3.n);
    std::size_t checked = 0;
    iterate_affine_space(zero, nullspace_basis(t3.h_z), [&](const BitVector& residual) {
        const bool oracle = residual.dot(loop_h) || residual.dot(loop_v);
        CHECK(judge.failed(Side::XErrors, zero, residual) == oracle);
        ++checked;
    });
    CHECK(checked == 1024);
}

TEST_CASE("run_trial") {
    const CssCode t3 = toric(3);
    const QubitWeights w = orientation_field(t3, Axis::X);
    DecoderConfig cfg;
    cfg.w = w;

    const ChannelModel quiet = make_channel(w, 0.0, 0.0);
    const PriorModel prior = tilt_priors(w, 0.01, 0.0);
    const auto [fx, fz] = run_trial(t3, quiet, prior, prior, cfg, 7, 0);
    CHECK_FALSE(fx);
    CHECK_FALSE(fz);

    // determinism contract
    const ChannelModel noisy = make_channel(w, 0.08, 1.0);
    const PriorModel tilted = tilt_priors(w, 0.08, 1.0);
    const auto a = run_trial(t3, noisy, tilted, tilted, cfg, 12345, 77);
    const auto b = run_trial(t3, noisy, tilted, tilted, cfg, 12345, 77);
    CHECK(a == b);

    // above-threshold noise produces failures
    const ChannelModel loud = make_channel(w, 0.3, 0.0);
    const PriorModel ploud = tilt_priors(w, 0.3, 0.0);
    std::size_t fails = 0;
    CssDecoder dec(t3, cfg);
    const LogicalJudge judge(t3);
    for (std::uint64_t t = 0; t < 1000; ++t) {
        TrialRng rng(5150, t);
        const auto [x, z] = run_trial(t3, loud, ploud, ploud, dec, judge, rng);
        fails += (x || z);
    }
    CHECK(fails > 0);
}

TEST_CASE("monte_carlo") {
    const CssCode t3 = toric(3);
    const QubitWeights w = orientation_field(t3, Axis::X);
    DecoderConfig cfg;
    cfg.w = w;

    const SimResult quiet = monte_carlo(t3, make_channel(w, 0.0, 0.0), 0.0, cfg, 10, 9);
    CHECK(quiet.trials == 10);
    CHECK(quiet.fail_any == 0);
    CHECK(quiet.ler == 0.0);
    CHECK(quiet.ci_low == 0.0);

    // identical results for any worker split
    const ChannelModel ch = make_channel(w, 0.1, 1.0);
    const SimResult one = monte_carlo(t3, ch, 1.0, cfg, 400, 31337, 1);
    const SimResult three = monte_carlo(t3, ch, 1.0, cfg, 400, 31337, 3);
    CHECK(one.fail_x == three.fail_x);
    CHECK(one.fail_z == three.fail_z);
    CHECK(one.fail_any == three.fail_any);
    CHECK(one.ler == three.ler);
    CHECK(one.ci_low == three.ci_low);
    CHECK(one.ci_high == three.ci_high);
    CHECK(one.config_digest == three.config_digest);

    CHECK(one.fail_any <= one.trials);
    CHECK(one.ci_low <= one.ler);
    CHECK(one.ler <= one.ci_high);
}

TEST_CASE("wilson interval") {
    const auto [lo0, hi0] = wilson_interval(0, 50);
    CHECK(lo0 == 0.0);
    CHECK(hi0 > 0.0);
    const auto [lo1, hi1] = wilson_interval(50, 50);
    CHECK(hi1 == 1.0);
    CHECK(lo1 < 1.0);

    // coverage across 1000 synthetic binomial experiments at several rates
    const double rates[] = {0.01, 0.05, 0.2, 0.5};
    std::size_t covered = 0, total = 0;
    for (double p : rates) {
        for (std::size_t rep = 0; rep < 250; ++rep) {
            TrialRng rng(777 + static_cast<std::uint64_t>(p * 1000), rep);
            const std::size_t n = 500;
            std::size_t fails = 0;
            for (std::size_t t = 0; t < n; ++t) fails += rng.bernoulli(p);
            const auto [lo, hi] = wilson_interval(fails, n);
            ++total;
            if (lo <= p && p <= hi) ++covered;
        }
    }
    CHECK(total == 1000);
    CHECK(static_cast<double>(covered) / static_cast<double>(total) >= 0.93);
}

TEST_CASE("sweep") {
    const CssCode t3 = toric(3);
    const QubitWeights w = orientation_field(t3, Axis::X);
    DecoderConfig cfg;
    cfg.w = w;

    // single-point sweep reproduces monte_carlo exactly
    const std::string path = "sweep_tmp.csv";
    const auto rows = sweep(t3, {{0.1, 1.0, 1.0}}, cfg, 200, 5, path);
    const SimResult direct = monte_carlo(t3, make_channel(w, 0.1, 1.0), 1.0, cfg, 200, 5);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].fail_any == direct.fail_any);
    CHECK(rows[0].config_digest == direct.config_digest);

    std::ifstream in(path);
    std::string header, row, extra;
    REQUIRE(std::getline(in, header));
    CHECK(header == kSweepCsvHeader);
    REQUIRE(std::getline(in, row));
    CHECK(row.rfind("toric-3,18,2,0.1,1,1,200,", 0) == 0);
    CHECK_FALSE(std::getline(in, extra));
    in.close();
    std::remove(path.c_str());

    // the failure rate rises with the physical rate, far beyond CI overlap
    const auto two = sweep(t3, {{0.01, 0.0, 0.0}, {0.25, 0.0, 0.0}}, cfg, 400, 99, "");
    CHECK(two[0].ler <= two[1].ler);

    CHECK_THROWS_AS(sweep(t3, {}, cfg, 10, 1, ""), std::invalid_argument);
    CHECK_THROWS_AS(sweep(t3, {{0.1, 0.0, 0.0}}, cfg, 10, 1, "/nonexistent_dir/x.csv"),
                    std::runtime_error);
}
