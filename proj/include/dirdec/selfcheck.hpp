#pragma once

// Verification suites for the identities and bounds the toolkit relies on.
// Each suite runs a deterministic set of randomized cases and reports a case
// and failure count; the CLI `verify` subcommand and the acceptance harness
// both drive these.

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dirdec/code.hpp"
#include "dirdec/decoder.hpp"
#include "dirdec/directional.hpp"
#include "dirdec/enumerator.hpp"
#include "dirdec/fixtures.hpp"
#include "dirdec/gf2.hpp"
#include "dirdec/rng.hpp"

namespace dirdec {

struct SuiteResult {
    std::string name;
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::string note;
    bool passed() const { return failures == 0; }
};

struct SelfCheckOptions {
    std::uint64_t seed = 20250810;
    std::size_t random_codes = 20;       // small CSS fixtures (n <= 14)
    std::size_t weight_trials = 20;      // random weight vectors per code
    std::size_t macwilliams_cases = 50;  // random subcodes, dim <= 12
    std::size_t gradient_fixtures = 20;
    std::size_t convexity_triples = 100;
    std::size_t forest_cases = 50;  // tree decoding fixtures, n <= 12
    std::size_t coset_codes = 20;   // coset-posterior fixtures, n <= 12
    std::size_t syndromes_per_code = 8;  // cap for per-syndrome sweeps on random codes
};

namespace selfcheck_detail {

// Fixture codes shared by the enumerator suites: toric(3) plus the
// deterministic random family.
inline std::vector<CssCode> fixture_codes(const SelfCheckOptions& opt) {
    std::vector<CssCode> codes;
    codes.push_back(toric(3));
    TrialRng rng(opt.seed, 101);
    for (std::size_t i = 0; i < opt.random_codes; ++i) codes.push_back(random_css_code(rng, 6, 14));
    return codes;
}

inline std::vector<BitVector> syndromes_for(const CssCode& code, std::size_t cap) {
    std::vector<BitVector> all = all_consistent_syndromes(code.h_z);
    if (all.size() > cap) all.resize(cap);
    return all;
}

}  // namespace selfcheck_detail

// Edge-wise cost summation equals the per-qubit reduction followed by the
// inner product, exactly.
inline SuiteResult suite_edge_reduction(const SelfCheckOptions& opt = {}) {
    SuiteResult res{"edge-to-qubit reduction", 0, 0, ""};
    TrialRng rng(opt.seed, 202);
    std::vector<CssCode> codes;
    codes.push_back(toric(3));
    for (std::size_t i = 0; i < 5; ++i) codes.push_back(random_css_code(rng, 6, 12));
    for (const CssCode& code : codes) {
        for (std::size_t trial = 0; trial < 20; ++trial) {
            EdgeWeights edges(code);
            for (std::size_t q = 0; q < code.n; ++q) {
                for (const auto& [chk, wt] : edges.x_edges()[q])
                    edges.set_x(q, chk, rng.uniform_in(0.0, 3.0));
                for (const auto& [chk, wt] : edges.z_edges()[q])
                    edges.set_z(q, chk, rng.uniform_in(0.0, 3.0));
            }
            const QubitWeights w = per_qubit_from_edges(edges);
            const BitVector e = random_bitvector(rng, code.n);
            double edge_route = 0.0;
            for (std::size_t q = 0; q < code.n; ++q) {
                if (!e.get(q)) continue;
                double qsum = 0.0;
                for (const auto& [chk, wt] : edges.x_edges()[q]) qsum += wt;
                for (const auto& [chk, wt] : edges.z_edges()[q]) qsum += wt;
                edge_route += qsum;
            }
            ++res.cases;
            if (edge_route != directional_cost(w, e)) ++res.failures;
        }
    }
    return res;
}

// Standardized fields have mean 0 and sample variance 1; constant inputs
// collapse to the zero field.
inline SuiteResult suite_standardization(const SelfCheckOptions& opt = {}) {
    SuiteResult res{"standardization moments", 0, 0, ""};
    TrialRng rng(opt.seed, 203);
    const auto check = [&res](const QubitWeights& w) {
        double mean = 0.0;
        for (double v : w.values) mean += v;
        mean /= static_cast<double>(w.size());
        double var = 0.0;
        for (double v : w.values) var += (v - mean) * (v - mean);
        var /= static_cast<double>(w.size() - 1);
        ++res.cases;
        if (std::abs(mean) > 1e-12 || std::abs(var - 1.0) > 1e-12) ++res.failures;
    };
    for (std::size_t trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + rng.below(49);
        check(standardize(random_reals(rng, n, -10.0, 10.0)));
    }
    check(orientation_field(toric(9), Axis::X));
    check(orientation_field(toric(9), Axis::Y));
    // degenerate input
    ++res.cases;
    const QubitWeights flat = standardize(std::vector<double>(7, 3.25));
    for (double v : flat.values)
        if (v != 0.0) {
            ++res.failures;
            break;
        }
    return res;
}

// Every syndrome splits into exactly 2^k classes and the unbiased enumerator
// equals that count exactly.
inline SuiteResult suite_zero_beta_enumerator(const SelfCheckOptions& opt = {}) {
    SuiteResult res{"class count and unbiased enumerator", 0, 0, ""};
    TrialRng rng(opt.seed, 204);
    for (const CssCode& code : selfcheck_detail::fixture_codes(opt)) {
        const QubitWeights w = random_weights(rng, code.n, 0.0, 2.0);
        const auto syndromes = selfcheck_detail::syndromes_for(
            code, code.name == "toric-3" ? 256 : opt.syndromes_per_code);
        for (const BitVector& s : syndromes) {
            const ClassScoreTable table = class_score_table(code, s, w);
            const double expected = static_cast<double>(std::uint64_t(1) << code.k);
            const EnumeratorReport rep = directional_enumerator(table, 0.0);
            ++res.cases;
            if (table.reps.size() != (std::size_t(1) << code.k) || rep.value != expected)
                ++res.failures;
        }
    }
    return res;
}

// Counting classes below a score threshold is dominated by the rescaled
// enumerator at every bias.
inline SuiteResult suite_tail_bound(const SelfCheckOptions& opt = {}) {
    SuiteResult res{"enumerator tail bound", 0, 0, ""};
    TrialRng rng(opt.seed, 205);
    const double betas[] = {0.1, 0.5, 1.0, 2.0, 4.0};
    for (const CssCode& code : selfcheck_detail::fixture_codes(opt)) {
        const QubitWeights w = random_weights(rng, code.n, 0.0, 2.0);
        const auto syndromes = selfcheck_detail::syndromes_for(
            code, code.name == "toric-3" ? 256 : opt.syndromes_per_code);
        for (const BitVector& s : syndromes) {
            const ClassScoreTable table = class_score_table(code, s, w);
            for (double beta : betas) {
                const EnumeratorReport rep = directional_enumerator(table, beta);
                for (double t : table.scores) {
                    const std::size_t m_le = tail_count(table, t);
                    ++res.cases;
                    if (std::log(static_cast<double>(m_le)) >
                        beta * t + std::log(rep.value) + 1e-9)
                        ++res.failures;
                }
            }
        }
    }
    return res;
}

// Weighted stabilizer/logical distances sit between the Hamming distances
// scaled by the smallest and largest weight.
inline SuiteResult suite_distance_sandwich(const SelfCheckOptions& opt = {}) {
    SuiteResult res{"directional distance sandwich", 0, 0, ""};
    TrialRng rng(opt.seed, 206);
    for (const CssCode& code : selfcheck_detail::fixture_codes(opt)) {
        const CodeDistances dist = distances(code, code.n);
        for (std::size_t trial = 0; trial < opt.weight_trials; ++trial) {
            const QubitWeights w = random_weights(rng, code.n, 0.0, 3.0);
            double w_min = w[0], w_max = w[0];
            for (double v : w.values) {
                w_min = std::min(w_min, v);
                w_max = std::max(w_max, v);
            }
            const DirectionalDistances dd = directional_distances(code, w);
            const double slack = 1e-9;
            ++res.cases;
            const bool stab_ok = dd.stabilizer >= w_min * dist.d_s - slack &&
                                 dd.stabilizer <= w_max * dist.d_s + slack;
            const bool log_ok =
                dd.logical >= w_min * dist.d - slack && dd.logical <= w_max * dist.d + slack;
            if (!stab_ok || !log_ok) ++res.failures;
        }
    }
    return res;
}

// Admissible-class counting: |admissible| = 2^k f <= 2^(n-2d+2) f under the
// score-threshold rule, alongside the Singleton-type bound k <= n-2d+2.
inline SuiteResult suite_degeneracy_bound(const SelfCheckOptions& opt = {}) {
    SuiteResult res{"degeneracy count bound", 0, 0, ""};
    TrialRng rng(opt.seed, 207);
    for (const CssCode& code : selfcheck_detail::fixture_codes(opt)) {
        const CodeDistances dist = distances(code, code.n);
        const long singleton_exp =
            static_cast<long>(code.n) - 2 * static_cast<long>(dist.d) + 2;
        ++res.cases;
        if (static_cast<long>(code.k) > singleton_exp) {
            ++res.failures;
            continue;
        }
        const QubitWeights w = random_weights(rng, code.n, 0.0, 2.0);
        const auto syndromes = selfcheck_detail::syndromes_for(code, 4);
        for (const BitVector& s : syndromes) {
            const ClassScoreTable table = class_score_table(code, s, w);
            double lo = table.scores[0], hi = table.scores[0];
            for (double v : table.scores) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            for (std::size_t ti = 0; ti < 10; ++ti) {
                const double t =
                    lo - 0.5 + (hi - lo + 1.0) * static_cast<double>(ti) / 9.0;
                const double f = admissible_fraction(table, t);
                const double admissible = static_cast<double>(tail_count(table, t));
                const double classes_bound = std::ldexp(f, static_cast<int>(code.k));
                const double singleton_bound = std::ldexp(f, static_cast<int>(singleton_exp));
                ++res.cases;
                if (admissible > classes_bound * (1.0 + 1e-9) + 1e-12 ||
                    classes_bound > singleton_bound * (1.0 + 1e-9) + 1e-12 ||
                    f < 0.0 || f > 1.0)
                    ++res.failures;
            }
        }
    }
    return res;
}

// Direct subcode summation agrees with the dual-form transform evaluation.
inline SuiteResult suite_macwilliams(const SelfCheckOptions& opt = {}) {
    SuiteResult res{"macwilliams dual agreement", 0, 0, ""};
    TrialRng rng(opt.seed, 208);
    const double alphas[] = {0.1, 0.5, 1.0};
    for (std::size_t i = 0; i < opt.macwilliams_cases; ++i) {
        const std::size_t n = 4 + rng.below(11);  // 4..14
        const std::size_t dim = 1 + rng.below(std::min<std::size_t>(12, n - 1));
        const BinaryMatrix basis = random_subspace(rng, n, dim);
        const QubitWeights w = random_weights(rng, n, -3.0, 3.0);
        const double alpha = alphas[i % 3];
        const double direct = global_enumerator_basis(basis, w, alpha);
        const double dual = macwilliams_enumerator_basis(basis, w, alpha);
        ++res.cases;
        if (std::abs(direct - dual) / direct > 1e-10) ++res.failures;
    }
    return res;
}

// Analytic Gibbs gradient of the log enumerator against central finite
// differences, measured relative to the gradient's largest component.
inline SuiteResult suite_gradient(const SelfCheckOptions& opt = {}) {
    SuiteResult res{"gibbs gradient identity", 0, 0, ""};
    TrialRng rng(opt.seed, 209);
    const double alphas[] = {0.1, 0.5, 1.0};
    const double step = 1e-5;
    for (std::size_t i = 0; i < opt.gradient_fixtures; ++i) {
        const std::size_t n = 6 + rng.below(5);  // 6..10
        const std::size_t dim = 2 + rng.below(std::min<std::size_t>(7, n - 3));
        const BinaryMatrix basis = random_subspace(rng, n, dim);
        QubitWeights w = random_weights(rng, n, -1.0, 1.0);
        const double alpha = alphas[i % 3];
        const std::vector<double> grad = enumerator_gradient_basis(basis, w, alpha);
        double grad_scale = 1e-12;
        for (double g : grad) grad_scale = std::max(grad_scale, std::abs(g));
        double worst = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            QubitWeights wp = w, wm = w;
            wp.values[j] += step;
            wm.values[j] -= step;
            const double fd = (std::log(global_enumerator_basis(basis, wp, alpha)) -
                               std::log(global_enumerator_basis(basis, wm, alpha))) /
                              (2.0 * step);
            worst = std::max(worst, std::abs(fd - grad[j]) / grad_scale);
        }
        ++res.cases;
        if (worst > 1e-6) ++res.failures;
    }
    return res;
}

// log of the global enumerator is convex in the weights and changes by at
// most alpha * n * |delta|_inf under perturbation.
inline SuiteResult suite_convexity_lipschitz(const SelfCheckOptions& opt = {}) {
    SuiteResult res{"log-enumerator convexity and lipschitz", 0, 0, ""};
    TrialRng rng(opt.seed, 210);
    const double alphas[] = {0.1, 0.5, 1.0};
    for (std::size_t i = 0; i < opt.convexity_triples; ++i) {
        const std::size_t n = 5 + rng.below(8);  // 5..12
        const std::size_t dim = 1 + rng.below(std::min<std::size_t>(8, n - 1));
        const BinaryMatrix basis = random_subspace(rng, n, dim);
        const double alpha = alphas[i % 3];
        const QubitWeights w1 = random_weights(rng, n, -2.0, 2.0);
        const QubitWeights w2 = random_weights(rng, n, -2.0, 2.0);
        const double lambda = rng.uniform_in(0.05, 0.95);
        QubitWeights mix = QubitWeights::zeros(n);
        for (std::size_t j = 0; j < n; ++j)
            mix.values[j] = lambda * w1[j] + (1.0 - lambda) * w2[j];
        const double lg_mix = std::log(global_enumerator_basis(basis, mix, alpha));
        const double lg_1 = std::log(global_enumerator_basis(basis, w1, alpha));
        const double lg_2 = std::log(global_enumerator_basis(basis, w2, alpha));
        ++res.cases;
        if (lg_mix > lambda * lg_1 + (1.0 - lambda) * lg_2 + 1e-10) ++res.failures;

        std::vector<double> delta = random_reals(rng, n, -0.5, 0.5);
        double dmax = 0.0;
        QubitWeights shifted = w1;
        for (std::size_t j = 0; j < n; ++j) {
            shifted.values[j] += delta[j];
            dmax = std::max(dmax, std::abs(delta[j]));
        }
        const double lg_shift = std::log(global_enumerator_basis(basis, shifted, alpha));
        ++res.cases;
        if (std::abs(lg_shift - lg_1) > alpha * static_cast<double>(n) * dmax + 1e-10)
            ++res.failures;
    }
    return res;
}

// On forest factor graphs with unit scale, min-sum BP attains the brute-force
// minimum weighted cost on every consistent syndrome.
inline SuiteResult suite_tree_map(const SelfCheckOptions& opt = {}) {
    SuiteResult res{"tree map exactness", 0, 0, ""};
    TrialRng rng(opt.seed, 211);
    for (std::size_t i = 0; i < opt.forest_cases; ++i) {
        const BinaryMatrix h = random_forest_matrix(rng, 4, 12);
        const std::size_t n = h.cols(), m = h.rows();
        std::vector<double> llr(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double p = rng.uniform_in(0.02, 0.45);
            llr[j] = std::log((1.0 - p) / p);
        }
        // brute force: best cost per syndrome over the whole error space
        std::map<std::uint64_t, double> best;
        for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
            BitVector e(n);
            double cost = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if ((mask >> j) & 1) {
                    e.set(j, true);
                    cost += llr[j];
                }
            const std::uint64_t key = h.mul_vec(e).words().empty() ? 0 : h.mul_vec(e).words()[0];
            auto it = best.find(key);
            if (it == best.end() || cost < it->second) best[key] = cost;
        }
        MinSumDecoder bp(h);
        for (const auto& [key, min_cost] : best) {
            BitVector s(m);
            for (std::size_t a = 0; a < m; ++a)
                if ((key >> a) & 1) s.set(a, true);
            const BpResult r = bp.run(s, llr, 2 * (n + m), 1.0);
            double cost = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if (r.hard.get(j)) cost += llr[j];
            ++res.cases;
            if (!r.converged || std::abs(cost - min_cost) > 1e-9) ++res.failures;
        }
    }
    return res;
}

// Coset posteriors from the log-domain oracle match direct probability
// summation over explicitly grouped cosets.
inline SuiteResult suite_coset_posterior(const SelfCheckOptions& opt = {}) {
    SuiteResult res{"coset posterior agreement", 0, 0, ""};
    TrialRng rng(opt.seed, 212);
    for (std::size_t i = 0; i < opt.coset_codes; ++i) {
        const CssCode code = random_css_code(rng, 6, 12);
        PriorModel prior;
        prior.p0 = 0.2;
        prior.p = random_reals(rng, code.n, 0.05, 0.4);
        prior.llr.resize(code.n);
        for (std::size_t j = 0; j < code.n; ++j)
            prior.llr[j] = std::log((1.0 - prior.p[j]) / prior.p[j]);

        const auto syndromes = selfcheck_detail::syndromes_for(code, 4);
        const RowspaceMembership stab(code.h_x);
        for (const BitVector& s : syndromes) {
            const CosetPosterior oracle = map_oracle(code, Side::XErrors, s, prior);

            // direct route: group every solution by explicit coset membership
            std::vector<BitVector> direct_reps;
            std::vector<double> direct_prob;
            const auto e0 = solve(code.h_z, s);
            iterate_affine_space(*e0, nullspace_basis(code.h_z), [&](const BitVector& v) {
                double prob = 1.0;
                for (std::size_t j = 0; j < code.n; ++j)
                    prob *= v.get(j) ? prior.p[j] : 1.0 - prior.p[j];
                BitVector key = v;
                for (std::size_t c = 0; c < direct_reps.size(); ++c) {
                    BitVector diff = key;
                    diff.xor_with(direct_reps[c]);
                    if (stab.contains(diff)) {
                        direct_prob[c] += prob;
                        return;
                    }
                }
                direct_reps.push_back(key);
                direct_prob.push_back(prob);
            });
            double total = 0.0;
            for (double p : direct_prob) total += p;

            ++res.cases;
            if (direct_reps.size() != oracle.posteriors.size()) {
                ++res.failures;
                continue;
            }
            bool ok = true;
            double psum = 0.0;
            for (std::size_t c = 0; c < oracle.reps.size(); ++c) {
                psum += oracle.posteriors[c];
                std::size_t match = direct_reps.size();
                for (std::size_t d = 0; d < direct_reps.size(); ++d) {
                    BitVector diff = oracle.reps[c];
                    diff.xor_with(direct_reps[d]);
                    if (stab.contains(diff)) {
                        match = d;
                        break;
                    }
                }
                if (match == direct_reps.size()) {
                    ok = false;
                    break;
                }
                const double expected = direct_prob[match] / total;
                if (std::abs(oracle.posteriors[c] - expected) >
                    1e-12 * std::max(expected, 1e-300))
                    ok = false;
            }
            if (std::abs(psum - 1.0) > 1e-9) ok = false;
            if (!ok) ++res.failures;
        }
    }
    return res;
}

inline std::vector<SuiteResult> run_selfchecks(const SelfCheckOptions& opt = {}) {
    return {
        suite_edge_reduction(opt),      suite_standardization(opt),
        suite_zero_beta_enumerator(opt), suite_tail_bound(opt),
        suite_distance_sandwich(opt),   suite_degeneracy_bound(opt),
        suite_macwilliams(opt),         suite_gradient(opt),
        suite_convexity_lipschitz(opt), suite_tree_map(opt),
        suite_coset_posterior(opt),
    };
}

inline int selfcheck_exit_code(const std::vector<SuiteResult>& results) {
    for (const SuiteResult& r : results)
        if (!r.passed()) return 3;
    return 0;
}

}  // namespace dirdec
