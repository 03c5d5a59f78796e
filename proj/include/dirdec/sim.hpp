#pragma once

// Code-capacity Monte Carlo: tilted Pauli channels, per-trial seeded
// sampling, both-side decoding, logical-failure judging against the
// stabilizer rowspaces, and Wilson-interval aggregation. Trials are
// independent; results are a pure function of (code, channel, config,
// trials, master seed) regardless of worker count.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "dirdec/code.hpp"
#include "dirdec/decoder.hpp"
#include "dirdec/directional.hpp"
#include "dirdec/gf2.hpp"
#include "dirdec/rng.hpp"

namespace dirdec {

struct ChannelModel {
    double p0 = 0.0;
    double beta_chan = 0.0;
    QubitWeights w;
    std::vector<double> p_x;  // X-flip probability per qubit
    std::vector<double> p_z;  // Z-flip probability per qubit
};

// X and Z errors share the same tilted marginal law. p0 = 0 is allowed and
// yields a noiseless channel.
inline ChannelModel make_channel(const QubitWeights& w, double p0, double beta_chan) {
    ChannelModel ch;
    ch.p0 = p0;
    ch.beta_chan = beta_chan;
    ch.w = w;
    if (p0 == 0.0) {
        ch.p_x.assign(w.size(), 0.0);
        ch.p_z.assign(w.size(), 0.0);
    } else {
        const PriorModel tilted = tilt_priors(w, p0, beta_chan);
        ch.p_x = tilted.p;
        ch.p_z = tilted.p;
    }
    return ch;
}

inline BitVector sample_error(const std::vector<double>& p, TrialRng& rng) {
    BitVector e(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] < 0.0 || p[i] > 1.0)
            throw std::invalid_argument("sample_error: probability out of range");
        if (rng.uniform() < p[i]) e.set(i, true);
    }
    return e;
}

// Residual-in-rowspace failure test with the stabilizer rref cached.
class LogicalJudge {
  public:
    explicit LogicalJudge(const CssCode& code)
        : h_z_(&code.h_z), h_x_(&code.h_x), stab_x_(code.h_x), stab_z_(code.h_z) {}

    bool failed(Side side, const BitVector& error, const BitVector& estimate) const {
        const BinaryMatrix& h = side == Side::XErrors ? *h_z_ : *h_x_;
        if (h.mul_vec(error) != h.mul_vec(estimate))
            throw std::logic_error("is_logical_failure: error and estimate disagree on the syndrome");
        BitVector residual = error;
        residual.xor_with(estimate);
        const RowspaceMembership& stab = side == Side::XErrors ? stab_x_ : stab_z_;
        return !stab.contains(residual);
    }

  private:
    const BinaryMatrix* h_z_;
    const BinaryMatrix* h_x_;
    RowspaceMembership stab_x_, stab_z_;
};

inline bool is_logical_failure(const CssCode& code, Side side, const BitVector& error,
                               const BitVector& estimate) {
    return LogicalJudge(code).failed(side, error, estimate);
}

// One trial: sample and decode an X error, then a Z error, from the same
// per-trial stream. Deterministic given (master seed, trial index).
inline std::pair<bool, bool> run_trial(const CssCode& code, const ChannelModel& channel,
                                       const PriorModel& prior_x, const PriorModel& prior_z,
                                       CssDecoder& decoder, const LogicalJudge& judge,
                                       TrialRng& rng) {
    const BitVector e_x = sample_error(channel.p_x, rng);
    const BitVector s_z = code.h_z.mul_vec(e_x);
    const DecodeOutcome out_x = decoder.decode(Side::XErrors, s_z, prior_x);
    const bool fx = judge.failed(Side::XErrors, e_x, out_x.estimate);

    const BitVector e_z = sample_error(channel.p_z, rng);
    const BitVector s_x = code.h_x.mul_vec(e_z);
    const DecodeOutcome out_z = decoder.decode(Side::ZErrors, s_x, prior_z);
    const bool fz = judge.failed(Side::ZErrors, e_z, out_z.estimate);
    return {fx, fz};
}

inline std::pair<bool, bool> run_trial(const CssCode& code, const ChannelModel& channel,
                                       const PriorModel& prior_x, const PriorModel& prior_z,
                                       const DecoderConfig& cfg, std::uint64_t master_seed,
                                       std::uint64_t trial_index) {
    CssDecoder decoder(code, cfg);
    const LogicalJudge judge(code);
    TrialRng rng(master_seed, trial_index);
    return run_trial(code, channel, prior_x, prior_z, decoder, judge, rng);
}

struct SimResult {
    std::uint64_t trials = 0;
    std::uint64_t fail_x = 0;
    std::uint64_t fail_z = 0;
    std::uint64_t fail_any = 0;
    double ler = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint64_t seed = 0;
    std::string config_digest;
};

// 95% Wilson score interval for fails successes out of trials.
inline std::pair<double, double> wilson_interval(std::uint64_t fails, std::uint64_t trials) {
    if (trials == 0) return {0.0, 1.0};
    const double z = 1.959963984540054;
    const double nt = static_cast<double>(trials);
    const double phat = static_cast<double>(fails) / nt;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nt;
    const double center = (phat + z2 / (2.0 * nt)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / nt + z2 / (4.0 * nt * nt)) / denom;
    double lo = center - half, hi = center + half;
    // the interval is exactly one-sided at the extremes
    if (fails == 0) lo = 0.0;
    if (fails == trials) hi = 1.0;
    if (lo < 0.0) lo = 0.0;
    if (hi > 1.0) hi = 1.0;
    return {lo, hi};
}

namespace detail {

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string shortest_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace detail

inline std::string config_digest(const CssCode& code, const ChannelModel& channel,
                                 double beta_dec, const DecoderConfig& cfg, std::uint64_t trials,
                                 std::uint64_t master_seed) {
    std::string s = code.name + ";n=" + std::to_string(code.n) +
                    ";p0=" + detail::shortest_double(channel.p0) +
                    ";bc=" + detail::shortest_double(channel.beta_chan) +
                    ";bd=" + detail::shortest_double(beta_dec) +
                    ";it=" + std::to_string(cfg.bp_iters) +
                    ";sc=" + detail::shortest_double(cfg.ms_scale) +
                    ";osd=" + std::to_string(cfg.osd_order) +
                    ";rr=" + std::to_string(cfg.rank_rule == RankRule::LlrThenDirectional) +
                    ";tr=" + std::to_string(trials) + ";seed=" + std::to_string(master_seed);
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(detail::fnv1a64(s)));
    return std::string(buf);
}

// Aggregates run_trial over trial indices 0..trials-1. Worker threads split
// the index range; failure counts are summed, so any worker count produces
// the same SimResult.
inline SimResult monte_carlo(const CssCode& code, const ChannelModel& channel, double beta_dec,
                             const DecoderConfig& cfg, std::uint64_t trials,
                             std::uint64_t master_seed, std::size_t workers = 0,
                             std::atomic<std::uint64_t>* progress = nullptr) {
    if (trials < 1) throw std::invalid_argument("monte_carlo: need at least one trial");
    // a noiseless channel still needs a finite prior for the decoder
    const double prior_p0 = channel.p0 > 0.0 ? channel.p0 : kPriorFloor;
    const PriorModel prior = tilt_priors(channel.w, prior_p0, beta_dec);

    if (workers == 0) workers = std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = std::min<std::size_t>(workers, trials);

    std::vector<std::uint64_t> fx(workers, 0), fz(workers, 0), fa(workers, 0);
    const LogicalJudge judge(code);
    const auto body = [&](std::size_t wi, std::uint64_t lo, std::uint64_t hi) {
        CssDecoder decoder(code, cfg);
        for (std::uint64_t t = lo; t < hi; ++t) {
            TrialRng rng(master_seed, t);
            const auto [failed_x, failed_z] =
                run_trial(code, channel, prior, prior, decoder, judge, rng);
            fx[wi] += failed_x;
            fz[wi] += failed_z;
            fa[wi] += failed_x || failed_z;
            if (progress) progress->fetch_add(1, std::memory_order_relaxed);
        }
    };

    if (workers == 1) {
        body(0, 0, trials);
    } else {
        std::vector<std::thread> pool;
        const std::uint64_t chunk = (trials + workers - 1) / workers;
        for (std::size_t wi = 0; wi < workers; ++wi) {
            const std::uint64_t lo = wi * chunk;
            const std::uint64_t hi = std::min<std::uint64_t>(trials, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(body, wi, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    SimResult result;
    result.trials = trials;
    for (std::size_t wi = 0; wi < workers; ++wi) {
        result.fail_x += fx[wi];
        result.fail_z += fz[wi];
        result.fail_any += fa[wi];
    }
    result.ler = static_cast<double>(result.fail_any) / static_cast<double>(trials);
    const auto [lo, hi] = wilson_interval(result.fail_any, trials);
    result.ci_low = lo;
    result.ci_high = hi;
    result.seed = master_seed;
    result.config_digest = config_digest(code, channel, beta_dec, cfg, trials, master_seed);
    return result;
}

struct SweepPoint {
    double p0 = 0.0;
    double beta_chan = 0.0;
    double beta_dec = 0.0;
};

inline constexpr const char* kSweepCsvHeader =
    "code,n,k,p0,beta_chan,beta_dec,trials,fail_x,fail_z,fail_any,ler,ci_low,ci_high,master_seed";

inline std::string sweep_csv_row(const CssCode& code, const SweepPoint& pt,
                                 const SimResult& res) {
    std::string row;
    row += code.name;
    row += ',' + std::to_string(code.n);
    row += ',' + std::to_string(code.k);
    row += ',' + detail::shortest_double(pt.p0);
    row += ',' + detail::shortest_double(pt.beta_chan);
    row += ',' + detail::shortest_double(pt.beta_dec);
    row += ',' + std::to_string(res.trials);
    row += ',' + std::to_string(res.fail_x);
    row += ',' + std::to_string(res.fail_z);
    row += ',' + std::to_string(res.fail_any);
    row += ',' + detail::shortest_double(res.ler);
    row += ',' + detail::shortest_double(res.ci_low);
    row += ',' + detail::shortest_double(res.ci_high);
    row += ',' + std::to_string(res.seed);
    return row;
}

// One Monte Carlo run per grid point, written as CSV in grid order.
inline std::vector<SimResult> sweep(const CssCode& code, const std::vector<SweepPoint>& grid,
                                    const DecoderConfig& cfg, std::uint64_t trials,
                                    std::uint64_t master_seed, const std::string& out_path,
                                    std::size_t workers = 0,
                                    std::atomic<std::uint64_t>* progress = nullptr) {
    if (grid.empty()) throw std::invalid_argument("sweep: empty parameter grid");
    std::ofstream out;
    if (!out_path.empty()) {
        out.open(out_path);
        if (!out) throw std::runtime_error("sweep: cannot write " + out_path);
        out << kSweepCsvHeader << '\n';
    }
    std::vector<SimResult> results;
    results.reserve(grid.size());
    for (const SweepPoint& pt : grid) {
        const ChannelModel channel = make_channel(cfg.w, pt.p0, pt.beta_chan);
        SimResult res =
            monte_carlo(code, channel, pt.beta_dec, cfg, trials, master_seed, workers, progress);
        if (out.is_open()) {
            out << sweep_csv_row(code, pt, res) << '\n';
            if (!out) throw std::runtime_error("sweep: write failed for " + out_path);
        }
        results.push_back(std::move(res));
    }
    return results;
}

}  // namespace dirdec
