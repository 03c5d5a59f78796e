#pragma once

// Anisotropic decoding pipeline: exponentially tilted site priors, a
// normalized min-sum belief-propagation decoder with flooding schedule, an
// ordered-statistics post-processor that completes candidates from the BP
// hard decision, and an exhaustive coset-posterior oracle.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dirdec/code.hpp"
#include "dirdec/directional.hpp"
#include "dirdec/enumerator.hpp"
#include "dirdec/gf2.hpp"

namespace dirdec {

inline constexpr double kPriorFloor = 1e-12;
inline constexpr double kPriorCeil = 0.49;
inline constexpr double kScoreTieTol = 1e-9;

struct PriorModel {
    double p0 = 0.0;
    double beta = 0.0;
    std::vector<double> p;    // per-qubit error probability, clamped
    std::vector<double> llr;  // log((1-p_i)/p_i)
    std::size_t clamped_count = 0;

    std::size_t size() const { return p.size(); }
};

// Site probabilities p_i = p0 exp(beta w_i) / mean_j exp(beta w_j), clamped
// into [1e-12, 0.49]. The mean of the unclamped p_i is exactly p0.
inline PriorModel tilt_priors(const QubitWeights& w, double p0, double beta) {
    if (!(p0 > 0.0 && p0 < 0.5))
        throw std::invalid_argument("tilt_priors: p0 must lie in (0, 0.5)");
    if (beta < 0.0) throw std::invalid_argument("tilt_priors: beta must be >= 0");
    const std::size_t n = w.size();
    if (n == 0) throw std::invalid_argument("tilt_priors: empty weight vector");

    double max_exp = -std::numeric_limits<double>::infinity();
    for (double x : w.values) max_exp = std::max(max_exp, beta * x);
    double mean = 0.0;
    for (double x : w.values) mean += std::exp(beta * x - max_exp);
    mean /= static_cast<double>(n);

    PriorModel prior;
    prior.p0 = p0;
    prior.beta = beta;
    prior.p.resize(n);
    prior.llr.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double p = p0 * std::exp(beta * w[i] - max_exp) / mean;
        if (p < kPriorFloor) {
            p = kPriorFloor;
            ++prior.clamped_count;
        } else if (p > kPriorCeil) {
            p = kPriorCeil;
            ++prior.clamped_count;
        }
        prior.p[i] = p;
        prior.llr[i] = std::log((1.0 - p) / p);
    }
    return prior;
}

struct BpResult {
    BitVector hard;
    std::vector<double> posterior;  // per-qubit posterior LLR
    bool converged = false;
    std::size_t iterations = 0;
};

// Normalized min-sum on the Tanner graph of one check matrix. A decoder
// instance owns its message buffers; use one instance per worker thread.
class MinSumDecoder {
  public:
    explicit MinSumDecoder(const BinaryMatrix& h) : m_(h.rows()), n_(h.cols()) {
        chk_off_.assign(m_ + 1, 0);
        for (std::size_t a = 0; a < m_; ++a) chk_off_[a + 1] = chk_off_[a] + h.row_weight(a);
        const std::size_t edges = chk_off_[m_];
        chk_var_.resize(edges);
        std::vector<std::size_t> var_deg(n_, 0);
        {
            std::size_t e = 0;
            for (std::size_t a = 0; a < m_; ++a)
                for (std::size_t v : h.row_support(a)) {
                    chk_var_[e++] = v;
                    ++var_deg[v];
                }
        }
        var_off_.assign(n_ + 1, 0);
        for (std::size_t v = 0; v < n_; ++v) var_off_[v + 1] = var_off_[v] + var_deg[v];
        var_edge_.resize(edges);
        std::vector<std::size_t> fill(var_off_.begin(), var_off_.end() - 1);
        for (std::size_t a = 0; a < m_; ++a)
            for (std::size_t e = chk_off_[a]; e < chk_off_[a + 1]; ++e)
                var_edge_[fill[chk_var_[e]]++] = e;
        v2c_.resize(edges);
        c2v_.resize(edges);
    }

    std::size_t checks() const { return m_; }
    std::size_t vars() const { return n_; }

    BpResult run(const BitVector& syndrome, const std::vector<double>& llr,
                 std::size_t max_iters, double scale) {
        if (syndrome.size() != m_) throw std::invalid_argument("minsum_bp: syndrome length mismatch");
        if (llr.size() != n_) throw std::invalid_argument("minsum_bp: llr length mismatch");
        if (max_iters < 1) throw std::invalid_argument("minsum_bp: need at least one iteration");

        // stand-in magnitude for a min over an empty set (degree-1 checks)
        constexpr double kForced = 1e30;

        for (std::size_t v = 0; v < n_; ++v)
            for (std::size_t t = var_off_[v]; t < var_off_[v + 1]; ++t) v2c_[var_edge_[t]] = llr[v];

        BpResult result;
        result.hard = BitVector(n_);
        result.posterior.assign(n_, 0.0);

        for (std::size_t iter = 1; iter <= max_iters; ++iter) {
            // check-to-variable pass
            for (std::size_t a = 0; a < m_; ++a) {
                bool neg = syndrome.get(a);
                double min1 = kForced, min2 = kForced;
                std::size_t argmin = chk_off_[a];
                for (std::size_t e = chk_off_[a]; e < chk_off_[a + 1]; ++e) {
                    const double msg = v2c_[e];
                    if (msg < 0.0) neg = !neg;
                    const double mag = std::abs(msg);
                    if (mag < min1) {
                        min2 = min1;
                        min1 = mag;
                        argmin = e;
                    } else if (mag < min2) {
                        min2 = mag;
                    }
                }
                for (std::size_t e = chk_off_[a]; e < chk_off_[a + 1]; ++e) {
                    const double mag = (e == argmin) ? min2 : min1;
                    const bool flip = neg ^ (v2c_[e] < 0.0);
                    c2v_[e] = scale * (flip ? -mag : mag);
                }
            }
            // variable pass; exclusion sums are formed directly to avoid
            // cancellation against the forced magnitude
            for (std::size_t v = 0; v < n_; ++v) {
                double total = llr[v];
                for (std::size_t t = var_off_[v]; t < var_off_[v + 1]; ++t)
                    total += c2v_[var_edge_[t]];
                result.posterior[v] = total;
                result.hard.set(v, total < 0.0);
                for (std::size_t t = var_off_[v]; t < var_off_[v + 1]; ++t) {
                    double out = llr[v];
                    for (std::size_t u = var_off_[v]; u < var_off_[v + 1]; ++u)
                        if (u != t) out += c2v_[var_edge_[u]];
                    v2c_[var_edge_[t]] = out;
                }
            }
            result.iterations = iter;
            if (satisfies(result.hard, syndrome)) {
                result.converged = true;
                return result;
            }
        }
        return result;
    }

  private:
    bool satisfies(const BitVector& hard, const BitVector& syndrome) const {
        for (std::size_t a = 0; a < m_; ++a) {
            bool parity = false;
            for (std::size_t e = chk_off_[a]; e < chk_off_[a + 1]; ++e)
                parity ^= hard.get(chk_var_[e]);
            if (parity != syndrome.get(a)) return false;
        }
        return true;
    }

    std::size_t m_, n_;
    std::vector<std::size_t> chk_off_, chk_var_, var_off_, var_edge_;
    std::vector<double> v2c_, c2v_;
};

inline BpResult minsum_bp(const BinaryMatrix& h, const BitVector& s, const std::vector<double>& llr,
                          std::size_t iters, double scale) {
    return MinSumDecoder(h).run(s, llr, iters, scale);
}

enum class RankRule { LlrCost, LlrThenDirectional };

struct DecoderConfig {
    std::size_t bp_iters = 30;
    double ms_scale = 0.8;
    std::size_t osd_order = 2;
    RankRule rank_rule = RankRule::LlrThenDirectional;
    QubitWeights w;  // directional weights used for tie-breaking
};

// Ordered-statistics post-processing. Columns are sorted by |posterior_llr|
// ascending, so the positions BP is least sure about are eliminated first
// and become the solved pivots. The remaining (information) positions keep
// the BP hard decision, and every flip pattern of weight <= order on them is
// completed through the reduced system. Candidates are ranked by the prior
// LLR cost of their support; near-ties fall back to the directional cost and
// then to lexicographic order.
inline BitVector osd(const BinaryMatrix& h, const BitVector& s,
                     const std::vector<double>& posterior_llr, const std::vector<double>& prior_llr,
                     std::size_t order, RankRule rule, const QubitWeights& w,
                     std::size_t* candidate_count = nullptr) {
    const std::size_t m = h.rows(), n = h.cols();
    if (s.size() != m) throw std::invalid_argument("osd: syndrome length mismatch");
    if (posterior_llr.size() != n || prior_llr.size() != n)
        throw std::invalid_argument("osd: llr length mismatch");
    const bool directional = rule == RankRule::LlrThenDirectional;
    if (directional && w.size() != n)
        throw std::invalid_argument("osd: directional weights length mismatch");

    std::vector<std::size_t> cols(n);
    std::iota(cols.begin(), cols.end(), 0);
    std::sort(cols.begin(), cols.end(), [&](std::size_t a, std::size_t b) {
        const double ra = std::abs(posterior_llr[a]);
        const double rb = std::abs(posterior_llr[b]);
        if (ra != rb) return ra < rb;
        return a < b;
    });

    // full reduction over the sorted column order
    BinaryMatrix work = h;
    BitVector rhs = s;
    std::vector<std::size_t> pivot_col;
    pivot_col.reserve(std::min(m, n));
    for (std::size_t c : cols) {
        const std::size_t done = pivot_col.size();
        if (done == m) break;
        std::size_t pivot_row = m;
        for (std::size_t r = done; r < m; ++r)
            if (work.get(r, c)) {
                pivot_row = r;
                break;
            }
        if (pivot_row == m) continue;
        if (pivot_row != done) {
            work.swap_rows(done, pivot_row);
            const bool a = rhs.get(done), b = rhs.get(pivot_row);
            rhs.set(done, b);
            rhs.set(pivot_row, a);
        }
        for (std::size_t r = 0; r < m; ++r)
            if (r != done && work.get(r, c)) {
                work.xor_rows(r, done);
                if (rhs.get(done)) rhs.flip(r);
            }
        pivot_col.push_back(c);
    }
    const std::size_t rnk = pivot_col.size();
    for (std::size_t r = rnk; r < m; ++r)
        if (rhs.get(r)) throw std::runtime_error("osd: syndrome is inconsistent with the checks");

    std::vector<char> is_pivot(n, 0);
    for (std::size_t c : pivot_col) is_pivot[c] = 1;
    std::vector<std::size_t> info_cols;
    info_cols.reserve(n - rnk);
    for (std::size_t c : cols)
        if (!is_pivot[c]) info_cols.push_back(c);

    // packed pivot-row column of the reduced matrix for each info position
    const std::size_t pw = words_for(rnk);
    std::vector<Word> colvec(info_cols.size() * pw, 0);
    for (std::size_t j = 0; j < info_cols.size(); ++j)
        for (std::size_t r = 0; r < rnk; ++r)
            if (work.get(r, info_cols[j]))
                colvec[j * pw + r / kWordBits] |= Word(1) << (r % kWordBits);

    // base assignment: BP hard decision on the information set
    std::vector<Word> base(pw, 0);
    for (std::size_t r = 0; r < rnk; ++r)
        if (rhs.get(r)) base[r / kWordBits] |= Word(1) << (r % kWordBits);
    double base_llr = 0.0, base_dir = 0.0;
    std::vector<char> base_info(info_cols.size(), 0);
    for (std::size_t j = 0; j < info_cols.size(); ++j) {
        const std::size_t c = info_cols[j];
        if (posterior_llr[c] < 0.0) {
            base_info[j] = 1;
            for (std::size_t ww = 0; ww < pw; ++ww) base[ww] ^= colvec[j * pw + ww];
            base_llr += prior_llr[c];
            if (directional) base_dir += w[c];
        }
    }

    std::vector<Word> pivots(pw);
    const auto evaluate = [&](const std::vector<std::size_t>& flips, double& llr_cost,
                              double& dir_cost) {
        for (std::size_t ww = 0; ww < pw; ++ww) pivots[ww] = base[ww];
        llr_cost = base_llr;
        dir_cost = base_dir;
        for (std::size_t j : flips) {
            const std::size_t c = info_cols[j];
            const double sgn = base_info[j] ? -1.0 : 1.0;
            llr_cost += sgn * prior_llr[c];
            if (directional) dir_cost += sgn * w[c];
            for (std::size_t ww = 0; ww < pw; ++ww) pivots[ww] ^= colvec[j * pw + ww];
        }
        for (std::size_t ww = 0; ww < pw; ++ww) {
            Word x = pivots[ww];
            while (x) {
                const std::size_t r = ww * kWordBits + std::countr_zero(x);
                llr_cost += prior_llr[pivot_col[r]];
                if (directional) dir_cost += w[pivot_col[r]];
                x &= x - 1;
            }
        }
    };

    const auto materialize = [&](const std::vector<std::size_t>& flips) {
        BitVector e(n);
        for (std::size_t j = 0; j < info_cols.size(); ++j)
            if (base_info[j]) e.set(info_cols[j], true);
        for (std::size_t j : flips) e.flip(info_cols[j]);
        for (std::size_t ww = 0; ww < pw; ++ww) pivots[ww] = base[ww];
        for (std::size_t j : flips)
            for (std::size_t ww = 0; ww < pw; ++ww) pivots[ww] ^= colvec[j * pw + ww];
        for (std::size_t ww = 0; ww < pw; ++ww) {
            Word x = pivots[ww];
            while (x) {
                e.set(pivot_col[ww * kWordBits + std::countr_zero(x)], true);
                x &= x - 1;
            }
        }
        return e;
    };

    std::vector<std::size_t> best_flips;
    double best_llr = 0.0, best_dir = 0.0;
    bool have_best = false;
    std::size_t candidates = 0;

    std::vector<std::size_t> flips;
    const auto consider = [&]() {
        ++candidates;
        double llr_cost, dir_cost;
        evaluate(flips, llr_cost, dir_cost);
        if (!have_best) {
            best_flips = flips;
            best_llr = llr_cost;
            best_dir = dir_cost;
            have_best = true;
            return;
        }
        bool better = false;
        if (llr_cost < best_llr - kScoreTieTol) {
            better = true;
        } else if (llr_cost <= best_llr + kScoreTieTol) {
            if (directional && dir_cost < best_dir - kScoreTieTol) {
                better = true;
            } else if (!directional || dir_cost <= best_dir + kScoreTieTol) {
                better = materialize(flips).lex_less(materialize(best_flips));
            }
        }
        if (better) {
            best_flips = flips;
            best_llr = llr_cost;
            best_dir = dir_cost;
        }
    };

    const auto enumerate = [&](auto&& self, std::size_t start, std::size_t remaining) -> void {
        consider();
        if (remaining == 0) return;
        for (std::size_t j = start; j < info_cols.size(); ++j) {
            flips.push_back(j);
            self(self, j + 1, remaining - 1);
            flips.pop_back();
        }
    };
    enumerate(enumerate, 0, order);

    if (candidate_count) *candidate_count = candidates;
    BitVector e = materialize(best_flips);
    if (h.mul_vec(e) != s) throw std::logic_error("osd: produced estimate violates the syndrome");
    return e;
}

struct DecodeOutcome {
    BitVector estimate;
    bool bp_converged = false;
    bool used_osd = false;
    std::size_t candidate_count = 0;
    double score = 0.0;  // prior-LLR cost of the estimate's support
};

// Decodes one CSS side: min-sum BP first, ordered statistics when BP fails
// to reach the syndrome.
class CssDecoder {
  public:
    CssDecoder(const CssCode& code, DecoderConfig cfg)
        : code_(&code), cfg_(std::move(cfg)), bp_x_(code.h_z), bp_z_(code.h_x) {}

    const DecoderConfig& config() const { return cfg_; }

    DecodeOutcome decode(Side side, const BitVector& s, const PriorModel& prior) {
        if (prior.size() != code_->n)
            throw std::invalid_argument("decode: prior length differs from qubit count");
        const BinaryMatrix& h = detection_matrix(*code_, side);
        MinSumDecoder& bp = side == Side::XErrors ? bp_x_ : bp_z_;
        BpResult r = bp.run(s, prior.llr, cfg_.bp_iters, cfg_.ms_scale);
        DecodeOutcome out;
        out.bp_converged = r.converged;
        if (r.converged) {
            out.estimate = std::move(r.hard);
            out.candidate_count = 1;
        } else {
            out.used_osd = true;
            out.estimate = osd(h, s, r.posterior, prior.llr, cfg_.osd_order, cfg_.rank_rule,
                               cfg_.w, &out.candidate_count);
        }
        out.score = 0.0;
        for (std::size_t i = 0; i < code_->n; ++i)
            if (out.estimate.get(i)) out.score += prior.llr[i];
        return out;
    }

  private:
    const CssCode* code_;
    DecoderConfig cfg_;
    MinSumDecoder bp_x_;  // factor graph of H_Z, decodes X errors
    MinSumDecoder bp_z_;  // factor graph of H_X, decodes Z errors
};

inline DecodeOutcome decode(const CssCode& code, Side side, const BitVector& s,
                            const PriorModel& prior, const DecoderConfig& cfg) {
    CssDecoder dec(code, cfg);
    return dec.decode(side, s, prior);
}

struct CosetPosterior {
    BitVector best_rep;              // lexicographically least member of the argmax class
    std::vector<double> posteriors;  // normalized, indexed like DegeneracyClasses::reps
    std::vector<BitVector> reps;
};

// Exhaustive coset posterior: the probability of each degeneracy class is
// proportional to the sum of exp(-sum_i llr_i v_i) over its members.
// Accumulation runs in the log domain over the full solution set.
inline CosetPosterior map_oracle(const CssCode& code, Side side, const BitVector& s,
                                 const PriorModel& prior, std::size_t cap = kAffineIterCap) {
    if (prior.size() != code.n)
        throw std::invalid_argument("map_oracle: prior length differs from qubit count");
    const BinaryMatrix& h_det = detection_matrix(code, side);
    const auto e0 = solve(h_det, s);
    if (!e0) throw std::runtime_error("map_oracle: syndrome has no solution");
    const BinaryMatrix kernel = nullspace_basis(h_det);
    if (kernel.rows() > cap || kernel.rows() > kAffineIterCap)
        throw std::runtime_error("map_oracle: solution set exceeds the exhaustive cap");
    const BinaryMatrix duals = logical_duals(code, side);
    const std::size_t k = code.k;

    const auto signature_of = [&](const BitVector& v) {
        std::uint32_t sig = 0;
        for (std::size_t j = 0; j < k; ++j)
            if (v.dot(duals.row(j))) sig |= std::uint32_t(1) << j;
        return sig;
    };
    std::vector<std::uint32_t> row_sig(kernel.rows());
    std::vector<double> row_delta(kernel.rows());
    std::vector<std::vector<std::size_t>> support(kernel.rows());
    for (std::size_t r = 0; r < kernel.rows(); ++r) {
        row_sig[r] = signature_of(kernel.row(r));
        support[r] = kernel.row_support(r);
    }

    const std::size_t classes = std::size_t(1) << k;
    std::vector<detail::LogSumExp> acc(classes);
    std::vector<BitVector> reps(classes);
    std::vector<char> seen(classes, 0);

    BitVector v = *e0;
    std::uint32_t sig = signature_of(v);
    double cost = 0.0;
    for (std::size_t i = 0; i < code.n; ++i)
        if (v.get(i)) cost += prior.llr[i];
    const auto visit = [&]() {
        acc[sig].add(-cost);
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
        for (std::size_t j : support[idx]) {
            cost += v.get(j) ? -prior.llr[j] : prior.llr[j];
            v.flip(j);
        }
        sig ^= row_sig[idx];
        visit();
    }

    detail::LogSumExp total;
    for (const auto& a : acc) total.add(a.value());
    CosetPosterior out;
    out.posteriors.resize(classes);
    std::size_t best = 0;
    for (std::size_t c = 0; c < classes; ++c) {
        out.posteriors[c] = std::exp(acc[c].value() - total.value());
        if (out.posteriors[c] > out.posteriors[best]) best = c;
    }
    out.best_rep = reps[best];
    out.reps = std::move(reps);
    return out;
}

}  // namespace dirdec
