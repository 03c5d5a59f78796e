#pragma once

// Deterministic random fixtures used by the self-check suites and the test
// harness: small CSS codes with guaranteed logical content, forest check
// matrices, random subspaces and weight vectors.

#include <cstdint>
#include <vector>

#include "dirdec/code.hpp"
#include "dirdec/directional.hpp"
#include "dirdec/gf2.hpp"
#include "dirdec/rng.hpp"

namespace dirdec {

inline BitVector random_bitvector(TrialRng& rng, std::size_t n) {
    BitVector v(n);
    for (std::size_t i = 0; i < n; ++i)
        if (rng.bernoulli(0.5)) v.set(i, true);
    return v;
}

inline std::vector<double> random_reals(TrialRng& rng, std::size_t n, double lo, double hi) {
    std::vector<double> out(n);
    for (double& x : out) x = rng.uniform_in(lo, hi);
    return out;
}

inline QubitWeights random_weights(TrialRng& rng, std::size_t n, double lo, double hi) {
    return QubitWeights(random_reals(rng, n, lo, hi));
}

// Random subspace handed back as a generating matrix with dim independent
// rows (dim <= n).
inline BinaryMatrix random_subspace(TrialRng& rng, std::size_t n, std::size_t dim) {
    IncrementalRowspace span(n);
    BinaryMatrix basis(dim, n);
    std::size_t have = 0;
    while (have < dim) {
        const BitVector v = random_bitvector(rng, n);
        if (span.insert(v)) basis.set_row(have++, v);
    }
    return basis;
}

// Small CSS code with k >= 1 (so both sides carry logical operators) and at
// least one check row per side. H_Z rows are sparse random vectors; H_X rows
// are random nonzero combinations of a kernel basis of H_Z.
inline CssCode random_css_code(TrialRng& rng, std::size_t n_lo = 6, std::size_t n_hi = 14) {
    for (;;) {
        const std::size_t n = n_lo + rng.below(n_hi - n_lo + 1);
        const std::size_t m_z = 1 + rng.below(3);
        BinaryMatrix h_z(m_z, n);
        for (std::size_t r = 0; r < m_z; ++r) {
            const std::size_t wt = 2 + rng.below(3);
            for (std::size_t t = 0; t < wt; ++t) h_z.set(r, rng.below(n), true);
            if (h_z.row_is_zero(r)) h_z.set(r, rng.below(n), true);
        }
        const BinaryMatrix kernel = nullspace_basis(h_z);
        if (kernel.rows() == 0) continue;

        const std::size_t m_x = 1 + rng.below(3);
        BinaryMatrix h_x(m_x, n);
        bool ok = true;
        for (std::size_t r = 0; r < m_x; ++r) {
            BitVector row(n);
            for (std::size_t attempt = 0; attempt < 32 && row.is_zero(); ++attempt) {
                for (std::size_t b = 0; b < kernel.rows(); ++b)
                    if (rng.bernoulli(0.5)) row.xor_words(kernel.row_words(b), kernel.words_per_row());
            }
            if (row.is_zero()) {
                ok = false;
                break;
            }
            h_x.set_row(r, row);
        }
        if (!ok) continue;
        if (rank(h_x) < 1 || rank(h_z) < 1) continue;
        const std::size_t k = n - rank(h_x) - rank(h_z);
        if (k < 1) continue;
        return new_css(std::move(h_x), std::move(h_z), std::nullopt, "random-css");
    }
}

// Random parity-check matrix whose Tanner graph is a forest: each new check
// attaches to qubits drawn from distinct connected components.
inline BinaryMatrix random_forest_matrix(TrialRng& rng, std::size_t n_lo = 4,
                                         std::size_t n_hi = 12) {
    const std::size_t n = n_lo + rng.below(n_hi - n_lo + 1);
    const std::size_t m = 1 + rng.below(std::max<std::size_t>(1, n / 2));

    std::vector<std::size_t> component(n);
    for (std::size_t i = 0; i < n; ++i) component[i] = i;
    const auto find = [&component](std::size_t a) {
        while (component[a] != a) {
            component[a] = component[component[a]];
            a = component[a];
        }
        return a;
    };

    BinaryMatrix h(m, n);
    for (std::size_t r = 0; r < m; ++r) {
        const std::size_t want = 1 + rng.below(3);
        std::vector<std::size_t> picked;
        for (std::size_t attempt = 0; attempt < 4 * n && picked.size() < want; ++attempt) {
            const std::size_t q = rng.below(n);
            const std::size_t root = find(q);
            bool clash = false;
            for (std::size_t other : picked)
                if (find(other) == root) clash = true;
            if (!clash) picked.push_back(q);
        }
        if (picked.empty()) picked.push_back(rng.below(n));
        for (std::size_t t = 1; t < picked.size(); ++t)
            component[find(picked[t])] = find(picked[0]);
        for (std::size_t q : picked) h.set(r, q, true);
    }
    return h;
}

// All syndromes reachable from some error pattern: the column space of h,
// enumerated as the rowspace of h^T. Only usable when rank(h) <= 24.
inline std::vector<BitVector> all_consistent_syndromes(const BinaryMatrix& h) {
    const RowReduceResult rr = row_reduce(h.transpose());
    BinaryMatrix gen(rr.pivot_cols.size(), h.rows());
    for (std::size_t i = 0; i < rr.pivot_cols.size(); ++i) gen.set_row(i, rr.rref.row(i));
    std::vector<BitVector> out;
    iterate_affine_space(BitVector(h.rows()), gen,
                         [&](const BitVector& s) { out.push_back(s); });
    return out;
}

}  // namespace dirdec
