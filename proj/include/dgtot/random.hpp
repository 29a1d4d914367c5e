#pragma once
#include <random>
#include <vector>

#include "dgtot/complex.hpp"
#include "dgtot/dg.hpp"
#include "dgtot/graded.hpp"

namespace dgtot {

/// Seeded RNG wrapper; all randomized suites thread one of these so runs are
/// reproducible from the seed alone.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : g_(seed) {}
    std::uint64_t raw() { return g_(); }
    int below(int n) { return n <= 1 ? 0 : static_cast<int>(raw() % static_cast<std::uint64_t>(n)); }
    int range(int lo, int hi) { return lo + below(hi - lo + 1); }  // inclusive
    bool chance(int num, int den) { return below(den) < num; }

  private:
    std::mt19937_64 g_;
};

/// Small nonzero scalar in [-4, 4].
template <class K>
K random_unit(Rng& rng, const FieldSpec& fs) {
    long long n = 0;
    while (n == 0) n = rng.range(-4, 4);
    K v = make_scalar<K>(fs, n);
    if (v.is_zero()) v = K::one();  // tiny characteristic
    return v;
}

template <class K>
Poly<K> random_poly(Rng& rng, int nv, int max_deg, int max_terms,
                    FieldSpec fs = FieldSpec{0}) {
    Poly<K> p(nv);
    int terms = rng.below(max_terms + 1);
    for (int t = 0; t < terms; ++t) {
        int d = rng.below(max_deg + 1);
        auto monos = monomials_of_degree(nv, d);
        p.add_term(monos[rng.below(static_cast<int>(monos.size()))], random_unit<K>(rng, fs));
    }
    return p;
}

template <class K>
Poly<K> random_homogeneous(Rng& rng, int nv, int deg, FieldSpec fs, bool allow_zero = true) {
    Poly<K> p(nv);
    if (deg < 0) return p;
    auto monos = monomials_of_degree(nv, deg);
    int terms = rng.range(allow_zero ? 0 : 1, std::min<int>(2, static_cast<int>(monos.size())));
    for (int t = 0; t < terms; ++t)
        p.add_term(monos[rng.below(static_cast<int>(monos.size()))], random_unit<K>(rng, fs));
    return p;
}

/// Random k-combination of the given vectors (possibly zero unless forced).
template <class K>
std::vector<K> random_combination(Rng& rng, const FieldSpec& fs,
                                  const std::vector<std::vector<K>>& basis, int ambient,
                                  bool force_nonzero) {
    std::vector<K> v(ambient);
    if (basis.empty()) return v;
    bool nz = false;
    for (int attempt = 0; attempt < 16 && !nz; ++attempt) {
        std::fill(v.begin(), v.end(), K());
        for (auto& b : basis) {
            if (!rng.chance(1, 2)) continue;
            K c = random_unit<K>(rng, fs);
            for (int i = 0; i < ambient; ++i)
                if (!b[i].is_zero()) v[i] += c * b[i];
        }
        for (auto& x : v) nz = nz || !x.is_zero();
        if (!force_nonzero) break;
    }
    if (force_nonzero && !nz) {
        for (int i = 0; i < ambient; ++i) v[i] = basis[0][i];
    }
    return v;
}

/// Random valid semifree DG module: basis degrees ascending, each column of
/// the differential sampled exactly from the cycle space of the module built
/// so far, so ∂² = 0 holds by construction.  Entries of degree larger than
/// max_entry_deg are excluded by restricting the sampling subspace.
template <class K>
SemifreeDG<K> random_semifree(Rng& rng, const PolyRing& ring, int max_rank, int max_basis_deg,
                              int max_entry_deg, SignConvention conv) {
    int n = rng.range(1, max_rank);
    std::vector<int> degs;
    for (int i = 0; i < n; ++i) degs.push_back(rng.below(max_basis_deg + 1));
    std::sort(degs.begin(), degs.end());
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) labels.push_back("e" + std::to_string(i + 1));
    SemifreeDG<K> m = SemifreeDG<K>::zero_diff(ring, labels, degs, conv);

    for (int j = 1; j < n; ++j) {
        if (rng.chance(1, 4)) continue;  // some zero columns
        int target_deg = degs[j] - 1;
        // partial module on basis elements 0..j-1 realized at target_deg
        SemifreeDG<K> part = m;
        part.labels.resize(j);
        part.degrees.resize(j);
        part.d.resize(j);
        for (auto& row : part.d) row.resize(j);
        if (target_deg < part.min_degree()) continue;
        Window w{target_deg, target_deg};
        DGRealization<K> real(part, w);
        KMat<K> dmat = real.diff(target_deg);
        const auto& basis = real.basis(target_deg);
        // restrict to coordinates whose entry degree fits the bound
        std::vector<int> allowed;
        for (size_t c = 0; c < basis.size(); ++c)
            if (degs[j] - degs[basis[c].gen] - 1 <= max_entry_deg)
                allowed.push_back(static_cast<int>(c));
        if (allowed.empty()) continue;
        KMat<K> sub(dmat.nr, static_cast<int>(allowed.size()));
        for (int r = 0; r < dmat.nr; ++r)
            for (size_t c = 0; c < allowed.size(); ++c)
                sub.at(r, static_cast<int>(c)) = dmat.at(r, allowed[c]);
        auto ker = kernel_basis(sub);
        if (ker.empty()) continue;
        auto v = random_combination<K>(rng, ring.field, ker, static_cast<int>(allowed.size()),
                                       false);
        std::vector<K> full(basis.size());
        for (size_t c = 0; c < allowed.size(); ++c) full[allowed[c]] = v[c];
        auto elem = real.element(full, target_deg);
        for (int i = 0; i < j; ++i) m.d[i][j] = elem[i];
    }
    return m;
}

/// Random semifree module whose given basis has no crossing: levels are
/// assigned up front and each differential column is a nonzero cycle
/// supported on the previous level.
template <class K>
SemifreeDG<K> random_no_crossing(Rng& rng, const PolyRing& ring, int max_rank,
                                 int max_basis_deg, SignConvention conv) {
    int n = rng.range(1, max_rank);
    // level sizes: level 0 nonempty
    std::vector<int> level_of(n, 0);
    int levels = rng.range(1, n);
    for (int i = 0; i < n; ++i) level_of[i] = rng.below(levels);
    level_of[0] = 0;
    std::sort(level_of.begin(), level_of.end());
    // compact missing levels
    for (int i = 1; i < n; ++i)
        if (level_of[i] > level_of[i - 1] + 1) level_of[i] = level_of[i - 1] + 1;

    std::vector<int> degs(n);
    std::vector<std::string> labels(n);
    for (int i = 0; i < n; ++i) {
        degs[i] = level_of[i] == 0 ? rng.below(max_basis_deg + 1)
                                   : degs[i - 1] + rng.range(1, 3);
        labels[i] = "e" + std::to_string(i + 1);
    }
    SemifreeDG<K> m = SemifreeDG<K>::zero_diff(ring, labels, degs, conv);
    for (int j = 0; j < n; ++j) {
        if (level_of[j] == 0) continue;
        int target_deg = degs[j] - 1;
        SemifreeDG<K> part = m;
        part.labels.resize(j);
        part.degrees.resize(j);
        part.d.resize(j);
        for (auto& row : part.d) row.resize(j);
        Window w{std::min(target_deg, part.min_degree()), target_deg};
        DGRealization<K> real(part, w);
        KMat<K> dmat = real.diff(target_deg);
        const auto& basis = real.basis(target_deg);
        std::vector<int> allowed;
        for (size_t c = 0; c < basis.size(); ++c)
            if (level_of[basis[c].gen] == level_of[j] - 1) allowed.push_back(static_cast<int>(c));
        std::vector<std::vector<K>> ker;
        if (!allowed.empty()) {
            KMat<K> sub(dmat.nr, static_cast<int>(allowed.size()));
            for (int r = 0; r < dmat.nr; ++r)
                for (size_t c = 0; c < allowed.size(); ++c)
                    sub.at(r, static_cast<int>(c)) = dmat.at(r, allowed[c]);
            ker = kernel_basis(sub);
        }
        if (ker.empty()) {
            level_of[j] = 0;  // demote: stays crossing-free with a zero column
            continue;
        }
        auto v = random_combination<K>(rng, ring.field, ker, static_cast<int>(allowed.size()),
                                       true);
        std::vector<K> full(basis.size());
        for (size_t c = 0; c < allowed.size(); ++c) full[allowed[c]] = v[c];
        auto elem = real.element(full, target_deg);
        for (int i = 0; i < j; ++i) m.d[i][j] = elem[i];
    }
    return m;
}

/// Random bounded complex with exact ∂∘∂ = 0: the bottom differential is
/// free random, higher columns are sampled from realized kernels.
template <class K>
GradedComplex<K> random_complex(Rng& rng, const PolyRing& ring, int max_positions, int max_rank,
                                int max_twist, int max_entry_deg, int base_lo = 0,
                                int base_hi = 0) {
    GradedComplex<K> c;
    c.ring = ring;
    int npos = rng.range(1, max_positions);
    int base = rng.range(base_lo, base_hi);
    for (int i = 0; i < npos; ++i) {
        TwistedFreeModule m;
        int r = rng.range(1, max_rank);
        for (int g = 0; g < r; ++g) m.twists.push_back(rng.range(-max_twist, max_twist));
        c.modules[base + i] = std::move(m);
    }
    for (int i = base + 1; i < base + npos; ++i) {
        auto& src = c.modules[i];
        auto& dst = c.modules[i - 1];
        auto d = GradedMatrix<K>::zero(src, dst, ring.nvars());
        if (i == base + 1) {
            for (int col = 0; col < src.rank(); ++col)
                for (int row = 0; row < dst.rank(); ++row) {
                    int deg = src.twists[col] - dst.twists[row];
                    if (deg < 0 || deg > max_entry_deg) continue;
                    d.at(row, col) = random_homogeneous<K>(rng, ring.nvars(), deg, ring.field);
                }
        } else {
            const GradedMatrix<K>& prev = c.differentials.at(i - 1);
            for (int col = 0; col < src.rank(); ++col) {
                int j = src.twists[col];
                KMat<K> mat = realize_degree(prev, ring.nvars(), j);
                auto basis = free_piece_basis(dst, ring.nvars(), j);
                std::vector<int> allowed;
                for (size_t b = 0; b < basis.size(); ++b)
                    if (j - dst.twists[basis[b].gen] <= max_entry_deg)
                        allowed.push_back(static_cast<int>(b));
                if (allowed.empty()) continue;
                KMat<K> sub(mat.nr, static_cast<int>(allowed.size()));
                for (int r = 0; r < mat.nr; ++r)
                    for (size_t b = 0; b < allowed.size(); ++b)
                        sub.at(r, static_cast<int>(b)) = mat.at(r, allowed[b]);
                auto ker = kernel_basis(sub);
                if (ker.empty()) continue;
                auto v = random_combination<K>(rng, ring.field, ker,
                                               static_cast<int>(allowed.size()), false);
                std::vector<K> full(basis.size());
                for (size_t b = 0; b < allowed.size(); ++b) full[allowed[b]] = v[b];
                for (size_t b = 0; b < basis.size(); ++b)
                    if (!full[b].is_zero())
                        d.at(basis[b].gen, col).add_term(basis[b].mono, full[b]);
            }
        }
        c.differentials[i] = std::move(d);
    }
    return c;
}

/// Random homogeneous graded matrix with the given twists; entries of
/// non-positive required degree stay zero when positive_only is set.
template <class K>
GradedMatrix<K> random_graded_matrix(Rng& rng, const PolyRing& ring, std::vector<int> row_twists,
                                     std::vector<int> col_twists, bool positive_only) {
    auto m = GradedMatrix<K>::zero(TwistedFreeModule{col_twists, {}},
                                   TwistedFreeModule{row_twists, {}}, ring.nvars());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            int d = col_twists[j] - row_twists[i];
            if (d < 0 || (positive_only && d == 0)) continue;
            m.at(i, j) = random_homogeneous<K>(rng, ring.nvars(), d, ring.field);
        }
    return m;
}

}  // namespace dgtot
