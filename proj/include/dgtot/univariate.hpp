#pragma once
#include <algorithm>
#include <optional>
#include <vector>

#include "dgtot/crossing.hpp"
#include "dgtot/totaling.hpp"

namespace dgtot {

/// Graded diagonal form of a homogeneous matrix over k[x]:
/// U · P · V = diag(h_1..h_s | zero rows), h_i = x^{c_i - r_i} against the
/// permuted twists, with explicit invertible transformations and inverses.
template <class K>
struct GradedSNF {
    std::vector<std::pair<int, int>> pairs;  // (r_i, c_i), h_i = x^{c_i - r_i}
    std::vector<int> free_row_twists;        // r_{s+1}..r_t

    std::vector<int> row_twists;  // permuted target twists (diagonal rows first)
    std::vector<int> col_twists;  // permuted source twists
    std::vector<std::vector<Poly<K>>> u, u_inv;  // t×t row transformation
    std::vector<std::vector<Poly<K>>> v, v_inv;  // s×s column transformation
    std::vector<std::vector<Poly<K>>> diagonal;  // U P V, for the identity check
};

namespace detail {

template <class K>
void square_identity_check(const std::vector<std::vector<Poly<K>>>& a,
                           const std::vector<std::vector<Poly<K>>>& b, int nv,
                           const char* what) {
    auto prod = poly_mat_mul(a, b, nv);
    for (size_t i = 0; i < prod.size(); ++i)
        for (size_t j = 0; j < prod.size(); ++j) {
            bool ok = i == j ? prod[i][j] == Poly<K>::constant(nv, K::one())
                             : prod[i][j].is_zero();
            if (!ok) throw error(std::string("inverse check failed: ") + what);
        }
}

}  // namespace detail

/// Diagonalization of a homogeneous matrix over the univariate ring by the
/// minimum-degree pivot discipline: sort so every pivot has only entries of
/// equal or larger degree below and to the right, then eliminate.  Exact
/// polynomial transformations are accumulated on both sides.
template <class K>
GradedSNF<K> graded_diagonalize(const GradedMatrix<K>& p0) {
    int nv = 1;
    if (p0.nvars() > 1) throw error("graded_diagonalize needs a univariate ring");
    if (!p0.is_homogeneous()) throw error("graded_diagonalize needs a homogeneous matrix");
    int t = p0.rows(), s = p0.cols();

    std::vector<std::vector<Poly<K>>> m(t, std::vector<Poly<K>>(s, Poly<K>(nv)));
    for (int i = 0; i < t; ++i)
        for (int j = 0; j < s; ++j) m[i][j] = p0.at(i, j);
    std::vector<int> rt = p0.target.twists, ct = p0.source.twists;

    auto ident = [&](int n) {
        std::vector<std::vector<Poly<K>>> e(n, std::vector<Poly<K>>(n, Poly<K>(nv)));
        for (int i = 0; i < n; ++i) e[i][i] = Poly<K>::constant(nv, K::one());
        return e;
    };
    auto u = ident(t), u_inv = ident(t), v = ident(s), v_inv = ident(s);

    auto swap_rows = [&](int a, int b) {
        if (a == b) return;
        std::swap(m[a], m[b]);
        std::swap(rt[a], rt[b]);
        std::swap(u[a], u[b]);
        for (int i = 0; i < t; ++i) std::swap(u_inv[i][a], u_inv[i][b]);
    };
    auto swap_cols = [&](int a, int b) {
        if (a == b) return;
        for (int i = 0; i < t; ++i) std::swap(m[i][a], m[i][b]);
        std::swap(ct[a], ct[b]);
        for (int i = 0; i < s; ++i) std::swap(v[i][a], v[i][b]);
        std::swap(v_inv[a], v_inv[b]);
    };
    // row_a -= f * row_b  (U' = E U, U_inv' = U_inv E^{-1})
    auto row_op = [&](int a, int b, const Poly<K>& f) {
        for (int j = 0; j < s; ++j) m[a][j] -= f * m[b][j];
        for (int j = 0; j < t; ++j) u[a][j] -= f * u[b][j];
        for (int i = 0; i < t; ++i) u_inv[i][b] += u_inv[i][a] * f;
    };
    // col_a -= f * col_b
    auto col_op = [&](int a, int b, const Poly<K>& f) {
        for (int i = 0; i < t; ++i) m[i][a] -= f * m[i][b];
        for (int i = 0; i < s; ++i) v[i][a] -= f * v[i][b];
        for (int j = 0; j < s; ++j) v_inv[b][j] += f * v_inv[a][j];
    };

    int k = 0;
    while (k < std::min(t, s)) {
        // minimum-degree nonzero entry in the lower-right submatrix
        int best_i = -1, best_j = -1, best_deg = 0;
        for (int i = k; i < t; ++i)
            for (int j = k; j < s; ++j) {
                if (m[i][j].is_zero()) continue;
                int d = *m[i][j].homogeneous_degree();
                if (best_i < 0 || d < best_deg) {
                    best_i = i;
                    best_j = j;
                    best_deg = d;
                }
            }
        if (best_i < 0) break;
        swap_rows(k, best_i);
        swap_cols(k, best_j);
        // eliminate below and to the right; the pivot has minimal degree so
        // every quotient is a monomial
        bool dirty = true;
        while (dirty) {
            dirty = false;
            const Poly<K> piv = m[k][k];
            K pc = piv.terms().begin()->second;
            int pd = *piv.homogeneous_degree();
            for (int i = k + 1; i < t; ++i) {
                if (m[i][k].is_zero()) continue;
                int d = *m[i][k].homogeneous_degree();
                K c = m[i][k].terms().begin()->second;
                Poly<K> f = Poly<K>::monomial(nv, Monomial{d - pd}, c / pc);
                row_op(i, k, f);
                dirty = true;
            }
            for (int j = k + 1; j < s; ++j) {
                if (m[k][j].is_zero()) continue;
                int d = *m[k][j].homogeneous_degree();
                K c = m[k][j].terms().begin()->second;
                Poly<K> f = Poly<K>::monomial(nv, Monomial{d - pd}, c / pc);
                col_op(j, k, f);
                dirty = true;
            }
        }
        // normalize the pivot to x^{c-r}
        K lead = m[k][k].terms().begin()->second;
        if (!(lead == K::one())) {
            K inv = lead.inv();
            for (int j = 0; j < s; ++j) m[k][j] = m[k][j].scaled(inv);
            for (int j = 0; j < t; ++j) u[k][j] = u[k][j].scaled(inv);
            for (int i = 0; i < t; ++i) u_inv[i][k] = u_inv[i][k].scaled(lead);
        }
        ++k;
    }

    GradedSNF<K> out;
    for (int i = 0; i < k; ++i) out.pairs.push_back({rt[i], ct[i]});
    for (int i = k; i < t; ++i) out.free_row_twists.push_back(rt[i]);
    out.row_twists = rt;
    out.col_twists = ct;
    out.u = std::move(u);
    out.u_inv = std::move(u_inv);
    out.v = std::move(v);
    out.v_inv = std::move(v_inv);
    out.diagonal = std::move(m);

    detail::square_identity_check<K>(out.u, out.u_inv, nv, "U");
    detail::square_identity_check<K>(out.v, out.v_inv, nv, "V");
    // U P V == diagonal, exactly
    {
        std::vector<std::vector<Poly<K>>> pm(t, std::vector<Poly<K>>(s, Poly<K>(nv)));
        for (int i = 0; i < t; ++i)
            for (int j = 0; j < s; ++j) pm[i][j] = p0.at(i, j);
        // compute U * P (t×s), then (U P) * V
        std::vector<std::vector<Poly<K>>> up(t, std::vector<Poly<K>>(s, Poly<K>(nv)));
        for (int i = 0; i < t; ++i)
            for (int j = 0; j < s; ++j)
                for (int l = 0; l < t; ++l)
                    if (!out.u[i][l].is_zero() && !pm[l][j].is_zero())
                        up[i][j] += out.u[i][l] * pm[l][j];
        for (int i = 0; i < t; ++i)
            for (int j = 0; j < s; ++j) {
                Poly<K> acc(nv);
                for (int l = 0; l < s; ++l)
                    if (!up[i][l].is_zero() && !out.v[l][j].is_zero())
                        acc += up[i][l] * out.v[l][j];
                bool diag_here = i == j && i < static_cast<int>(out.pairs.size());
                Poly<K> expect(nv);
                if (diag_here)
                    expect = Poly<K>::monomial(nv, Monomial{out.pairs[i].second - out.pairs[i].first},
                                               K::one());
                if (!(acc == expect)) throw error("graded diagonalization identity failed");
            }
    }
    for (auto& [r, c] : out.pairs)
        if (c - r < 0) throw error("graded diagonalization produced a negative-degree pivot");
    return out;
}

/// Structure data of H(M) over k[x]: torsion pairs (r_i, c_i) meaning a
/// summand Σ^{r_i}A / x^{c_i - r_i}, free twists, and adapted cycle
/// representatives z_i ∈ M with φ(σ^{r_i} 1) = cls(z_i).
template <class K>
struct UnivariateDecomposition {
    std::vector<std::pair<int, int>> torsion;  // sorted by (r, c)
    std::vector<int> free_twists;              // sorted
    std::vector<std::vector<Poly<K>>> torsion_cycles;
    std::vector<std::vector<Poly<K>>> free_cycles;
    HomologyPresentation<K> presentation;
};

template <class K>
UnivariateDecomposition<K> homology_decompose(const SemifreeDG<K>& m, Window w) {
    if (m.nvars() != 1) throw error("homology_decompose needs a univariate ring");
    auto h = dg_homology(m, w);
    if (!h.certified)
        throw error("homology window uncertified; rerun with hi >= " +
                    std::to_string(h.suggested_hi));
    auto snf = graded_diagonalize(h.relations);

    // adapted generators: g'_a = Σ_i U_inv[i][a] g_i, cycle representatives
    // z'_a = Σ_i U_inv[i][a] · z_i
    int t = static_cast<int>(h.gen_degrees.size());
    auto adapted = [&](int a) {
        std::vector<Poly<K>> z(m.rank(), Poly<K>(1));
        for (int i = 0; i < t; ++i) {
            const Poly<K>& c = snf.u_inv[i][a];
            if (c.is_zero()) continue;
            for (int g = 0; g < m.rank(); ++g)
                if (!h.cycles[i][g].is_zero()) z[g] += c * h.cycles[i][g];
        }
        return z;
    };

    UnivariateDecomposition<K> out;
    out.presentation = h;
    struct Summand {
        int r, c;
        bool torsion;
        std::vector<Poly<K>> z;
    };
    std::vector<Summand> all;
    int s = static_cast<int>(snf.pairs.size());
    for (int a = 0; a < s; ++a)
        all.push_back({snf.pairs[a].first, snf.pairs[a].second, true, adapted(a)});
    for (int a = s; a < t; ++a) all.push_back({snf.row_twists[a], 0, false, adapted(a)});
    std::stable_sort(all.begin(), all.end(), [](const Summand& x, const Summand& y) {
        if (x.torsion != y.torsion) return x.torsion;
        if (x.r != y.r) return x.r < y.r;
        return x.c < y.c;
    });
    for (auto& sm : all) {
        if (sm.torsion) {
            out.torsion.push_back({sm.r, sm.c});
            out.torsion_cycles.push_back(std::move(sm.z));
        } else {
            out.free_twists.push_back(sm.r);
            out.free_cycles.push_back(std::move(sm.z));
        }
    }
    return out;
}

/// The block resolution complex F = ⊕ G_i: torsion summands contribute
/// 0 -> Σ^{c_i}A --x^{c_i-r_i}--> Σ^{r_i}A -> 0, free summands a single
/// Σ^{r_i}A in position 0.
template <class K>
struct ResolutionComplex {
    GradedComplex<K> f;
    // generator bookkeeping: summand index per position-0 and position-1 gen
    std::vector<int> pos0_summand, pos1_summand;
    int torsion_count = 0;
};

template <class K>
ResolutionComplex<K> build_resolution_complex(const PolyRing& ring,
                                              const UnivariateDecomposition<K>& dec) {
    ResolutionComplex<K> out;
    out.f.ring = ring;
    out.torsion_count = static_cast<int>(dec.torsion.size());
    TwistedFreeModule f0, f1;
    int summand = 0;
    for (auto& [r, c] : dec.torsion) {
        f0.twists.push_back(r);
        f0.labels.push_back("s" + std::to_string(summand + 1));
        f1.twists.push_back(c);
        f1.labels.push_back("t" + std::to_string(summand + 1));
        out.pos0_summand.push_back(summand);
        out.pos1_summand.push_back(summand);
        ++summand;
    }
    for (int r : dec.free_twists) {
        f0.twists.push_back(r);
        f0.labels.push_back("s" + std::to_string(summand + 1));
        out.pos0_summand.push_back(summand);
        ++summand;
    }
    out.f.modules[0] = f0;
    if (f1.rank() > 0) {
        out.f.modules[1] = f1;
        auto d = GradedMatrix<K>::zero(f1, f0, 1);
        for (size_t i = 0; i < dec.torsion.size(); ++i)
            d.at(static_cast<int>(i), static_cast<int>(i)) = Poly<K>::monomial(
                1, Monomial{dec.torsion[i].second - dec.torsion[i].first}, K::one());
        out.f.differentials[1] = std::move(d);
    }
    return out;
}

/// Exact preimage under ∂: an m with ∂m = target, solved degreewise.
/// `target` must be homogeneous of known degree; errors if it is not a
/// boundary.
template <class K>
std::vector<Poly<K>> boundary_preimage(const SemifreeDG<K>& m, int target_degree,
                                       const std::vector<Poly<K>>& target) {
    Window w{std::min(target_degree, m.min_degree()), target_degree + 1};
    DGRealization<K> real(m, w);
    auto rhs = real.coords(target, target_degree);
    auto sol = solve(real.diff(target_degree + 1), rhs);
    if (!sol) throw error("target is not a boundary at degree " + std::to_string(target_degree));
    return real.element(*sol, target_degree + 1);
}

/// Witness that a univariate module is quasi-isomorphic to a totaling:
/// the resolution complex F of H(M),
/// the preimages m_i, the assembled morphism μ : Tot F -> M, and its
/// certificates.
template <class K>
struct EmbedWitness {
    UnivariateDecomposition<K> decomposition;
    ResolutionComplex<K> resolution;
    TotResult<K> tot_f;
    std::vector<std::vector<Poly<K>>> preimages;  // m_i per torsion summand
    DGMap<K> mu;
    DGMorphismCheck<K> certificate;
    Window window;
};

/// Assembles the explicit quasi-isomorphism Tot F -> M: position-0
/// generators map to the adapted cycles z_i, position-1 generators to
/// preimages m_i with ∂m_i = x^{c_i-r_i} z_i, then certifies the result as
/// a DG morphism and quasi-isomorphism in the window.
template <class K>
EmbedWitness<K> embed(const SemifreeDG<K>& m, Window w) {
    EmbedWitness<K> out;
    out.window = w;
    out.decomposition = homology_decompose(m, w);
    out.resolution = build_resolution_complex(m.ring, out.decomposition);
    out.tot_f = tot(out.resolution.f, m.conv);

    auto& dec = out.decomposition;
    for (size_t i = 0; i < dec.torsion.size(); ++i) {
        auto [r, c] = dec.torsion[i];
        // target x^{c-r} z_i of degree c
        std::vector<Poly<K>> target(m.rank(), Poly<K>(1));
        for (int g = 0; g < m.rank(); ++g)
            if (!dec.torsion_cycles[i][g].is_zero())
                target[g] = dec.torsion_cycles[i][g].times_monomial(Monomial{c - r});
        out.preimages.push_back(boundary_preimage(m, c, target));
    }

    // μ on the Tot F basis
    int n = out.tot_f.module.rank();
    out.mu.images.assign(n, std::vector<Poly<K>>(m.rank(), Poly<K>(1)));
    for (int a = 0; a < n; ++a) {
        auto [pos, gen] = out.tot_f.origin[a];
        if (pos == 0) {
            int summand = out.resolution.pos0_summand[gen];
            const auto& z = summand < out.resolution.torsion_count
                                ? dec.torsion_cycles[summand]
                                : dec.free_cycles[summand - out.resolution.torsion_count];
            out.mu.images[a] = z;
        } else {
            out.mu.images[a] = out.preimages[out.resolution.pos1_summand[gen]];
        }
    }
    out.certificate = dg_morphism_check(out.tot_f.module, m, out.mu, w);
    return out;
}

/// Window rationale: past max(c_i) + max basis degree the homology of both
/// sides is forced by x-equivariance, so certifying bijectivity degreewise
/// up to that bound plus slack certifies the quasi-isomorphism.
template <class K>
Window embed_default_window(const SemifreeDG<K>& m) {
    Window w = m.default_window();
    return Window{std::min(0, w.lo), w.hi + 4};
}

}  // namespace dgtot
