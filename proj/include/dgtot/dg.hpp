#pragma once
#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "dgtot/graded.hpp"

namespace dgtot {

/// Finite-rank semifree DG module over the standard-graded polynomial ring.
/// Basis element e_j has homological degree degrees[j]; the differential is
/// ∂e_j = Σ_i d[i][j] e_i with d[i][j] zero or homogeneous of degree
/// degrees[j] - degrees[i] - 1.  The convention flag fixes how coefficients
/// pass through ∂ (see SignConvention).
template <class K>
struct SemifreeDG {
    PolyRing ring;
    std::vector<std::string> labels;
    std::vector<int> degrees;
    std::vector<std::vector<Poly<K>>> d;  // d[i][j]: coefficient of e_i in ∂e_j
    SignConvention conv = SignConvention::even;

    int rank() const { return static_cast<int>(degrees.size()); }
    int nvars() const { return ring.nvars(); }

    static SemifreeDG zero_diff(PolyRing ring, std::vector<std::string> labels,
                                std::vector<int> degrees, SignConvention conv) {
        SemifreeDG m;
        m.ring = std::move(ring);
        m.labels = std::move(labels);
        m.degrees = std::move(degrees);
        int n = m.rank();
        m.d.assign(n, std::vector<Poly<K>>(n, Poly<K>(m.ring.nvars())));
        m.conv = conv;
        return m;
    }

    /// Coefficient-passing sign of the active convention for a homogeneous
    /// coefficient of degree q.
    int eps(int q) const {
        if (conv == SignConvention::even) return 1;
        return q % 2 == 0 ? 1 : -1;
    }

    int min_degree() const {
        return degrees.empty() ? 0 : *std::min_element(degrees.begin(), degrees.end());
    }
    int max_degree() const {
        return degrees.empty() ? 0 : *std::max_element(degrees.begin(), degrees.end());
    }
    int max_entry_degree() const {
        int m = 0;
        for (auto& row : d)
            for (auto& p : row) m = std::max(m, p.degree());
        return m;
    }

    /// Default certification window per the module's own degree data.
    Window default_window() const {
        return Window{min_degree(), 2 * (max_degree() + max_entry_degree()) + 4};
    }

    /// Same labels, degrees and differential entries under label matching;
    /// basis declaration order is immaterial.
    bool equals_labeled(const SemifreeDG& o) const {
        if (rank() != o.rank() || conv != o.conv) return false;
        std::map<std::string, int> mine, theirs;
        for (int i = 0; i < rank(); ++i) mine[labels[i]] = i;
        for (int i = 0; i < o.rank(); ++i) theirs[o.labels[i]] = i;
        if (mine.size() != theirs.size() || mine.size() != static_cast<size_t>(rank()))
            return false;
        for (auto& [lab, i] : mine) {
            auto it = theirs.find(lab);
            if (it == theirs.end()) return false;
            if (degrees[i] != o.degrees[it->second]) return false;
        }
        for (auto& [lc, jc] : mine)
            for (auto& [lr, ir] : mine)
                if (d[ir][jc] != o.d[theirs.at(lr)][theirs.at(lc)]) return false;
        return true;
    }
};

struct DGViolation {
    std::string what;
};

struct DGValidation {
    bool ok = true;
    std::vector<DGViolation> violations;
    std::vector<int> well_order;  // basis indices sorted by degree, ties by declaration
};

/// Checks entry homogeneity and ∂² = 0 under the active convention, and
/// emits a well order (ascending homological degree, ties by declaration).
/// For finite rank the degree constraint already forces the support digraph
/// to decrease homological degree, so semifreeness needs no search.
template <class K>
DGValidation validate_dg(const SemifreeDG<K>& m) {
    DGValidation out;
    int n = m.rank();
    if (m.labels.size() != m.degrees.size() || m.d.size() != m.degrees.size()) {
        out.ok = false;
        out.violations.push_back({"inconsistent basis data"});
        return out;
    }
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const Poly<K>& p = m.d[i][j];
            if (p.is_zero()) continue;
            int expected = m.degrees[j] - m.degrees[i] - 1;
            auto hd = p.homogeneous_degree();
            if (!hd || *hd != expected) {
                out.ok = false;
                out.violations.push_back(
                    {"entry d[" + m.labels[i] + "][" + m.labels[j] +
                     "] must be homogeneous of degree " + std::to_string(expected)});
            }
        }
    if (out.ok) {
        // ∂²e_j = Σ_i eps(|d_ij|) d_ij · ∂e_i
        for (int j = 0; j < n; ++j) {
            std::vector<Poly<K>> acc(n, Poly<K>(m.nvars()));
            for (int i = 0; i < n; ++i) {
                const Poly<K>& dij = m.d[i][j];
                if (dij.is_zero()) continue;
                int sign = m.eps(m.degrees[j] - m.degrees[i] - 1);
                for (int t = 0; t < n; ++t) {
                    if (m.d[t][i].is_zero()) continue;
                    Poly<K> prod = dij * m.d[t][i];
                    acc[t] += sign > 0 ? prod : -prod;
                }
            }
            for (int t = 0; t < n; ++t)
                if (!acc[t].is_zero()) {
                    out.ok = false;
                    out.violations.push_back({"∂² nonzero on " + m.labels[j] +
                                              " at component " + m.labels[t]});
                }
        }
    }
    out.well_order.resize(n);
    std::iota(out.well_order.begin(), out.well_order.end(), 0);
    std::stable_sort(out.well_order.begin(), out.well_order.end(),
                     [&](int a, int b) { return m.degrees[a] < m.degrees[b]; });
    return out;
}

/// True iff every nonzero differential entry has positive degree
/// (∂ ⊗ k = 0).
template <class K>
bool is_minimal(const SemifreeDG<K>& m) {
    for (auto& row : m.d)
        for (auto& p : row)
            if (!p.is_zero() && p.homogeneous_degree().value_or(1) < 1) return false;
    return true;
}

/// Degreewise realization of a semifree DG module: for each homological
/// degree in [lo-1, hi+1] an ordered k-basis (basis element, monomial) and
/// exact matrices for ∂ and the variable action.  The one-degree margin
/// keeps cycle/boundary computations at the window edges honest.
template <class K>
class DGRealization {
  public:
    DGRealization(const SemifreeDG<K>& m, Window w) : m_(&m), w_(w) {
        for (int d = w.lo - 1; d <= w.hi + 1; ++d) basis_.emplace(d, make_basis(d));
    }

    Window window() const { return w_; }
    const SemifreeDG<K>& module() const { return *m_; }

    const std::vector<FreeBasisVec>& basis(int deg) const {
        auto it = basis_.find(deg);
        if (it == basis_.end()) throw error("degree outside realization");
        return it->second;
    }
    int dim(int deg) const {
        if (deg < w_.lo - 1 || deg > w_.hi + 1) return 0;
        return static_cast<int>(basis(deg).size());
    }

    /// Matrix of ∂ : M_deg -> M_{deg-1}, valid for deg in [lo, hi+1].
    KMat<K> diff(int deg) const {
        const auto& src = basis(deg);
        const auto& dstv = basis(deg - 1);
        auto index = index_of(dstv);
        KMat<K> out(static_cast<int>(dstv.size()), static_cast<int>(src.size()));
        for (size_t c = 0; c < src.size(); ++c) {
            int j = src[c].gen;
            int sign = m_->eps(mono_degree(src[c].mono));
            for (int i = 0; i < m_->rank(); ++i) {
                const Poly<K>& p = m_->d[i][j];
                if (p.is_zero()) continue;
                for (auto& [mono, coeff] : p.terms()) {
                    auto it = index.find({i, mono_mul(mono, src[c].mono)});
                    if (it == index.end()) throw error("dg realization index error");
                    K v = coeff;
                    if (sign < 0) v = -v;
                    out.at(it->second, static_cast<int>(c)) += v;
                }
            }
        }
        return out;
    }

    /// Matrix of multiplication by x_t : M_deg -> M_{deg+1} (the module
    /// action itself, sign-free under both conventions).
    KMat<K> var_action(int var, int deg) const {
        const auto& src = basis(deg);
        const auto& dst = basis(deg + 1);
        auto index = index_of(dst);
        KMat<K> out(static_cast<int>(dst.size()), static_cast<int>(src.size()));
        for (size_t c = 0; c < src.size(); ++c) {
            Monomial m = src[c].mono;
            m[var] += 1;
            auto it = index.find({src[c].gen, m});
            if (it == index.end()) throw error("dg var action index error");
            out.at(it->second, static_cast<int>(c)) = K::one();
        }
        return out;
    }

    /// Whole realization as a chain over [lo-1, hi+1].  Homology readings
    /// are reliable for positions in [lo, hi].
    KChain<K> chain() const {
        KChain<K> c;
        c.lo = w_.lo - 1;
        c.hi = w_.hi + 1;
        for (int d = c.lo; d <= c.hi; ++d) c.dims.push_back(dim(d));
        for (int d = c.lo; d <= c.hi; ++d)
            c.d.push_back(d == c.lo ? KMat<K>(0, dim(d)) : diff(d));
        return c;
    }

    /// Coordinates of a homogeneous module element (vector of polynomials
    /// over the basis) inside its degree piece.
    std::vector<K> coords(const std::vector<Poly<K>>& elem, int deg) const {
        const auto& b = basis(deg);
        auto index = index_of(b);
        std::vector<K> v(b.size());
        for (int g = 0; g < m_->rank(); ++g) {
            if (g >= static_cast<int>(elem.size()) || elem[g].is_zero()) continue;
            for (auto& [mono, coeff] : elem[g].terms()) {
                auto it = index.find({g, mono});
                if (it == index.end())
                    throw error("element not homogeneous of degree " + std::to_string(deg));
                v[it->second] = coeff;
            }
        }
        return v;
    }

    /// Inverse of coords.
    std::vector<Poly<K>> element(const std::vector<K>& v, int deg) const {
        const auto& b = basis(deg);
        std::vector<Poly<K>> out(m_->rank(), Poly<K>(m_->nvars()));
        for (size_t i = 0; i < b.size(); ++i)
            if (!v[i].is_zero()) out[b[i].gen].add_term(b[i].mono, v[i]);
        return out;
    }

  private:
    std::vector<FreeBasisVec> make_basis(int deg) const {
        std::vector<FreeBasisVec> out;
        for (int g = 0; g < m_->rank(); ++g)
            for (auto& m : monomials_of_degree(m_->nvars(), deg - m_->degrees[g]))
                out.push_back({g, m});
        return out;
    }
    static std::map<std::pair<int, Monomial>, int> index_of(const std::vector<FreeBasisVec>& b) {
        std::map<std::pair<int, Monomial>, int> idx;
        for (size_t i = 0; i < b.size(); ++i) idx[{b[i].gen, b[i].mono}] = static_cast<int>(i);
        return idx;
    }

    const SemifreeDG<K>* m_;
    Window w_;
    std::map<int, std::vector<FreeBasisVec>> basis_;
};

/// Minimal presentation of H(M): generator degrees with cycle
/// representatives, and a minimal relation matrix.  `certified` reports the
/// window stabilization check.
template <class K>
struct HomologyPresentation {
    std::vector<int> gen_degrees;
    std::vector<std::vector<Poly<K>>> cycles;  // one representative per generator
    GradedMatrix<K> relations;                 // target twists = gen_degrees
    std::map<int, int> h_dims;                 // dim H_d inside the window
    Window window;
    bool certified = true;
    int suggested_hi = 0;
};

/// Exact homology of M inside the window: per-degree dimensions, minimal
/// generators with cycle representatives, and minimal relations.  Certified
/// only if no generator or relation appears in the top kWindowSlack degrees
/// and the presentation's Hilbert function reproduces dim H_d throughout.
template <class K>
HomologyPresentation<K> dg_homology(const SemifreeDG<K>& m, Window w) {
    w.lo = std::min(w.lo, m.min_degree());
    DGRealization<K> real(m, w);
    int nv = m.nvars();
    HomologyPresentation<K> out;
    out.window = w;

    std::map<int, std::vector<std::vector<K>>> z, b;
    std::map<int, Subspace<K>> bsub;
    for (int d = w.lo; d <= w.hi; ++d) {
        z[d] = kernel_basis(real.diff(d));
        KMat<K> dup = real.diff(d + 1);
        Subspace<K> img(real.dim(d));
        for (int c = 0; c < dup.nc; ++c) {
            std::vector<K> v(dup.nr);
            for (int r = 0; r < dup.nr; ++r) v[r] = dup.at(r, c);
            img.insert(std::move(v));
        }
        b[d] = img.rows();
        out.h_dims[d] = static_cast<int>(z[d].size()) - img.dim();
        bsub.emplace(d, std::move(img));
    }

    // minimal generators of H = Z/B
    auto gens = graded_min_gens<K>(
        z, &b, w, nv, [&](int j) { return real.dim(j); },
        [&](int t, int j) { return real.var_action(t, j); });
    for (auto& g : gens) {
        out.gen_degrees.push_back(g.degree);
        out.cycles.push_back(real.element(g.rep, g.degree));
    }

    // relations: minimal generators of ker(F0 -> H)
    TwistedFreeModule f0{out.gen_degrees, {}};
    std::map<int, std::vector<std::vector<K>>> kmod;
    for (int j = w.lo; j <= w.hi; ++j) {
        auto fb = free_piece_basis(f0, nv, j);
        if (fb.empty()) continue;
        int md = real.dim(j);
        KMat<K> mat(md, static_cast<int>(fb.size()));
        for (size_t c = 0; c < fb.size(); ++c) {
            std::vector<Poly<K>> el(m.rank(), Poly<K>(nv));
            for (int g = 0; g < m.rank(); ++g) {
                const Poly<K>& zg = out.cycles[fb[c].gen][g];
                if (!zg.is_zero())
                    for (auto& [mono, coeff] : zg.terms())
                        el[g].add_term(mono_mul(mono, fb[c].mono), coeff);
            }
            auto red = bsub.at(j).reduce(real.coords(el, j));
            for (int r = 0; r < md; ++r) mat.at(r, static_cast<int>(c)) = red[r];
        }
        kmod[j] = kernel_basis(mat);
    }
    auto rel_gens = graded_min_gens<K>(
        kmod, nullptr, w, nv, [&](int j) { return free_piece_dim(f0, nv, j); },
        [&](int t, int j) { return realize_var_action<K>(f0, nv, t, j); });

    std::vector<int> rel_degrees;
    std::vector<std::vector<Poly<K>>> rel_polys;
    for (auto& rg : rel_gens) {
        rel_degrees.push_back(rg.degree);
        auto fb = free_piece_basis(f0, nv, rg.degree);
        std::vector<Poly<K>> col(f0.rank(), Poly<K>(nv));
        for (size_t i = 0; i < fb.size(); ++i)
            if (!rg.rep[i].is_zero()) col[fb[i].gen].add_term(fb[i].mono, rg.rep[i]);
        rel_polys.push_back(std::move(col));
    }
    out.relations = GradedMatrix<K>::zero(TwistedFreeModule{rel_degrees, {}}, f0, nv);
    for (size_t c = 0; c < rel_polys.size(); ++c)
        for (int r = 0; r < f0.rank(); ++r) out.relations.at(r, static_cast<int>(c)) = rel_polys[c][r];

    // stabilization certificate
    int top_event = w.lo - 1;
    for (int d : out.gen_degrees) top_event = std::max(top_event, d);
    for (int d : rel_degrees) top_event = std::max(top_event, d);
    out.certified = top_event <= w.hi - kWindowSlack;
    out.suggested_hi = out.certified ? w.hi : 2 * w.hi - w.lo;
    if (out.certified) {
        // Hilbert cross-check: dim coker(relations)_j == dim H_j
        for (int j = w.lo; j <= w.hi; ++j) {
            int lhs = free_piece_dim(f0, nv, j) - rank(realize_degree(out.relations, nv, j));
            if (lhs != out.h_dims[j]) {
                out.certified = false;
                out.suggested_hi = 2 * w.hi - w.lo;
                break;
            }
        }
    }
    return out;
}

/// Basis-level map of DG modules: images[j] is the image of the j-th basis
/// element of the source, written over the target basis.  The map is the
/// A-linear extension.
template <class K>
struct DGMap {
    std::vector<std::vector<Poly<K>>> images;  // images[src_j][tgt_i]
};

template <class K>
struct DGMorphismCheck {
    bool chain_map = true;
    std::string failure;
    QuasiIsoCert quasi_iso;
};

/// Realized components of an A-linear basis-level map, per degree.
template <class K>
KChainMap<K> realize_dg_map(const DGRealization<K>& rs, const DGRealization<K>& rd,
                            const DGMap<K>& mu) {
    Window w = rs.window();
    int nv = rs.module().nvars();
    int m = rd.module().rank();
    KChainMap<K> f;
    f.lo = w.lo - 1;
    f.hi = w.hi + 1;
    for (int deg = f.lo; deg <= f.hi; ++deg) {
        const auto& sb = rs.basis(deg);
        KMat<K> comp(rd.dim(deg), rs.dim(deg));
        for (size_t c = 0; c < sb.size(); ++c) {
            std::vector<Poly<K>> img(m, Poly<K>(nv));
            for (int h = 0; h < m; ++h) {
                const Poly<K>& u = mu.images[sb[c].gen][h];
                if (!u.is_zero())
                    for (auto& [mono, coeff] : u.terms())
                        img[h].add_term(mono_mul(mono, sb[c].mono), coeff);
            }
            auto v = rd.coords(img, deg);
            for (int r = 0; r < comp.nr; ++r) comp.at(r, static_cast<int>(c)) = v[r];
        }
        f.comp.push_back(std::move(comp));
    }
    return f;
}

/// Verifies degree-0 homogeneity and ∂∘μ = μ∘∂ at the polynomial level,
/// then certifies quasi-isomorphism on realizations inside the window.
template <class K>
DGMorphismCheck<K> dg_morphism_check(const SemifreeDG<K>& src, const SemifreeDG<K>& dst,
                                     const DGMap<K>& mu, Window w) {
    DGMorphismCheck<K> out;
    if (src.conv != dst.conv) throw error("sign convention mismatch");
    int nv = src.nvars();
    int n = src.rank(), m = dst.rank();
    for (int j = 0; j < n && out.chain_map; ++j) {
        for (int f = 0; f < m; ++f) {
            const Poly<K>& u = mu.images[j][f];
            if (u.is_zero()) continue;
            int expected = src.degrees[j] - dst.degrees[f];
            auto hd = u.homogeneous_degree();
            if (!hd || *hd != expected) {
                out.chain_map = false;
                out.failure = "image of " + src.labels[j] + " not homogeneous of degree " +
                              std::to_string(expected) + " at " + dst.labels[f];
                break;
            }
        }
    }
    if (out.chain_map) {
        // ∂^N(μ e_j) = Σ_f eps(|u_fj|) u_fj ∂^N e_f ; μ(∂^M e_j) = Σ_i d_ij μ(e_i)
        for (int j = 0; j < n; ++j) {
            std::vector<Poly<K>> lhs(m, Poly<K>(nv)), rhs(m, Poly<K>(nv));
            for (int f = 0; f < m; ++f) {
                const Poly<K>& u = mu.images[j][f];
                if (u.is_zero()) continue;
                int sign = dst.eps(src.degrees[j] - dst.degrees[f]);
                for (int h = 0; h < m; ++h) {
                    if (dst.d[h][f].is_zero()) continue;
                    Poly<K> prod = u * dst.d[h][f];
                    lhs[h] += sign > 0 ? prod : -prod;
                }
            }
            for (int i = 0; i < n; ++i) {
                const Poly<K>& dij = src.d[i][j];
                if (dij.is_zero()) continue;
                for (int h = 0; h < m; ++h) {
                    const Poly<K>& u = mu.images[i][h];
                    if (!u.is_zero()) rhs[h] += dij * u;
                }
            }
            for (int h = 0; h < m; ++h)
                if (lhs[h] != rhs[h]) {
                    out.chain_map = false;
                    out.failure = "not a chain map on " + src.labels[j] + " at component " +
                                  dst.labels[h];
                    return out;
                }
        }
    }
    if (!out.chain_map) return out;

    DGRealization<K> rs(src, w), rd(dst, w);
    out.quasi_iso = chain_quasi_iso(rs.chain(), rd.chain(), realize_dg_map(rs, rd, mu), w.lo, w.hi);
    return out;
}

}  // namespace dgtot
