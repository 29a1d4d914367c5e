#pragma once
#include <map>
#include <string>
#include <vector>

#include "dgtot/linalg.hpp"
#include "dgtot/poly.hpp"

namespace dgtot {

/// F = Σ^{a_1}A ⊕ … ⊕ Σ^{a_n}A.  The generator of Σ^a A sits in internal
/// degree a, so (Σ^a A)_j = A_{j-a}.
struct TwistedFreeModule {
    std::vector<int> twists;
    std::vector<std::string> labels;  // optional; defaulted when empty

    int rank() const { return static_cast<int>(twists.size()); }
    std::string label(int i) const {
        if (i < static_cast<int>(labels.size())) return labels[i];
        return "g" + std::to_string(i);
    }
    bool operator==(const TwistedFreeModule& o) const { return twists == o.twists; }
};

/// Basis vector of the degree-j piece of a twisted free module: generator
/// index plus a monomial of degree j - twist.
struct FreeBasisVec {
    int gen = 0;
    Monomial mono;
};

/// Ordered k-basis of F_j: generators in declaration order, monomials
/// ascending lexicographic.
inline std::vector<FreeBasisVec> free_piece_basis(const TwistedFreeModule& f, int nv, int j) {
    std::vector<FreeBasisVec> out;
    for (int g = 0; g < f.rank(); ++g)
        for (auto& m : monomials_of_degree(nv, j - f.twists[g])) out.push_back({g, m});
    return out;
}

inline int free_piece_dim(const TwistedFreeModule& f, int nv, int j) {
    long long d = 0;
    for (int t : f.twists)
        if (j - t >= 0) d += binomial(j - t + nv - 1, nv - 1);
    return static_cast<int>(d);
}

/// Degree-zero homogeneous map between twisted free modules, as a matrix of
/// polynomials.  Entry (i,j) maps the j-th source generator (twist c_j) to
/// the i-th target generator (twist r_i) and must be zero or homogeneous of
/// degree c_j - r_i.
template <class K>
struct GradedMatrix {
    TwistedFreeModule source;  // column twists c_j
    TwistedFreeModule target;  // row twists r_i
    std::vector<std::vector<Poly<K>>> entries;  // entries[i][j]

    int rows() const { return target.rank(); }
    int cols() const { return source.rank(); }

    static GradedMatrix zero(TwistedFreeModule src, TwistedFreeModule dst, int nv) {
        GradedMatrix m;
        m.source = std::move(src);
        m.target = std::move(dst);
        m.entries.assign(m.rows(), std::vector<Poly<K>>(m.cols(), Poly<K>(nv)));
        return m;
    }

    const Poly<K>& at(int i, int j) const { return entries[i][j]; }
    Poly<K>& at(int i, int j) { return entries[i][j]; }

    int nvars() const {
        for (auto& row : entries)
            for (auto& p : row)
                if (p.nvars() > 0) return p.nvars();
        return entries.empty() || entries[0].empty() ? 0 : entries[0][0].nvars();
    }

    struct HomogeneityIssue {
        int row = -1, col = -1;
        int expected = 0;
        std::string what;
    };

    /// Every nonzero entry must be homogeneous of degree c_j - r_i.
    std::optional<HomogeneityIssue> homogeneity_violation() const {
        for (int i = 0; i < rows(); ++i)
            for (int j = 0; j < cols(); ++j) {
                const Poly<K>& p = entries[i][j];
                if (p.is_zero()) continue;
                int expected = source.twists[j] - target.twists[i];
                auto d = p.homogeneous_degree();
                if (!d || *d != expected)
                    return HomogeneityIssue{i, j, expected,
                                            "entry (" + std::to_string(i) + "," +
                                                std::to_string(j) + ") not homogeneous of degree " +
                                                std::to_string(expected)};
            }
        return std::nullopt;
    }
    bool is_homogeneous() const { return !homogeneity_violation().has_value(); }

    friend GradedMatrix operator*(const GradedMatrix& f, const GradedMatrix& g) {
        if (g.target.twists != f.source.twists) throw error("graded matrix composition mismatch");
        int nv = f.nvars() ? f.nvars() : g.nvars();
        GradedMatrix r = GradedMatrix::zero(g.source, f.target, nv);
        for (int i = 0; i < f.rows(); ++i)
            for (int j = 0; j < g.cols(); ++j) {
                Poly<K> s(nv);
                for (int k = 0; k < f.cols(); ++k)
                    if (!f.at(i, k).is_zero() && !g.at(k, j).is_zero())
                        s += f.at(i, k) * g.at(k, j);
                r.at(i, j) = std::move(s);
            }
        return r;
    }

    bool is_zero() const {
        for (auto& row : entries)
            for (auto& p : row)
                if (!p.is_zero()) return false;
        return true;
    }
};

/// Exact k-matrix of a graded map on the degree-j pieces.  Rows and columns
/// are indexed by free_piece_basis of target and source.
template <class K>
KMat<K> realize_degree(const GradedMatrix<K>& m, int nv, int j) {
    auto src = free_piece_basis(m.source, nv, j);
    auto dst = free_piece_basis(m.target, nv, j);
    std::map<std::pair<int, Monomial>, int> dst_index;
    for (size_t r = 0; r < dst.size(); ++r) dst_index[{dst[r].gen, dst[r].mono}] = static_cast<int>(r);
    KMat<K> out(static_cast<int>(dst.size()), static_cast<int>(src.size()));
    for (size_t c = 0; c < src.size(); ++c) {
        int g = src[c].gen;
        for (int i = 0; i < m.rows(); ++i) {
            const Poly<K>& p = m.at(i, g);
            if (p.is_zero()) continue;
            for (auto& [mono, coeff] : p.terms()) {
                auto it = dst_index.find({i, mono_mul(mono, src[c].mono)});
                if (it == dst_index.end()) throw error("realization index out of range");
                out.at(it->second, static_cast<int>(c)) += coeff;
            }
        }
    }
    return out;
}

/// Realized multiplication x_t : F_j -> F_{j+1} on a twisted free module.
template <class K>
KMat<K> realize_var_action(const TwistedFreeModule& f, int nv, int var, int j) {
    auto src = free_piece_basis(f, nv, j);
    auto dst = free_piece_basis(f, nv, j + 1);
    std::map<std::pair<int, Monomial>, int> dst_index;
    for (size_t r = 0; r < dst.size(); ++r) dst_index[{dst[r].gen, dst[r].mono}] = static_cast<int>(r);
    KMat<K> out(static_cast<int>(dst.size()), static_cast<int>(src.size()));
    for (size_t c = 0; c < src.size(); ++c) {
        Monomial m = src[c].mono;
        m[var] += 1;
        auto it = dst_index.find({src[c].gen, m});
        if (it == dst_index.end()) throw error("variable action index out of range");
        out.at(it->second, static_cast<int>(c)) = K::one();
    }
    return out;
}

template <class K>
struct DegreewiseKernelImage {
    std::map<int, std::vector<std::vector<K>>> kernel;  // per degree, coordinate vectors
    std::map<int, std::vector<std::vector<K>>> image;   // basis of im at each degree of the target
};

/// Exact per-degree kernels and images of a graded matrix inside [window].
/// Kernel vectors live in source coordinates at degree j, image vectors in
/// target coordinates at degree j.
template <class K>
DegreewiseKernelImage<K> kernel_image_degreewise(const GradedMatrix<K>& m, int nv, Window w) {
    DegreewiseKernelImage<K> out;
    for (int j = w.lo; j <= w.hi; ++j) {
        KMat<K> mat = realize_degree(m, nv, j);
        out.kernel[j] = kernel_basis(mat);
        Subspace<K> img(mat.nr);
        for (int c = 0; c < mat.nc; ++c) {
            std::vector<K> v(mat.nr);
            for (int r = 0; r < mat.nr; ++r) v[r] = mat.at(r, c);
            img.insert(std::move(v));
        }
        // reduced row basis, deterministic
        out.image[j] = img.rows();
        // rank-nullity check
        if (static_cast<int>(out.kernel[j].size()) + img.dim() != mat.nc)
            throw error("rank-nullity violated (internal)");
    }
    return out;
}

/// One extracted generator of a graded subquotient.
template <class K>
struct GradedGenerator {
    int degree = 0;
    std::vector<K> rep;  // coordinates in the ambient degree piece
};

/// Minimal generators of a per-degree family of subspaces V_j (closed under
/// the degree-1 variable action, optionally modulo U_j).  In each degree the
/// generator count is dim(V_j / (U_j + A_1 V_{j-1})).
///
/// `ambient_dim(j)` gives the ambient dimension, `var_map(t, j)` the realized
/// multiplication map from degree j to j+1.
template <class K, class AmbientDim, class VarMap>
std::vector<GradedGenerator<K>> graded_min_gens(
    const std::map<int, std::vector<std::vector<K>>>& v,
    const std::map<int, std::vector<std::vector<K>>>* u, Window w, int nv,
    AmbientDim&& ambient_dim, VarMap&& var_map) {
    std::vector<GradedGenerator<K>> gens;
    for (int j = w.lo; j <= w.hi; ++j) {
        auto vit = v.find(j);
        if (vit == v.end() || vit->second.empty()) continue;
        Subspace<K> wsp(ambient_dim(j));
        if (u) {
            auto uit = u->find(j);
            if (uit != u->end())
                for (auto& vec : uit->second) wsp.insert(vec);
        }
        auto vprev = v.find(j - 1);
        if (vprev != v.end() && !vprev->second.empty()) {
            for (int t = 0; t < nv; ++t) {
                KMat<K> xm = var_map(t, j - 1);
                for (auto& vec : vprev->second) wsp.insert(xm.apply(vec));
            }
        }
        auto reps = complement_reps(wsp, vit->second);
        for (auto& r : reps) gens.push_back({j, std::move(r)});
    }
    return gens;
}

}  // namespace dgtot
