#pragma once
#include <algorithm>
#include <climits>
#include <optional>
#include <utility>
#include <vector>

#include "dgtot/common.hpp"

namespace dgtot {

/// Dense exact matrix over the scalar type K.
template <class K>
struct KMat {
    int nr = 0, nc = 0;
    std::vector<K> e;

    KMat() = default;
    KMat(int r, int c) : nr(r), nc(c), e(static_cast<size_t>(r) * c) {}

    K& at(int r, int c) { return e[static_cast<size_t>(r) * nc + c]; }
    const K& at(int r, int c) const { return e[static_cast<size_t>(r) * nc + c]; }

    static KMat identity(int n) {
        KMat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = K::one();
        return m;
    }

    bool is_zero() const {
        for (auto& x : e)
            if (!x.is_zero()) return false;
        return true;
    }

    friend KMat operator*(const KMat& a, const KMat& b) {
        if (a.nc != b.nr) throw error("matrix shape mismatch");
        KMat r(a.nr, b.nc);
        for (int i = 0; i < a.nr; ++i)
            for (int k = 0; k < a.nc; ++k) {
                const K& aik = a.at(i, k);
                if (aik.is_zero()) continue;
                for (int j = 0; j < b.nc; ++j) {
                    const K& bkj = b.at(k, j);
                    if (!bkj.is_zero()) r.at(i, j) += aik * bkj;
                }
            }
        return r;
    }
    friend KMat operator-(const KMat& a, const KMat& b) {
        if (a.nr != b.nr || a.nc != b.nc) throw error("matrix shape mismatch");
        KMat r(a.nr, a.nc);
        for (size_t i = 0; i < a.e.size(); ++i) r.e[i] = a.e[i] - b.e[i];
        return r;
    }
    bool operator==(const KMat& o) const { return nr == o.nr && nc == o.nc && e == o.e; }

    std::vector<K> apply(const std::vector<K>& v) const {
        if (static_cast<int>(v.size()) != nc) throw error("vector length mismatch");
        std::vector<K> r(nr);
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nc; ++j)
                if (!at(i, j).is_zero() && !v[j].is_zero()) r[i] += at(i, j) * v[j];
        return r;
    }
};

template <class K>
struct Rref {
    KMat<K> m;
    std::vector<int> pivot_cols;
    int rank = 0;
};

/// Reduced row echelon form; deterministic (first nonzero pivot per column,
/// scanning columns left to right).
template <class K>
Rref<K> rref(KMat<K> a) {
    Rref<K> out;
    int row = 0;
    for (int col = 0; col < a.nc && row < a.nr; ++col) {
        int piv = -1;
        for (int r = row; r < a.nr; ++r)
            if (!a.at(r, col).is_zero()) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        if (piv != row)
            for (int c = 0; c < a.nc; ++c) std::swap(a.at(piv, c), a.at(row, c));
        K inv = a.at(row, col).inv();
        for (int c = col; c < a.nc; ++c)
            if (!a.at(row, c).is_zero()) a.at(row, c) *= inv;
        for (int r = 0; r < a.nr; ++r) {
            if (r == row) continue;
            K f = a.at(r, col);
            if (f.is_zero()) continue;
            for (int c = col; c < a.nc; ++c)
                if (!a.at(row, c).is_zero()) a.at(r, c) -= f * a.at(row, c);
        }
        out.pivot_cols.push_back(col);
        ++row;
    }
    out.rank = row;
    out.m = std::move(a);
    return out;
}

template <class K>
int rank(const KMat<K>& a) {
    return rref(a).rank;
}

/// Basis of ker(a) as column vectors.  Free-variable convention: each basis
/// vector sets one non-pivot coordinate to 1 (ascending), pivots solved.
template <class K>
std::vector<std::vector<K>> kernel_basis(const KMat<K>& a) {
    Rref<K> r = rref(a);
    std::vector<bool> is_pivot(a.nc, false);
    for (int c : r.pivot_cols) is_pivot[c] = true;
    std::vector<std::vector<K>> out;
    for (int fc = 0; fc < a.nc; ++fc) {
        if (is_pivot[fc]) continue;
        std::vector<K> v(a.nc);
        v[fc] = K::one();
        for (size_t pr = 0; pr < r.pivot_cols.size(); ++pr) {
            const K& x = r.m.at(static_cast<int>(pr), fc);
            if (!x.is_zero()) v[r.pivot_cols[pr]] = -x;
        }
        out.push_back(std::move(v));
    }
    return out;
}

/// Particular solution of a x = b (free variables set to 0), if consistent.
template <class K>
std::optional<std::vector<K>> solve(const KMat<K>& a, const std::vector<K>& b) {
    if (static_cast<int>(b.size()) != a.nr) throw error("rhs length mismatch");
    KMat<K> aug(a.nr, a.nc + 1);
    for (int i = 0; i < a.nr; ++i) {
        for (int j = 0; j < a.nc; ++j) aug.at(i, j) = a.at(i, j);
        aug.at(i, a.nc) = b[i];
    }
    Rref<K> r = rref(std::move(aug));
    for (int c : r.pivot_cols)
        if (c == a.nc) return std::nullopt;  // inconsistent
    std::vector<K> x(a.nc);
    for (size_t pr = 0; pr < r.pivot_cols.size(); ++pr)
        x[r.pivot_cols[pr]] = r.m.at(static_cast<int>(pr), a.nc);
    return x;
}

/// A subspace of K^n kept in reduced row form for membership tests,
/// canonical reduction, and incremental basis growth.
template <class K>
class Subspace {
  public:
    Subspace() = default;
    explicit Subspace(int ambient) : n_(ambient) {}

    int ambient() const { return n_; }
    int dim() const { return static_cast<int>(rows_.size()); }

    /// Reduce v against the stored rows; the result has zeros in all pivot
    /// coordinates.  v is in the subspace iff the result is zero.
    std::vector<K> reduce(std::vector<K> v) const {
        for (size_t i = 0; i < rows_.size(); ++i) {
            K c = v[pivots_[i]];  // by value: the loop below writes v[pivot]
            if (c.is_zero()) continue;
            for (int j = 0; j < n_; ++j)
                if (!rows_[i][j].is_zero()) v[j] -= c * rows_[i][j];
        }
        return v;
    }

    bool contains(const std::vector<K>& v) const {
        auto r = reduce(v);
        for (auto& x : r)
            if (!x.is_zero()) return false;
        return true;
    }

    /// Insert v; returns true if it enlarged the subspace.
    bool insert(std::vector<K> v) {
        v = reduce(std::move(v));
        int p = -1;
        for (int j = 0; j < n_; ++j)
            if (!v[j].is_zero()) {
                p = j;
                break;
            }
        if (p < 0) return false;
        K inv = v[p].inv();
        for (auto& x : v) x *= inv;
        // back-substitute into existing rows for full reduction
        for (size_t i = 0; i < rows_.size(); ++i) {
            K c = rows_[i][p];  // by value: aliasing with the write below
            if (c.is_zero()) continue;
            for (int j = 0; j < n_; ++j)
                if (!v[j].is_zero()) rows_[i][j] -= c * v[j];
        }
        size_t pos = 0;
        while (pos < pivots_.size() && pivots_[pos] < p) ++pos;
        rows_.insert(rows_.begin() + pos, std::move(v));
        pivots_.insert(pivots_.begin() + pos, p);
        return true;
    }

    const std::vector<std::vector<K>>& rows() const { return rows_; }

  private:
    int n_ = 0;
    std::vector<std::vector<K>> rows_;
    std::vector<int> pivots_;
};

template <class K>
Subspace<K> span_of(int ambient, const std::vector<std::vector<K>>& vecs) {
    Subspace<K> s(ambient);
    for (auto& v : vecs) s.insert(v);
    return s;
}

/// Representatives of a complement of W inside span(W ∪ gens): each returned
/// vector is a reduced generator that enlarged W.  Deterministic in the
/// order of `gens`.
template <class K>
std::vector<std::vector<K>> complement_reps(Subspace<K>& w,
                                            const std::vector<std::vector<K>>& gens) {
    std::vector<std::vector<K>> out;
    for (auto& g : gens) {
        auto r = w.reduce(g);
        bool nz = false;
        for (auto& x : r) nz = nz || !x.is_zero();
        if (!nz) continue;
        // normalize so the leading coordinate is 1
        int p = 0;
        while (r[p].is_zero()) ++p;
        K inv = r[p].inv();
        for (auto& x : r) x *= inv;
        w.insert(r);
        out.push_back(std::move(r));
    }
    return out;
}

/// Columns of m spanning its column space, as a Subspace.
template <class K>
Subspace<K> column_space(const KMat<K>& m) {
    Subspace<K> s(m.nr);
    for (int c = 0; c < m.nc; ++c) {
        std::vector<K> v(m.nr);
        for (int r = 0; r < m.nr; ++r) v[r] = m.at(r, c);
        s.insert(std::move(v));
    }
    return s;
}

/// Rows C with C m = 0 spanning the left null space (cokernel conditions).
template <class K>
std::vector<std::vector<K>> left_nullspace(const KMat<K>& m) {
    KMat<K> t(m.nc, m.nr);
    for (int i = 0; i < m.nr; ++i)
        for (int j = 0; j < m.nc; ++j) t.at(j, i) = m.at(i, j);
    return kernel_basis(t);
}

/// Bounded chain complex of finite-dimensional k-spaces.  Positions run over
/// [lo, hi]; d[i] maps piece(i) -> piece(i-1), and d[lo] maps to 0.
template <class K>
struct KChain {
    int lo = 0, hi = -1;
    std::vector<int> dims;        // dims[i - lo]
    std::vector<KMat<K>> d;       // d[i - lo] : piece(i) -> piece(i-1)

    int dim(int i) const { return (i < lo || i > hi) ? 0 : dims[i - lo]; }
    const KMat<K>* diff(int i) const {
        if (i < lo || i > hi) return nullptr;
        return &d[i - lo];
    }
    void check() const {
        for (int i = lo; i <= hi; ++i) {
            int below = i - 1 < lo ? 0 : dims[i - 1 - lo];
            if (d[i - lo].nc != dims[i - lo] || d[i - lo].nr != below)
                throw error("chain shape mismatch at position " + std::to_string(i));
        }
    }
};

/// dim H_i for every i in [lo, hi].
template <class K>
std::vector<int> chain_homology_dims(const KChain<K>& x) {
    std::vector<int> h(x.dims.size(), 0);
    for (int i = x.lo; i <= x.hi; ++i) {
        int z = x.dim(i) - rank(*x.diff(i));
        int b = (i + 1 <= x.hi) ? rank(*x.diff(i + 1)) : 0;
        h[i - x.lo] = z - b;
    }
    return h;
}

/// Degree-zero map of chains, components per position.
template <class K>
struct KChainMap {
    int lo = 0, hi = -1;
    std::vector<KMat<K>> comp;  // comp[i - lo] : X(i) -> Y(i)
    const KMat<K>* at(int i) const {
        if (i < lo || i > hi) return nullptr;
        return &comp[i - lo];
    }
};

struct QuasiIsoPosition {
    int position = 0;
    int dim_hx = 0, dim_hy = 0, induced_rank = 0;
    bool ok = false;
};

struct QuasiIsoCert {
    bool is_quasi_iso = true;
    std::vector<QuasiIsoPosition> per_position;
};

/// Checks that f induces isomorphisms H_i(X) -> H_i(Y) for every position i
/// in [cert_lo, cert_hi] (defaults to the union of the chains' ranges).
template <class K>
QuasiIsoCert chain_quasi_iso(const KChain<K>& x, const KChain<K>& y, const KChainMap<K>& f,
                             int cert_lo = INT_MIN, int cert_hi = INT_MAX) {
    QuasiIsoCert cert;
    int lo = std::max(std::min(x.lo, y.lo), cert_lo);
    int hi = std::min(std::max(x.hi, y.hi), cert_hi);
    for (int i = lo; i <= hi; ++i) {
        // cycles of X at i
        std::vector<std::vector<K>> zx;
        if (x.dim(i) > 0)
            zx = x.diff(i) ? kernel_basis(*x.diff(i)) : std::vector<std::vector<K>>();
        int dim_bx = (i + 1 <= x.hi && x.dim(i) > 0) ? rank(*x.diff(i + 1)) : 0;
        int dim_hx = static_cast<int>(zx.size()) - dim_bx;

        int dim_zy = y.dim(i) > 0 ? y.dim(i) - rank(*y.diff(i)) : 0;
        Subspace<K> by(std::max(y.dim(i), 1));
        if (i + 1 <= y.hi && y.dim(i) > 0) {
            const KMat<K>& dy = *y.diff(i + 1);
            for (int c = 0; c < dy.nc; ++c) {
                std::vector<K> v(y.dim(i));
                for (int r = 0; r < y.dim(i); ++r) v[r] = dy.at(r, c);
                by.insert(std::move(v));
            }
        }
        int dim_hy = dim_zy - by.dim();

        // rank of the induced map: image of f(Z_X) in Z_Y / B_Y
        int induced = 0;
        if (!zx.empty() && y.dim(i) > 0) {
            Subspace<K> acc = by;
            const KMat<K>* fi = f.at(i);
            if (!fi) throw error("morphism missing component at position " + std::to_string(i));
            for (auto& z : zx)
                if (acc.insert(fi->apply(z))) ++induced;
        }
        bool ok = (induced == dim_hx) && (induced == dim_hy);
        if (dim_hx == 0 && dim_hy == 0) ok = true;
        if (!ok) cert.is_quasi_iso = false;
        if (dim_hx != 0 || dim_hy != 0 || !ok)
            cert.per_position.push_back({i, dim_hx, dim_hy, induced, ok});
    }
    return cert;
}

}  // namespace dgtot
