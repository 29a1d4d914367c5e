#pragma once
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dgtot/common.hpp"
#include "dgtot/field.hpp"

namespace dgtot {

/// Exponent vector of a monomial; length = number of ring variables.
using Monomial = std::vector<int>;

inline int mono_degree(const Monomial& m) {
    int d = 0;
    for (int e : m) d += e;
    return d;
}

inline Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline bool mono_divides(const Monomial& a, const Monomial& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

/// All monomials of total degree j in nv variables, in ascending
/// lexicographic order on exponent vectors.  Empty for j < 0.
inline std::vector<Monomial> monomials_of_degree(int nv, int j) {
    std::vector<Monomial> out;
    if (j < 0 || nv < 1) return out;
    Monomial cur(nv, 0);
    // recursive enumeration, first variable ascending
    auto rec = [&](auto&& self, int pos, int rem) -> void {
        if (pos == nv - 1) {
            cur[pos] = rem;
            out.push_back(cur);
            return;
        }
        for (int e = 0; e <= rem; ++e) {
            cur[pos] = e;
            self(self, pos + 1, rem - e);
        }
    };
    rec(rec, 0, j);
    return out;
}

/// Describes the standard-graded polynomial ring A = k[x_1..x_d]: the
/// coefficient field and the variable names.  Every variable has degree 1.
struct PolyRing {
    FieldSpec field;
    std::vector<std::string> vars;

    int nvars() const { return static_cast<int>(vars.size()); }
    void check() const {
        if (vars.empty()) throw error("polynomial ring needs at least one variable");
        for (size_t i = 0; i < vars.size(); ++i)
            for (size_t j = i + 1; j < vars.size(); ++j)
                if (vars[i] == vars[j]) throw error("duplicate variable name " + vars[i]);
        if (!field.is_rational() && !is_prime(field.characteristic))
            throw error("field characteristic must be 0 or prime");
    }
};

/// Sparse multivariate polynomial with exact coefficients.  Terms are kept
/// in a map ordered ascending-lex on exponent vectors; no zero coefficients
/// are ever stored.
template <class K>
class Poly {
  public:
    Poly() = default;
    explicit Poly(int nvars) : nv_(nvars) {}

    static Poly zero(int nv) { return Poly(nv); }
    static Poly constant(int nv, K c) {
        Poly p(nv);
        if (!c.is_zero()) p.terms_[Monomial(nv, 0)] = std::move(c);
        return p;
    }
    static Poly monomial(int nv, Monomial m, K c) {
        Poly p(nv);
        if (!c.is_zero()) p.terms_[std::move(m)] = std::move(c);
        return p;
    }
    static Poly variable(int nv, int idx, K one_val = K::one()) {
        Monomial m(nv, 0);
        m[idx] = 1;
        return monomial(nv, m, one_val);
    }

    int nvars() const { return nv_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Monomial, K>& terms() const { return terms_; }
    size_t term_count() const { return terms_.size(); }

    K coeff(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? K() : it->second;
    }

    /// Total degree of the highest term; -1 for the zero polynomial.
    int degree() const {
        int d = -1;
        for (auto& [m, c] : terms_) d = std::max(d, mono_degree(m));
        return d;
    }

    /// Degree if homogeneous (0 polynomial reports any degree as ok).
    std::optional<int> homogeneous_degree() const {
        std::optional<int> d;
        for (auto& [m, c] : terms_) {
            int md = mono_degree(m);
            if (d && *d != md) return std::nullopt;
            d = md;
        }
        return d ? d : std::optional<int>(-1);  // -1 marks the zero polynomial
    }
    bool is_homogeneous() const { return homogeneous_degree().has_value(); }

    void add_term(const Monomial& m, const K& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Poly operator-() const {
        Poly r(nv_);
        for (auto& [m, c] : terms_) r.terms_[m] = -c;
        return r;
    }
    Poly& operator+=(const Poly& o) {
        check_ring(o);
        for (auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        check_ring(o);
        for (auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        a.check_ring(b);
        Poly r(a.nv_);
        for (auto& [ma, ca] : a.terms_)
            for (auto& [mb, cb] : b.terms_) r.add_term(mono_mul(ma, mb), ca * cb);
        return r;
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    Poly scaled(const K& c) const {
        Poly r(nv_);
        if (c.is_zero()) return r;
        for (auto& [m, k] : terms_) {
            K v = k * c;
            if (!v.is_zero()) r.terms_[m] = v;
        }
        return r;
    }
    Poly times_monomial(const Monomial& m) const {
        Poly r(nv_);
        for (auto& [mm, c] : terms_) r.terms_[mono_mul(mm, m)] = c;
        return r;
    }

    bool operator==(const Poly& o) const { return nv_ == o.nv_ && terms_ == o.terms_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    /// Splits into homogeneous components; empty map iff zero.
    std::map<int, Poly> homogeneous_components() const {
        std::map<int, Poly> out;
        for (auto& [m, c] : terms_) {
            int d = mono_degree(m);
            auto it = out.find(d);
            if (it == out.end()) it = out.emplace(d, Poly(nv_)).first;
            it->second.terms_[m] = c;
        }
        return out;
    }

  private:
    void check_ring(const Poly& o) const {
        if (nv_ != o.nv_) throw error("polynomial ring mismatch");
    }

    int nv_ = 0;
    std::map<Monomial, K> terms_;
};

enum class PolyOp { add, sub, mul };

template <class K>
Poly<K> poly_arith(const Poly<K>& p, const Poly<K>& q, PolyOp op) {
    switch (op) {
        case PolyOp::add: return p + q;
        case PolyOp::sub: return p - q;
        case PolyOp::mul: return p * q;
    }
    throw error("unknown op");
}

/// Monomial k-basis of the degree-j graded piece A_j.
inline std::vector<Monomial> graded_piece_basis(const PolyRing& ring, int j) {
    return monomials_of_degree(ring.nvars(), j);
}

}  // namespace dgtot
