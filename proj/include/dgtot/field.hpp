#pragma once
#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "dgtot/common.hpp"

namespace dgtot {

/// Which exact coefficient field the computation runs over.
/// characteristic == 0 means the rationals, otherwise a prime p < 2^31.
struct FieldSpec {
    std::uint32_t characteristic = 0;
    bool is_rational() const { return characteristic == 0; }
    bool operator==(const FieldSpec&) const = default;
    std::string str() const {
        return is_rational() ? "Q" : "F" + std::to_string(characteristic);
    }
};

inline bool is_prime(std::uint64_t p) {
    if (p < 2) return false;
    for (std::uint64_t q = 2; q * q <= p; ++q)
        if (p % q == 0) return false;
    return true;
}

/// Exact rational scalar.  Arbitrary-precision; every operation is exact.
class Rat {
  public:
    using rep = boost::multiprecision::cpp_rational;

    Rat() = default;
    Rat(long long n) : v_(n) {}
    Rat(long long num, long long den) : v_(rep(num) / rep(den)) {
        if (den == 0) throw error("rational with zero denominator");
    }
    explicit Rat(rep v) : v_(std::move(v)) {}

    static Rat zero() { return Rat(); }
    static Rat one() { return Rat(1); }
    static FieldSpec spec() { return FieldSpec{0}; }

    bool is_zero() const { return v_.is_zero(); }
    Rat operator-() const { return Rat(rep(-v_)); }
    Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
    Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
    Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
    Rat& operator/=(const Rat& o) {
        if (o.is_zero()) throw error("division by zero");
        v_ /= o.v_;
        return *this;
    }
    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
    Rat inv() const { return Rat::one() / *this; }
    bool operator==(const Rat& o) const { return v_ == o.v_; }
    bool operator!=(const Rat& o) const { return v_ != o.v_; }

    std::string str() const { return v_.str(); }
    const rep& value() const { return v_; }

  private:
    rep v_;
};

/// Element of a prime field F_p, p < 2^31.  A default-constructed value is
/// an "unbound" zero with p == 0; it binds to the modulus of the first
/// bound operand it meets.  All bound values keep 0 <= v < p.
class Fp {
  public:
    Fp() = default;
    Fp(long long n, std::uint32_t p) : p_(p) { set(n); }

    static Fp zero() { return Fp(); }
    static Fp one() { return Fp(1, 0); }

    bool is_zero() const { return v_ == 0; }
    std::uint32_t modulus() const { return p_; }

    Fp operator-() const { return binary(*this, Fp(), [](long long a, long long) { return -a; }); }
    friend Fp operator+(const Fp& a, const Fp& b) {
        return binary(a, b, [](long long x, long long y) { return x + y; });
    }
    friend Fp operator-(const Fp& a, const Fp& b) {
        return binary(a, b, [](long long x, long long y) { return x - y; });
    }
    friend Fp operator*(const Fp& a, const Fp& b) {
        return binary(a, b, [](long long x, long long y) { return x * y; });
    }
    friend Fp operator/(const Fp& a, const Fp& b) { return a * b.inv(); }
    Fp& operator+=(const Fp& o) { return *this = *this + o; }
    Fp& operator-=(const Fp& o) { return *this = *this - o; }
    Fp& operator*=(const Fp& o) { return *this = *this * o; }
    Fp& operator/=(const Fp& o) { return *this = *this / o; }

    Fp inv() const {
        if (is_zero()) throw error("division by zero in F_p");
        if (p_ == 0) return *this;  // unbound 1
        // extended Euclid
        long long a = v_, m = p_, x0 = 0, x1 = 1;
        long long b = m;
        while (a > 1) {
            long long q = a / b;
            long long t = b;
            b = a % b;
            a = t;
            t = x0;
            x0 = x1 - q * x0;
            x1 = t;
        }
        Fp r;
        r.p_ = p_;
        r.set(x1);
        return r;
    }

    bool operator==(const Fp& o) const {
        std::uint32_t p = p_ ? p_ : o.p_;
        if (p_ && o.p_ && p_ != o.p_) throw error("F_p modulus mismatch");
        if (p == 0) return v_ == o.v_;
        return reduce(v_, p) == reduce(o.v_, p);
    }
    bool operator!=(const Fp& o) const { return !(*this == o); }

    std::string str() const { return std::to_string(v_); }
    long long value() const { return v_; }

  private:
    static long long reduce(long long n, std::uint32_t p) {
        long long m = n % static_cast<long long>(p);
        if (m < 0) m += p;
        return m;
    }
    template <class F>
    static Fp binary(const Fp& a, const Fp& b, F&& f) {
        Fp r;
        r.p_ = a.p_ ? a.p_ : b.p_;
        if (a.p_ && b.p_ && a.p_ != b.p_) throw error("F_p modulus mismatch");
        r.set(f(a.v_, b.v_));
        return r;
    }
    void set(long long n) {
        v_ = p_ == 0 ? n : reduce(n, p_);
    }

    long long v_ = 0;
    std::uint32_t p_ = 0;
};

template <class K>
K make_scalar(const FieldSpec& fs, long long n);

template <>
inline Rat make_scalar<Rat>(const FieldSpec&, long long n) {
    return Rat(n);
}
template <>
inline Fp make_scalar<Fp>(const FieldSpec& fs, long long n) {
    return Fp(n, fs.characteristic);
}

}  // namespace dgtot
