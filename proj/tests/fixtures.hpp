#pragma once
// Shared fixtures used across the test suites.
#include "dgtot/complex.hpp"
#include "dgtot/dg.hpp"

namespace fx {

using namespace dgtot;

template <class K>
Poly<K> mono(const PolyRing& ring, std::initializer_list<int> exps, long long coeff = 1);

template <>
inline Poly<Rat> mono<Rat>(const PolyRing& ring, std::initializer_list<int> exps,
                           long long coeff) {
    return Poly<Rat>::monomial(ring.nvars(), Monomial(exps), Rat(coeff));
}
template <>
inline Poly<Fp> mono<Fp>(const PolyRing& ring, std::initializer_list<int> exps,
                         long long coeff) {
    return Poly<Fp>::monomial(ring.nvars(), Monomial(exps), Fp(coeff, ring.field.characteristic));
}

inline PolyRing ring_q(std::vector<std::string> vars) { return PolyRing{{0}, std::move(vars)}; }
inline PolyRing ring_fp(std::uint32_t p, std::vector<std::string> vars) {
    return PolyRing{{p}, std::move(vars)};
}

/// Rank-four module over k[x1,x2] with degrees (0,3,4,8):
/// ∂e2 = x1x2 e1, ∂e3 = x2^3 e1, ∂e4 = x1^7 e1 - x2^4 e2 + x1x2^2 e3.
template <class K>
SemifreeDG<K> e1_module(const PolyRing& ring) {
    auto m = SemifreeDG<K>::zero_diff(ring, {"e1", "e2", "e3", "e4"}, {0, 3, 4, 8},
                                      SignConvention::even);
    m.d[0][1] = mono<K>(ring, {1, 1});
    m.d[0][2] = mono<K>(ring, {0, 3});
    m.d[0][3] = mono<K>(ring, {7, 0});
    m.d[1][3] = mono<K>(ring, {0, 4}, -1);
    m.d[2][3] = mono<K>(ring, {1, 2});
    return m;
}

/// Crossing example over k[x,y,z], degrees (0,2,3,5):
/// ∂e2 = x e1, ∂e3 = yz e1, ∂e4 = xz^3 e1 + yz e2 - x e3.
template <class K>
SemifreeDG<K> crossing_module(const PolyRing& ring) {
    auto m = SemifreeDG<K>::zero_diff(ring, {"e1", "e2", "e3", "e4"}, {0, 2, 3, 5},
                                      SignConvention::even);
    m.d[0][1] = mono<K>(ring, {1, 0, 0});
    m.d[0][2] = mono<K>(ring, {0, 1, 1});
    m.d[0][3] = mono<K>(ring, {1, 0, 3});
    m.d[1][3] = mono<K>(ring, {0, 1, 1});
    m.d[2][3] = mono<K>(ring, {1, 0, 0}, -1);
    return m;
}

/// Same module after the substitution e4' = e4 - z^3 e2 (crossing-free).
template <class K>
SemifreeDG<K> crossing_module_rebased(const PolyRing& ring) {
    auto m = crossing_module<K>(ring);
    m.d[0][3] = Poly<K>(ring.nvars());
    return m;
}

/// Rank-five module over k[x], degrees (0,2,4,8,9):
/// ∂e4 = x^7 e1 + x^5 e2, ∂e5 = x^4 e3.
template <class K>
SemifreeDG<K> e3_module(const PolyRing& ring) {
    auto m = SemifreeDG<K>::zero_diff(ring, {"e1", "e2", "e3", "e4", "e5"}, {0, 2, 4, 8, 9},
                                      SignConvention::even);
    m.d[0][3] = mono<K>(ring, {7});
    m.d[1][3] = mono<K>(ring, {5});
    m.d[2][4] = mono<K>(ring, {4});
    return m;
}

/// Koszul-style complex 0 -> Σ^1 A --x--> A -> 0 over any ring (x = first
/// variable), positions 1, 0.
template <class K>
GradedComplex<K> koszul_line(const PolyRing& ring) {
    GradedComplex<K> c;
    c.ring = ring;
    c.modules[0] = TwistedFreeModule{{0}, {"u0"}};
    c.modules[1] = TwistedFreeModule{{1}, {"u1"}};
    auto d = GradedMatrix<K>::zero(c.modules[1], c.modules[0], ring.nvars());
    Monomial x(ring.nvars(), 0);
    x[0] = 1;
    d.at(0, 0) = Poly<K>::monomial(ring.nvars(), x, K::one());
    c.differentials[1] = std::move(d);
    return c;
}

/// The de-totaled crossing example: 0 -> Σ^{-2}A e4 -> Σ^{-1}(A e2 ⊕ A e3)
/// -> A e1 -> 0 with maps [yz; -x] and [x, yz]... positions 2, 1, 0 with
/// twists chosen so totaling returns degrees (0,2,3,5).
template <class K>
GradedComplex<K> detotaled_crossing_complex(const PolyRing& ring) {
    GradedComplex<K> c;
    c.ring = ring;
    c.modules[0] = TwistedFreeModule{{0}, {"e1"}};
    c.modules[1] = TwistedFreeModule{{1, 2}, {"e2", "e3"}};
    c.modules[2] = TwistedFreeModule{{3}, {"e4"}};
    auto d1 = GradedMatrix<K>::zero(c.modules[1], c.modules[0], ring.nvars());
    d1.at(0, 0) = mono<K>(ring, {1, 0, 0});      // x
    d1.at(0, 1) = mono<K>(ring, {0, 1, 1});      // yz
    auto d2 = GradedMatrix<K>::zero(c.modules[2], c.modules[1], ring.nvars());
    d2.at(0, 0) = mono<K>(ring, {0, 1, 1});      // yz
    d2.at(1, 0) = mono<K>(ring, {1, 0, 0}, -1);  // -x
    c.differentials[1] = std::move(d1);
    c.differentials[2] = std::move(d2);
    return c;
}

}  // namespace fx
