#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "dgtot/random.hpp"
#include "dgtot/univariate.hpp"
#include "fixtures.hpp"

using namespace dgtot;

namespace {

// ungraded Smith-normal-form oracle over k[x]: full polynomial division
// pivoting, returns the multiset of diagonal degrees
std::multiset<int> snf_degree_oracle(std::vector<std::vector<Poly<Rat>>> m) {
    auto deg = [](const Poly<Rat>& p) { return p.degree(); };
    auto lead = [](const Poly<Rat>& p) {
        return std::make_pair(p.terms().rbegin()->first[0], p.terms().rbegin()->second);
    };
    int rows = static_cast<int>(m.size());
    int cols = rows ? static_cast<int>(m[0].size()) : 0;
    std::multiset<int> out;
    int k = 0;
    while (k < std::min(rows, cols)) {
        int bi = -1, bj = -1;
        for (int i = k; i < rows; ++i)
            for (int j = k; j < cols; ++j)
                if (!m[i][j].is_zero() && (bi < 0 || deg(m[i][j]) < deg(m[bi][bj]))) {
                    bi = i;
                    bj = j;
                }
        if (bi < 0) break;
        std::swap(m[k], m[bi]);
        for (int i = 0; i < rows; ++i) std::swap(m[i][k], m[i][bj]);
        bool again = true;
        while (again) {
            again = false;
            for (int i = k + 1; i < rows; ++i) {
                while (!m[i][k].is_zero() && deg(m[i][k]) >= deg(m[k][k])) {
                    auto [dk, ck] = lead(m[k][k]);
                    auto [di, ci] = lead(m[i][k]);
                    auto q = Poly<Rat>::monomial(1, Monomial{di - dk}, ci / ck);
                    for (int j = k; j < cols; ++j) m[i][j] -= q * m[k][j];
                }
                if (!m[i][k].is_zero()) {
                    std::swap(m[i], m[k]);
                    again = true;
                }
            }
            for (int j = k + 1; j < cols; ++j) {
                while (!m[k][j].is_zero() && deg(m[k][j]) >= deg(m[k][k])) {
                    auto [dk, ck] = lead(m[k][k]);
                    auto [dj, cj] = lead(m[k][j]);
                    auto q = Poly<Rat>::monomial(1, Monomial{dj - dk}, cj / ck);
                    for (int i = k; i < rows; ++i) m[i][j] -= q * m[i][k];
                }
                if (!m[k][j].is_zero()) {
                    for (int i = 0; i < rows; ++i) std::swap(m[i][j], m[i][k]);
                    again = true;
                }
            }
        }
        out.insert(deg(m[k][k]));
        ++k;
    }
    return out;
}

}  // namespace

TEST_CASE("graded_diagonalize on the already-diagonal E3 presentation") {
    auto ring = fx::ring_q({"x"});
    TwistedFreeModule src{{7, 8}, {}}, dst{{2, 4, 0}, {}};
    auto p = GradedMatrix<Rat>::zero(src, dst, 1);
    p.at(0, 0) = fx::mono<Rat>(ring, {5});
    p.at(1, 1) = fx::mono<Rat>(ring, {4});
    REQUIRE(p.is_homogeneous());
    auto snf = graded_diagonalize(p);
    std::set<std::pair<int, int>> pairs(snf.pairs.begin(), snf.pairs.end());
    CHECK(pairs == std::set<std::pair<int, int>>{{2, 7}, {4, 8}});
    CHECK(snf.free_row_twists == std::vector<int>{0});
}

TEST_CASE("graded_diagonalize of a 1x1 zero matrix") {
    TwistedFreeModule src{{3}, {}}, dst{{0}, {}};
    auto p = GradedMatrix<Rat>::zero(src, dst, 1);
    auto snf = graded_diagonalize(p);
    CHECK(snf.pairs.empty());
    CHECK(snf.free_row_twists == std::vector<int>{0});
}

TEST_CASE("graded_diagonalize against the ungraded SNF oracle") {
    auto ring = fx::ring_q({"x"});
    TwistedFreeModule src{{3, 2}, {}}, dst{{0, 1}, {}};
    auto p = GradedMatrix<Rat>::zero(src, dst, 1);
    p.at(0, 0) = fx::mono<Rat>(ring, {3});
    p.at(0, 1) = fx::mono<Rat>(ring, {2});
    p.at(1, 0) = fx::mono<Rat>(ring, {2});
    p.at(1, 1) = fx::mono<Rat>(ring, {1});
    REQUIRE(p.is_homogeneous());
    auto snf = graded_diagonalize(p);

    std::vector<std::vector<Poly<Rat>>> raw(2, std::vector<Poly<Rat>>(2, Poly<Rat>(1)));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) raw[i][j] = p.at(i, j);
    auto oracle = snf_degree_oracle(raw);

    std::multiset<int> mine;
    for (auto& [r, c] : snf.pairs) mine.insert(c - r);
    CHECK(mine == oracle);
    CHECK(snf.pairs.size() == 1);  // rank 1: x^3·x - x^2·x^2 = 0
}

TEST_CASE("diagonalization degrees match the oracle on random matrices") {
    Rng rng(606);
    auto ring = fx::ring_q({"x"});
    for (int t = 0; t < 50; ++t) {
        int rows = rng.range(1, 4), cols = rng.range(1, 4);
        std::vector<int> rt, ct;
        for (int i = 0; i < rows; ++i) rt.push_back(rng.range(0, 3));
        for (int j = 0; j < cols; ++j) ct.push_back(rng.range(1, 8));
        auto p = random_graded_matrix<Rat>(rng, ring, rt, ct, true);
        auto snf = graded_diagonalize(p);
        std::vector<std::vector<Poly<Rat>>> raw(rows, std::vector<Poly<Rat>>(cols, Poly<Rat>(1)));
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) raw[i][j] = p.at(i, j);
        auto oracle = snf_degree_oracle(raw);
        std::multiset<int> mine;
        for (auto& [r, c] : snf.pairs) mine.insert(c - r);
        CHECK(mine == oracle);
    }
}

TEST_CASE("betti data is invariant under invertible pre/post composition") {
    Rng rng(313);
    auto ring = fx::ring_q({"x"});
    for (int t = 0; t < 20; ++t) {
        std::vector<int> rt{0, rng.range(0, 2)}, ct{rng.range(3, 5), rng.range(4, 7)};
        auto p = random_graded_matrix<Rat>(rng, ring, rt, ct, true);
        auto snf = graded_diagonalize(p);

        auto q = p;
        // unit-triangular automorphisms on both sides preserve the data
        if (rt[1] - rt[0] >= 0) {
            auto f = random_homogeneous<Rat>(rng, 1, rt[1] - rt[0], ring.field);
            // row0 += f * row1 changes basis of the target
            for (int j = 0; j < q.cols(); ++j) q.at(0, j) += f * q.at(1, j);
        }
        if (ct[1] - ct[0] >= 0) {
            auto f = random_homogeneous<Rat>(rng, 1, ct[1] - ct[0], ring.field);
            for (int i = 0; i < q.rows(); ++i) q.at(i, 1) += f * q.at(i, 0);
        }
        auto snf2 = graded_diagonalize(q);
        std::multiset<std::pair<int, int>> a(snf.pairs.begin(), snf.pairs.end());
        std::multiset<std::pair<int, int>> b(snf2.pairs.begin(), snf2.pairs.end());
        CHECK(a == b);
        std::multiset<int> fa(snf.free_row_twists.begin(), snf.free_row_twists.end());
        std::multiset<int> fb(snf2.free_row_twists.begin(), snf2.free_row_twists.end());
        CHECK(fa == fb);
    }
}

TEST_CASE("homology_decompose of E3") {
    auto ring = fx::ring_q({"x"});
    auto m = fx::e3_module<Rat>(ring);
    auto dec = homology_decompose(m, Window{0, 16});
    CHECK(dec.torsion == std::vector<std::pair<int, int>>{{2, 7}, {4, 8}});
    CHECK(dec.free_twists == std::vector<int>{0});
    // z1 = x^2 e1 + e2, z2 = e3, z3 = e1
    CHECK(dec.torsion_cycles[0][0] == fx::mono<Rat>(ring, {2}));
    CHECK(dec.torsion_cycles[0][1] == Poly<Rat>::constant(1, Rat::one()));
    CHECK(dec.torsion_cycles[1][2] == Poly<Rat>::constant(1, Rat::one()));
    CHECK(dec.free_cycles[0][0] == Poly<Rat>::constant(1, Rat::one()));
}

TEST_CASE("homology_decompose of a zero differential is all free") {
    auto ring = fx::ring_q({"x"});
    auto m = SemifreeDG<Rat>::zero_diff(ring, {"a", "b"}, {0, 3}, SignConvention::even);
    auto dec = homology_decompose(m, Window{0, 10});
    CHECK(dec.torsion.empty());
    CHECK(dec.free_twists == std::vector<int>{0, 3});
}

TEST_CASE("decomposition hilbert function equals homology dimensions") {
    Rng rng(2025);
    auto ring = fx::ring_q({"x"});
    for (int t = 0; t < 30; ++t) {
        auto m = random_semifree<Rat>(rng, ring, 5, 8, 6, SignConvention::even);
        Window w = m.default_window();
        auto dec = homology_decompose(m, w);
        for (auto& [d, dim] : dec.presentation.h_dims) {
            int expect = 0;
            for (auto& [r, c] : dec.torsion)
                if (d >= r && d < c) ++expect;
            for (int r : dec.free_twists)
                if (d >= r) ++expect;
            CHECK(dim == expect);
        }
    }
}

TEST_CASE("build_resolution_complex for E3 and the no-torsion case") {
    auto ring = fx::ring_q({"x"});
    auto m = fx::e3_module<Rat>(ring);
    auto dec = homology_decompose(m, Window{0, 16});
    auto res = build_resolution_complex(ring, dec);
    REQUIRE(validate_complex(res.f).ok);
    CHECK(res.f.modules.at(0).twists == std::vector<int>{2, 4, 0});
    CHECK(res.f.modules.at(1).twists == std::vector<int>{7, 8});
    CHECK(res.f.differentials.at(1).at(0, 0) == fx::mono<Rat>(ring, {5}));
    CHECK(res.f.differentials.at(1).at(1, 1) == fx::mono<Rat>(ring, {4}));

    // H(F) dims equal H(M) dims in window, concentrated in position 0
    auto hf = homology_truncated(res.f, Window{0, 16});
    for (auto& [d, dim] : dec.presentation.h_dims) {
        auto it0 = hf.find({0, d});
        CHECK((it0 != hf.end() ? it0->second : 0) == dim);
        auto it1 = hf.find({1, d - 1});
        CHECK((it1 == hf.end() ? 0 : it1->second) == 0);
    }

    auto z = SemifreeDG<Rat>::zero_diff(ring, {"a"}, {2}, SignConvention::even);
    auto dz = homology_decompose(z, Window{0, 8});
    auto rz = build_resolution_complex(ring, dz);
    CHECK(rz.f.hi_position() == 0);
    CHECK(rz.f.modules.at(0).twists == std::vector<int>{2});
}

TEST_CASE("boundary_preimage on E3") {
    auto ring = fx::ring_q({"x"});
    auto m = fx::e3_module<Rat>(ring);
    // x^5 · z1 = x^7 e1 + x^5 e2 has preimage e4
    std::vector<Poly<Rat>> t1(5, Poly<Rat>(1));
    t1[0] = fx::mono<Rat>(ring, {7});
    t1[1] = fx::mono<Rat>(ring, {5});
    auto m1 = boundary_preimage(m, 7, t1);
    CHECK(m1[3] == Poly<Rat>::constant(1, Rat::one()));
    for (int g : {0, 1, 2, 4}) CHECK(m1[g].is_zero());

    // x^4 · z2 = x^4 e3 has preimage e5
    std::vector<Poly<Rat>> t2(5, Poly<Rat>(1));
    t2[2] = fx::mono<Rat>(ring, {4});
    auto m2 = boundary_preimage(m, 8, t2);
    CHECK(m2[4] == Poly<Rat>::constant(1, Rat::one()));

    // zero target: zero preimage is admissible
    std::vector<Poly<Rat>> t0(5, Poly<Rat>(1));
    auto m0 = boundary_preimage(m, 5, t0);
    for (auto& p : m0) CHECK(p.is_zero());

    // non-boundary target errors
    std::vector<Poly<Rat>> bad(5, Poly<Rat>(1));
    bad[0] = fx::mono<Rat>(ring, {3});
    CHECK_THROWS_AS(boundary_preimage(m, 3, bad), error);
}

TEST_CASE("embed on E3 produces the canonical morphism") {
    auto ring = fx::ring_q({"x"});
    auto m = fx::e3_module<Rat>(ring);
    auto w = embed(m, Window{0, 20});
    REQUIRE(w.certificate.chain_map);
    REQUIRE(w.certificate.quasi_iso.is_quasi_iso);

    // μ¹ sends σ²1 to x²e1 + e2 and the σ⁸ generator to e4
    std::map<std::string, int> by_label;
    for (int a = 0; a < w.tot_f.module.rank(); ++a) by_label[w.tot_f.module.labels[a]] = a;
    auto& mu_s1 = w.mu.images[by_label.at("s1")];
    CHECK(mu_s1[0] == fx::mono<Rat>(ring, {2}));
    CHECK(mu_s1[1] == Poly<Rat>::constant(1, Rat::one()));
    auto& mu_t1 = w.mu.images[by_label.at("t1")];
    CHECK(mu_t1[3] == Poly<Rat>::constant(1, Rat::one()));
    // μ³: the free generator maps to e1
    auto& mu_s3 = w.mu.images[by_label.at("s3")];
    CHECK(mu_s3[0] == Poly<Rat>::constant(1, Rat::one()));
    // μ² sends σ⁴ to e3 and σ⁹ to e5
    CHECK(w.mu.images[by_label.at("s2")][2] == Poly<Rat>::constant(1, Rat::one()));
    CHECK(w.mu.images[by_label.at("t2")][4] == Poly<Rat>::constant(1, Rat::one()));
}

TEST_CASE("embed on a rank-1 zero differential is an identity-like match") {
    auto ring = fx::ring_q({"x"});
    auto m = SemifreeDG<Rat>::zero_diff(ring, {"e1"}, {3}, SignConvention::even);
    auto w = embed(m, Window{0, 10});
    REQUIRE(w.certificate.quasi_iso.is_quasi_iso);
    REQUIRE(w.tot_f.module.rank() == 1);
    CHECK(w.mu.images[0][0] == Poly<Rat>::constant(1, Rat::one()));
}

TEST_CASE("a hundred random univariate modules embed with certificates") {
    Rng rng(123321);
    auto ring = fx::ring_q({"x"});
    for (int t = 0; t < 100; ++t) {
        auto m = random_semifree<Rat>(rng, ring, 5, 10, 8, SignConvention::even);
        REQUIRE(validate_dg(m).ok);
        auto w = embed(m, embed_default_window(m));
        REQUIRE(w.certificate.chain_map);
        REQUIRE(w.certificate.quasi_iso.is_quasi_iso);
        // ∂ m_i = x^{c-r} z_i exactly, per preimage
        for (size_t i = 0; i < w.decomposition.torsion.size(); ++i) {
            auto [r, c] = w.decomposition.torsion[i];
            DGRealization<Rat> real(m, Window{std::min(c, m.min_degree()), c + 1});
            auto got = real.diff(c + 1).apply(real.coords(w.preimages[i], c + 1));
            std::vector<Poly<Rat>> target(m.rank(), Poly<Rat>(1));
            for (int g = 0; g < m.rank(); ++g)
                if (!w.decomposition.torsion_cycles[i][g].is_zero())
                    target[g] = w.decomposition.torsion_cycles[i][g].times_monomial(
                        Monomial{c - r});
            CHECK(got == real.coords(target, c));
        }
    }
}
