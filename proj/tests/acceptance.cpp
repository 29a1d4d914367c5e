// Acceptance suite: one test case per criterion, one PASS/FAIL line each.
// All arithmetic is exact; every numeric expectation is asserted with zero
// tolerance inside the stated window.
#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cstdio>
#include <set>

#include "dgtot/cli.hpp"
#include "dgtot/random.hpp"
#include "fixtures.hpp"

using namespace dgtot;

namespace {

std::string fixture_path(const std::string& name) {
    return std::string(DGTOT_FIXTURE_DIR) + "/" + name;
}

struct Stopwatch {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

// modules collected by the constructive suites, re-examined by criterion 8
std::vector<SemifreeDG<Rat>>& tot_image_members() {
    static std::vector<SemifreeDG<Rat>> v;
    return v;
}

struct AcceptanceReporter : Catch::EventListenerBase {
    using Catch::EventListenerBase::EventListenerBase;
    void testCaseEnded(const Catch::TestCaseStats& stats) override {
        std::printf("[acceptance] %s: %s\n", stats.testInfo->name.c_str(),
                    stats.totals.assertions.allPassed() ? "PASS" : "FAIL");
        std::fflush(stdout);
    }
};
CATCH_REGISTER_LISTENER(AcceptanceReporter)

}  // namespace

TEST_CASE("criterion 1: E1 obstruction over F101") {
    Stopwatch sw;
    auto res = cli::run_args({"obstruct", fixture_path("e1.dg"), "--window", "0..20", "--field",
                              "F101", "--format", "json"});
    REQUIRE(res.exit_code == 0);
    CHECK(res.json.at("rank") == 4);
    CHECK(res.json.at("betti").at("0") == cli::Json({{"0", 1}, {"5", 1}}));
    CHECK(res.json.at("betti").at("1") == cli::Json({{"2", 1}, {"3", 1}, {"7", 1}}));
    CHECK(res.json.at("betti").at("2") == cli::Json({{"4", 1}}));
    CHECK(res.json.at("betti_sum") == 6);
    CHECK(res.json.at("indecomposable") == "YES");
    CHECK(res.json.at("minimal") == true);
    CHECK(res.json.at("verdict") == "NOT_IN_TOT_IMAGE");
    CHECK(sw.seconds() < 10.0);
}

TEST_CASE("criterion 2: crossing example and its elimination") {
    Stopwatch sw;
    auto res = cli::run_args({"crossing", fixture_path("ex22.dg"), "--format", "json"});
    REQUIRE(res.exit_code == 0);
    CHECK(res.json.at("partition").at("e1") == 0);
    CHECK(res.json.at("partition").at("e2") == 1);
    CHECK(res.json.at("partition").at("e3") == 1);
    CHECK(res.json.at("partition").at("e4") == "unassigned");
    CHECK(res.json.at("has_crossing") == true);

    // library-level elimination: crossing-free cover with E_2 nonempty and
    // the exact conjugation identity
    auto ring = fx::ring_q({"x", "y", "z"});
    auto m = fx::crossing_module<Rat>(ring);
    auto el = eliminate_crossing(m);
    REQUIRE(el.success);
    CHECK(el.final_partition.covers_all());
    bool has_level2 = false;
    for (int l : el.final_partition.level) has_level2 = has_level2 || l == 2;
    CHECK(has_level2);
    CHECK(conjugation_identity_holds(m, el.module, el.change));
    CHECK(validate_dg(el.module).ok);

    auto res2 =
        cli::run_args({"crossing", fixture_path("ex22.dg"), "--eliminate", "--format", "json"});
    REQUIRE(res2.exit_code == 0);
    CHECK(res2.json.at("eliminate").at("success") == true);
    CHECK(sw.seconds() < 1.0);
}

TEST_CASE("criterion 3: de-totaling round trip on the rebased module") {
    Stopwatch sw;
    auto ring = fx::ring_q({"x", "y", "z"});
    auto m = fx::crossing_module_rebased<Rat>(ring);
    auto x = detot(m);
    REQUIRE(x.lo_position() == 0);
    REQUIRE(x.hi_position() == 2);
    // ∂_1 = [x, yz]; ∂_2 = [yz; -x] under the deterministic labeling
    CHECK(x.differentials.at(1).at(0, 0) == fx::mono<Rat>(ring, {1, 0, 0}));
    CHECK(x.differentials.at(1).at(0, 1) == fx::mono<Rat>(ring, {0, 1, 1}));
    CHECK(x.differentials.at(2).at(0, 0) == fx::mono<Rat>(ring, {0, 1, 1}));
    CHECK(x.differentials.at(2).at(1, 0) == fx::mono<Rat>(ring, {1, 0, 0}, -1));
    CHECK(tot(x, SignConvention::even).module.equals_labeled(m));
    tot_image_members().push_back(m);
    CHECK(sw.seconds() < 1.0);
}

TEST_CASE("criterion 4: univariate decomposition and embedding of E3") {
    Stopwatch sw;
    auto res = cli::run_args({"resolve", fixture_path("e3.dg"), "--window", "0..20", "--format",
                              "json"});
    REQUIRE(res.exit_code == 0);
    REQUIRE(res.json.at("torsion").size() == 2);
    CHECK(res.json.at("torsion")[0].at("r") == 2);
    CHECK(res.json.at("torsion")[0].at("c") == 7);
    CHECK(res.json.at("torsion")[1].at("r") == 4);
    CHECK(res.json.at("torsion")[1].at("c") == 8);
    REQUIRE(res.json.at("free").size() == 1);
    CHECK(res.json.at("free")[0].at("r") == 0);

    auto ring = fx::ring_q({"x"});
    auto m = fx::e3_module<Rat>(ring);
    auto wit = embed(m, Window{0, 20});
    REQUIRE(wit.certificate.chain_map);
    REQUIRE(wit.certificate.quasi_iso.is_quasi_iso);
    // μ¹: σ²1 ↦ x²e1 + e2 and σ⁸1 ↦ e4 (the deterministic representatives
    // are one valid choice; validity is certified either way)
    std::map<std::string, int> by_label;
    for (int a = 0; a < wit.tot_f.module.rank(); ++a)
        by_label[wit.tot_f.module.labels[a]] = a;
    auto& mu_s1 = wit.mu.images[by_label.at("s1")];
    CHECK(mu_s1[0] == fx::mono<Rat>(ring, {2}));
    CHECK(mu_s1[1] == Poly<Rat>::constant(1, Rat::one()));
    CHECK(wit.mu.images[by_label.at("t1")][3] == Poly<Rat>::constant(1, Rat::one()));
    tot_image_members().push_back(m);
    CHECK(sw.seconds() < 5.0);
}

TEST_CASE("criterion 5: randomized univariate embedding (100 modules)") {
    Stopwatch sw;
    Rng rng(500100);
    auto ring = fx::ring_q({"x"});
    for (int t = 0; t < 100; ++t) {
        auto m = random_semifree<Rat>(rng, ring, 5, 10, 8, SignConvention::even);
        REQUIRE(validate_dg(m).ok);
        auto wit = embed(m, embed_default_window(m));
        REQUIRE(wit.certificate.chain_map);
        REQUIRE(wit.certificate.quasi_iso.is_quasi_iso);
        tot_image_members().push_back(std::move(m));
    }
    CHECK(sw.seconds() < 60.0);
}

TEST_CASE("criterion 6: functorial property suites (50 random complexes)") {
    Stopwatch sw;
    Rng rng(600600);
    auto ring1 = fx::ring_fp(101, {"x"});
    auto ring2 = fx::ring_fp(101, {"x", "y"});
    std::vector<GradedComplex<Fp>> batch;
    for (int t = 0; t < 50; ++t)
        batch.push_back(
            random_complex<Fp>(rng, t % 2 ? ring1 : ring2, 3, 3, 2, 2, -1, 1));

    int concentrated_cases = 0, tensor_pairs = 0;
    for (size_t t = 0; t < batch.size(); ++t) {
        const auto& x = batch[t];
        REQUIRE(validate_complex(x).ok);
        // same parity = same ring, so every pair runs the tensor checks
        const auto& y = batch[(t + 2) % batch.size()];
        Window w{x.min_twist() + x.lo_position() - 1,
                 x.max_twist() + x.hi_position() + 6};

        // (a) Tot X is semifree under both conventions
        for (auto conv : {SignConvention::even, SignConvention::koszul})
            REQUIRE(validate_dg(tot(x, conv).module).ok);

        // (b), (c): tensor compatibility and Tor decomposition over the
        // shared ring
        if (x.ring.vars == y.ring.vars) {
            ++tensor_pairs;
            Window wxy{x.min_twist() + y.min_twist() + x.lo_position() + y.lo_position() - 1,
                       x.max_twist() + y.max_twist() + x.hi_position() + y.hi_position() + 4};
            for (auto conv : {SignConvention::even, SignConvention::koszul}) {
                auto rep = tensor_compat_check(x, y, conv, wxy);
                REQUIRE(rep.ok);
                auto tor = tor_decomposition_check(x, y, conv, wxy);
                REQUIRE(tor.agree);
            }
        }

        // (d) concentrated homology: the replacement maps and their realized
        // totalings all certify
        auto h = homology_truncated(x, w);
        std::set<int> positions;
        for (auto& [ij, v] : h) positions.insert(ij.first);
        if (positions.size() == 1) {
            int n = *positions.begin();
            ++concentrated_cases;
            auto rep = concentrated_replacement(x, n, w);
            REQUIRE(rep.ok);
            REQUIRE(rep.iota_cert.is_quasi_iso);
            REQUIRE(rep.pi_cert.is_quasi_iso);
            auto tmid = tot_realized(rep.middle);
            auto tx = tot_realized(rep.x_realized);
            auto th = tot_realized(rep.homology_row);
            auto ti = tot_realized_map(rep.middle, rep.x_realized, rep.iota, tmid, tx);
            auto tp = tot_realized_map(rep.middle, rep.homology_row, rep.pi, tmid, th);
            // totalized degrees reliable strictly inside the window
            REQUIRE(chain_quasi_iso(tmid, tx, ti, tmid.lo + 1, tmid.hi - 1).is_quasi_iso);
            REQUIRE(chain_quasi_iso(tmid, th, tp, tmid.lo + 1, tmid.hi - 1).is_quasi_iso);
        }
    }
    REQUIRE(concentrated_cases > 0);
    REQUIRE(tensor_pairs == 50);
    CHECK(sw.seconds() < 120.0);
}

TEST_CASE("criterion 7: rank <= 3 crossing elimination over Q[x,y] (100 modules)") {
    Stopwatch sw;
    Rng rng(700700);
    auto ring = fx::ring_q({"x", "y"});
    for (int t = 0; t < 100; ++t) {
        auto m = random_semifree<Rat>(rng, ring, 3, 5, 3, SignConvention::even);
        REQUIRE(validate_dg(m).ok);
        auto el = eliminate_crossing(m);
        REQUIRE(el.success);
        REQUIRE(conjugation_identity_holds(m, el.module, el.change));
        REQUIRE(!has_crossing(el.module));
        tot_image_members().push_back(std::move(m));
    }
    CHECK(sw.seconds() < 60.0);
}

TEST_CASE("criterion 8: soundness cross-check over all collected members") {
    // every module on which embed or detot succeeded must not be certified
    // outside the image of Tot
    REQUIRE(tot_image_members().size() >= 202);  // fixtures + suites 5 and 7
    for (auto& m : tot_image_members()) {
        auto rep = tot_image_obstruction(m, m.default_window());
        REQUIRE(rep.verdict != ObstructionVerdict::not_in_tot_image);
    }
}

TEST_CASE("criterion 9: univariate betti paths agree on 50 random presentations") {
    Stopwatch sw;
    Rng rng(900900);
    auto ring = fx::ring_q({"x"});
    for (int t = 0; t < 50; ++t) {
        int rows = rng.range(1, 4), cols = rng.range(1, 4);
        std::vector<int> rt, ct;
        for (int i = 0; i < rows; ++i) rt.push_back(rng.range(0, 3));
        for (int j = 0; j < cols; ++j) ct.push_back(rng.range(1, 8));
        auto p = random_graded_matrix<Rat>(rng, ring, rt, ct, true);
        HomologyPresentation<Rat> h;
        h.gen_degrees = rt;
        h.relations = p;
        h.certified = true;
        h.window = Window{0, 16};
        auto a = minimal_free_resolution_univariate(h, Window{0, 16});
        auto b = minimal_free_resolution_degreewise(h, 1, Window{0, 16});
        REQUIRE(b.certified);
        std::multiset<int> ta, tb;
        if (a.step_twists.size() > 1)
            ta = std::multiset<int>(a.step_twists[1].begin(), a.step_twists[1].end());
        if (b.step_twists.size() > 1)
            tb = std::multiset<int>(b.step_twists[1].begin(), b.step_twists[1].end());
        REQUIRE(ta == tb);
        REQUIRE(b.step_twists.size() <= 2);
        REQUIRE(a.betti_by_step() == b.betti_by_step());
    }
    CHECK(sw.seconds() < 30.0);
}
