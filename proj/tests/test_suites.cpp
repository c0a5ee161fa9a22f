#include <doctest.h>

#include "conjugax/io.hpp"
#include "conjugax/suites.hpp"
#include "test_util.hpp"

using namespace conjugax;

TEST_CASE("every named suite passes at seed 0") {
    for (const auto& name : suite_names()) {
        CAPTURE(name);
        const CheckReport r = run_suite(name, 0);
        CHECK(r.check == name);
        CHECK(r.notes.front() == "seed 0");
        CHECK(r.violations.empty());
        CHECK(r.conclusion_holds == true);
    }
    CHECK_THROWS_AS((void)run_suite("nope", 0), std::invalid_argument);
}

TEST_CASE("suites are deterministic per seed") {
    CHECK(to_json(run_suite("theorem-random", 7)).dump() == to_json(run_suite("theorem-random", 7)).dump());
    CHECK(to_json(run_suite("moreau-laws", 3)).dump() == to_json(run_suite("moreau-laws", 3)).dump());
    CHECK(to_json(run_suite("partial", 1)).dump() != to_json(run_suite("partial", 2)).dump());
}

TEST_CASE("generated instances agree with the oracle") {
    Rng rng(11);
    for (int i = 0; i < 50; ++i) {
        const DualityInstance inst = random_theorem_instance(rng);
        const auto c = testutil::to_mat(inst.c);
        const auto d = testutil::to_mat(inst.d);
        const auto k = testutil::to_mat(inst.kernel);
        const auto g = testutil::to_vec(inst.g);
        CHECK(testutil::same(inst.f, oracle::lhs_envelope(k, g)));
        CHECK(testutil::same(rhs_envelope(inst), oracle::rhs_envelope(k, g, c, d)));
    }
    for (int i = 0; i < 50; ++i) {
        const DualityInstance inst = random_strong_duality_instance(rng);
        CHECK(inst.d.dual()->size() == 1);
        CHECK(inst.c.is_finite_valued());
    }
    for (int i = 0; i < 20; ++i) {
        const FastPathInstance fp = random_fast_path_instance(rng, 64);
        const auto xs = fp.c.primal()->coordinates_1d();
        for (std::size_t k = 1; k < xs.size(); ++k) CHECK(xs[k - 1] < xs[k]);
        for (auto v : fp.f.values()) CHECK_FALSE(v.is_neg_inf());
    }
}

TEST_CASE("a broken law would be reported") {
    const CheckReport r = moreau_law_suite(0, 10);
    CHECK(r.conclusion_holds == true);
    CHECK(r.notes.back().find("0 failure(s)") != std::string::npos);
}
