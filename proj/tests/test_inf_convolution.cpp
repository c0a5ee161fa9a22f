#include <doctest.h>

#include <random>
#include <vector>

#include "conjugax/inf_convolution.hpp"
#include "test_util.hpp"

using namespace conjugax;
using oracle::kInf;
using testutil::ext;
using testutil::same;

namespace {

double draw(std::mt19937_64& rng, double p_inf) {
    const double r = std::uniform_real_distribution<double>(0, 1)(rng);
    if (r < p_inf) {
        return kInf;
    }
    if (r < 2 * p_inf) {
        return -kInf;
    }
    return std::uniform_int_distribution<int>(-16, 16)(rng) * 0.5;
}

std::vector<ExtReal> draw_vec(std::mt19937_64& rng, std::size_t n, double p_inf) {
    std::vector<ExtReal> v(n);
    for (auto& x : v) {
        x = draw(rng, p_inf);
    }
    return v;
}

ExtMatrix draw_mat(std::mt19937_64& rng, std::size_t r, std::size_t c, double p_inf) {
    ExtMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) {
            m(i, j) = draw(rng, p_inf);
        }
    }
    return m;
}

std::vector<oracle::Mat> to_cube(const Convoluter& g) {
    std::vector<oracle::Mat> cube(g.y1()->size(),
                                  oracle::Mat(g.x()->size(), oracle::Vec(g.y2()->size())));
    for (std::size_t a = 0; a < g.y1()->size(); ++a)
        for (std::size_t x = 0; x < g.x()->size(); ++x)
            for (std::size_t b = 0; b < g.y2()->size(); ++b) cube[a][x][b] = g(a, x, b).to_double();
    return cube;
}

struct RandomSetup {
    SetRef y1, x, y2, y1s, xs, y2s;
    Convoluter gamma;
    ValueTable g1, g2;
    Coupling c, d1, d2;
};

RandomSetup random_setup(std::mt19937_64& rng, double p_inf) {
    std::uniform_int_distribution<std::size_t> sz(1, 3);
    auto y1 = make_abstract_set("Y1", sz(rng));
    auto x = make_abstract_set("X", sz(rng));
    auto y2 = make_abstract_set("Y2", sz(rng));
    auto y1s = make_abstract_set("Y1s", sz(rng));
    auto xs = make_abstract_set("Xs", sz(rng));
    auto y2s = make_abstract_set("Y2s", sz(rng));
    Convoluter gamma(y1, x, y2, draw_vec(rng, y1->size() * x->size() * y2->size(), p_inf));
    ValueTable g1(y1, draw_vec(rng, y1->size(), p_inf));
    ValueTable g2(y2, draw_vec(rng, y2->size(), p_inf));
    Coupling c = Coupling::table(x, xs, draw_mat(rng, x->size(), xs->size(), p_inf));
    Coupling d1 = Coupling::table(y1, y1s, draw_mat(rng, y1->size(), y1s->size(), p_inf));
    Coupling d2 = Coupling::table(y2, y2s, draw_mat(rng, y2->size(), y2s->size(), p_inf));
    return {y1, x, y2, y1s, xs, y2s, gamma, g1, g2, c, d1, d2};
}

}  // namespace

TEST_CASE("convoluter construction and classical delta") {
    const auto g3 = make_grid("G", {0.0, 1.0, 2.0});
    const Convoluter delta = Convoluter::classical_delta(g3, g3, g3, false);
    CHECK(delta(1, 2, 1) == ExtReal(0.0));
    CHECK(delta(1, 1, 1) == ExtReal::pos_inf());
    CHECK_THROWS_AS((void)Convoluter::classical_delta(g3, g3, g3, true), std::invalid_argument);
    const auto y = make_grid("Y", {0.0, 1.0});
    CHECK_NOTHROW((void)Convoluter::classical_delta(y, g3, y, true));
    CHECK_THROWS_AS(Convoluter(g3, g3, g3, std::vector<ExtReal>(5)), std::invalid_argument);
    const auto big = make_abstract_set("B", 200);
    CHECK_THROWS_AS((void)Convoluter::constant(big, big, big, 0.0), std::length_error);
}

TEST_CASE("inf-convolution reference examples") {
    const auto g3 = make_grid("G", {0.0, 1.0, 2.0});
    const Convoluter delta = Convoluter::classical_delta(g3, g3, g3, false);
    const ValueTable ind(g3, ext({0.0, kInf, kInf}));
    CHECK(same(infconv(ind, delta, ind), {0.0, kInf, kInf}));
    const Convoluter top = Convoluter::constant(g3, g3, g3, ExtReal::pos_inf());
    CHECK(same(infconv(ind, top, ind), {kInf, kInf, kInf}));

    std::mt19937_64 rng(1);
    const Convoluter r(g3, g3, g3, draw_vec(rng, 27, 0.1));
    const ValueTable zero = ValueTable::constant(g3, 0.0);
    const ValueTable ic = infconv(zero, r, zero);
    for (std::size_t x = 0; x < 3; ++x) {
        ExtReal m = ExtReal::pos_inf();
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = 0; b < 3; ++b) m = std::min(m, r(a, x, b));
        CHECK(ic[x] == m);
    }
}

TEST_CASE("lifts are index reshuffles") {
    const auto one = make_abstract_set("O", 1);
    const Convoluter seven = Convoluter::constant(one, one, one, 7.0);
    CHECK(lift_kernel(seven)(0, 0) == ExtReal(7.0));
    CHECK(lift_coupling(seven).eval(0, 0) == ExtReal(7.0));

    std::mt19937_64 rng(2);
    for (int t = 0; t < 20; ++t) {
        const RandomSetup s = random_setup(rng, 0.2);
        const Kernel k = lift_kernel(s.gamma);
        CHECK(unlift(k, s.y1, s.y2) == s.gamma);
        const ExtMatrix m = lift_coupling(s.gamma).materialize();
        CHECK(m == k.values());
        const std::size_t n2 = s.y2->size();
        for (std::size_t a = 0; a < s.y1->size(); ++a)
            for (std::size_t x = 0; x < s.x->size(); ++x)
                for (std::size_t b = 0; b < n2; ++b) CHECK(k(x, a * n2 + b) == s.gamma(a, x, b));
    }
}

TEST_CASE("infconv agrees with the oracle and with its conjugate representation") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 200; ++t) {
        const RandomSetup s = random_setup(rng, 0.15);
        const ValueTable ic = infconv(s.g1, s.gamma, s.g2);
        CHECK(same(ic, oracle::infconv(testutil::to_vec(s.g1), to_cube(s.gamma), testutil::to_vec(s.g2))));
        CHECK(infconv_as_conjugate(s.g1, s.gamma, s.g2) == ic);
    }
    const auto g3 = make_grid("G", {0.0, 1.0, 2.0});
    const ValueTable minus = ValueTable::constant(g3, ExtReal::neg_inf());
    std::vector<ExtReal> vals(27, 1.0);
    vals[13] = ExtReal::pos_inf();
    const Convoluter gm(g3, g3, g3, vals);
    CHECK(infconv_as_conjugate(minus, gm, ValueTable::constant(g3, 0.0)) ==
          infconv(minus, gm, ValueTable::constant(g3, 0.0)));
}

TEST_CASE("dual convoluter: direct and kernel routes agree") {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 100; ++t) {
        const RandomSetup s = random_setup(rng, 0.15);
        const Convoluter a = dual_convoluter(s.gamma, s.c, s.d1, s.d2);
        const Convoluter b = dual_convoluter_via_kernel(s.gamma, s.c, s.d1, s.d2);
        CHECK(a == b);
    }
    const auto g = make_grid("G", {0.0, 1.0});
    const Coupling z = Coupling::zero(g, g);
    std::vector<ExtReal> vals = {1, 2, -3, 4, 0.5, 6, 7, 8};
    const Convoluter gm(g, g, g, vals);
    CHECK(dual_convoluter(gm, z, z, z) == Convoluter::constant(g, g, g, 3.0));
    const Convoluter minus = Convoluter::constant(g, g, g, ExtReal::neg_inf());
    CHECK(dual_convoluter(minus, Coupling::bilinear(g, g), z, z) ==
          Convoluter::constant(g, g, g, ExtReal::pos_inf()));
}

TEST_CASE("classical dual convoluter") {
    const auto g = make_grid("G", {0.0, 1.0});
    const CheckReport rep = check_classical_dual_convoluter(g, g, g, g, g, g);
    CHECK(rep.conclusion_holds == true);
    CHECK(rep.margins.size() == 2);
    const auto gx = make_grid("X", {0.0, 1.0, 2.0});
    const auto w = make_grid("W", {-1.0, 0.0, 1.0});
    CHECK(check_classical_dual_convoluter(g, gx, g, w, w, w).conclusion_holds == true);
}

TEST_CASE("inf-convolution duality inequality") {
    const auto g = make_grid("G", {0.0, 1.0});
    const auto gx = make_grid("X", {0.0, 1.0, 2.0});
    const Convoluter delta = Convoluter::classical_delta(g, gx, g);
    const ValueTable g1(g, ext({0.0, 1.0}));
    const ValueTable g2(g, ext({0.5, 0.0}));
    const Coupling c = Coupling::bilinear(gx, gx);
    const Coupling d1 = Coupling::bilinear(g, gx, -1);
    const Coupling d2 = Coupling::bilinear(g, gx, -1);
    const ValueTable f = infconv(g1, delta, g2);
    const CheckReport rep = check_infconv_duality(f, g1, g2, delta, c, d1, d2);
    CHECK(rep.conclusion_holds == true);
    CHECK(check_infconv_duality(ValueTable::constant(gx, ExtReal::pos_inf()), g1, g2, delta, c, d1,
                                d2)
              .conclusion_holds == true);

    std::mt19937_64 rng(5);
    for (int t = 0; t < 200; ++t) {
        const RandomSetup s = random_setup(rng, 0.1);
        const ValueTable fx = infconv(s.g1, s.gamma, s.g2);
        const CheckReport r = check_infconv_duality(fx, s.g1, s.g2, s.gamma, s.c, s.d1, s.d2, 0.0);
        CHECK(r.hypothesis_holds);
        CHECK(r.conclusion_holds == true);
    }
}

TEST_CASE("split conjugate") {
    const auto y = make_grid("Y", {0.0, 1.0, 2.0});
    const auto x = make_grid("X", {0.0, 1.0, 2.0, 3.0, 4.0});
    const auto xs = make_grid("Xs", {-2.0, -1.0, 0.0, 1.0, 2.0});
    const Convoluter delta = Convoluter::classical_delta(y, x, y);
    const Coupling c = Coupling::bilinear(x, xs);
    const Coupling s1 = Coupling::bilinear(xs, y);
    const ValueTable g1(y, ext({0.0, 1.0, kInf}));
    const ValueTable g2(y, ext({2.0, -1.0, 3.0}));
    const CheckReport rep = split_conjugate(g1, g2, delta, c, s1, s1, 0.0);
    CHECK(rep.hypothesis_holds);
    CHECK(rep.conclusion_holds == true);

    const Convoluter zero = Convoluter::constant(y, x, y, 0.0);
    const CheckReport bad = split_conjugate(g1, g2, zero, c, s1, s1, 0.0);
    CHECK_FALSE(bad.hypothesis_holds);
    CHECK_FALSE(bad.unmet.empty());
    CHECK_FALSE(bad.conclusion_holds.has_value());

    // gamma independent of a singleton y2: G2 = 0 works
    const auto one = make_abstract_set("One", 1);
    std::mt19937_64 rng(6);
    const auto yy = make_abstract_set("YY", 3);
    const auto xx = make_abstract_set("XX", 3);
    const auto xxs = make_abstract_set("XXs", 2);
    const Convoluter gm(yy, xx, one, draw_vec(rng, 9, 0.0));
    const Coupling cc = Coupling::table(xx, xxs, draw_mat(rng, 3, 2, 0.0));
    ExtMatrix split(2, 3);
    for (std::size_t a = 0; a < 3; ++a) {
        const ValueTable sc = conjugate(gm.slice(a, 0), cc);
        for (std::size_t s = 0; s < 2; ++s) split(s, a) = sc[s];
    }
    const CheckReport r2 =
        split_conjugate(ValueTable(yy, draw_vec(rng, 3, 0.0)), ValueTable::constant(one, 1.0), gm, cc,
                        Coupling::table(xxs, yy, split), Coupling::zero(xxs, one), 0.0);
    CHECK(r2.hypothesis_holds);
    CHECK(r2.conclusion_holds == true);
}

TEST_CASE("additive bound") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 200; ++t) {
        const RandomSetup s = random_setup(rng, t < 100 ? 0.0 : 0.2);
        const CheckReport r = psi_additive_bound(s.g1, s.g2, s.d1, s.d2);
        CHECK(r.conclusion_holds == true);
        if (t < 100) {
            for (ExtReal m : r.margins) {
                CHECK(m == ExtReal(0.0));
            }
        }
    }
    const auto a = make_abstract_set("A", 2);
    const Coupling z = Coupling::zero(a, a);
    const ValueTable top = ValueTable::constant(a, ExtReal::pos_inf());
    const CheckReport r = psi_additive_bound(top, ValueTable::constant(a, 0.0), z, z);
    CHECK(r.ok());

    // g1 = -inf makes (g1 box g2) = +inf where g2 = +inf, while g1^{-d1} = +inf
    bool strict_seen = false;
    for (int t = 0; t < 500 && !strict_seen; ++t) {
        const RandomSetup s = random_setup(rng, 0.35);
        const CheckReport q = psi_additive_bound(s.g1, s.g2, s.d1, s.d2);
        CHECK(q.ok());
        for (ExtReal m : q.margins) {
            strict_seen = strict_seen || m > ExtReal(0.0);
        }
    }
    CHECK(strict_seen);
}
