#include <doctest.h>

#include <random>
#include <vector>

#include "conjugax/duality.hpp"
#include "conjugax/partial_conjugates.hpp"
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

ExtMatrix draw_mat(std::mt19937_64& rng, std::size_t r, std::size_t c, double p_inf) {
    ExtMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = draw(rng, p_inf);
    return m;
}

}  // namespace

TEST_CASE("partial conjugate in the dual slot") {
    const auto x = make_abstract_set("X", 2);
    const auto y = make_grid("Y", {0.0, 1.0});
    const Coupling d = Coupling::bilinear(y, y);
    CHECK(same(partial_conj_dual(Kernel::constant(x, y, ExtReal::neg_inf()), d),
               {{-kInf, -kInf}, {-kInf, -kInf}}));
    CHECK(same(partial_conj_dual(Kernel::constant(x, y, 0.0), d), {{0, 1}, {0, 1}}));
    const auto one = make_abstract_set("One", 1);
    const Coupling d1 = Coupling::table(y, one, ext(oracle::Mat{{2}, {-3}}));
    const Kernel e(x, one, ext(oracle::Mat{{1}, {kInf}}));
    CHECK(same(partial_conj_dual(e, d1), {{3, -2}, {kInf, kInf}}));
}

TEST_CASE("partial conjugate in the primal slot") {
    const auto x = make_abstract_set("X", 3);
    const auto xs = make_abstract_set("Xs", 2);
    const auto ys = make_abstract_set("Ys", 3);
    CHECK(same(partial_conj_primal(Kernel::constant(x, ys, ExtReal::pos_inf()), Coupling::zero(x, xs)),
               {{-kInf, -kInf, -kInf}, {-kInf, -kInf, -kInf}}));
    std::mt19937_64 rng(1);
    for (int t = 0; t < 50; ++t) {
        const Kernel e(x, ys, draw_mat(rng, 3, 3, 0.15));
        const Coupling c = Coupling::table(x, xs, draw_mat(rng, 3, 2, 0.15));
        const Kernel p = partial_conj_primal(e, c);
        for (std::size_t b = 0; b < 3; ++b) {
            const ValueTable col = conjugate(e.column(b), c);
            for (std::size_t a = 0; a < 2; ++a) {
                CHECK(p(a, b) == col[a]);
            }
        }
        const Kernel z = partial_conj_primal(e, Coupling::zero(x, xs));
        for (std::size_t b = 0; b < 3; ++b) {
            ExtReal s = ExtReal::neg_inf();
            for (std::size_t i = 0; i < 3; ++i) s = std::max(s, neg(e(i, b)));
            CHECK(z(0, b) == s);
        }
    }
}

TEST_CASE("partial lemma on random extended instances") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 300; ++t) {
        std::uniform_int_distribution<std::size_t> sz(1, 3);
        const auto x = make_abstract_set("X", sz(rng));
        const auto y = make_abstract_set("Y", sz(rng));
        const auto xs = make_abstract_set("Xs", sz(rng));
        const auto ys = make_abstract_set("Ys", sz(rng));
        const Kernel e(x, ys, draw_mat(rng, x->size(), ys->size(), 0.1));
        const Coupling c = Coupling::table(x, xs, draw_mat(rng, x->size(), xs->size(), 0.1));
        const Coupling d = Coupling::table(y, ys, draw_mat(rng, y->size(), ys->size(), 0.1));
        const Kernel h = partial_conj_dual(e, d);
        const CheckReport rep = check_lemma_partial(h, e, c, d);
        CHECK(rep.hypothesis_holds);
        CHECK(rep.conclusion_holds == true);
        CHECK(check_lemma_partial(Kernel::constant(x, y, ExtReal::pos_inf()), e, c, d).ok());
    }
    const auto a = make_abstract_set("A", 2);
    const Coupling z = Coupling::zero(a, a);
    const CheckReport r = check_lemma_partial(partial_conj_dual(Kernel::constant(a, a, 0.0), z),
                                              Kernel::constant(a, a, 0.0), z, z);
    CHECK(r.conclusion_holds == true);
    for (ExtReal m : r.margins) CHECK(m == ExtReal(0.0));
}

TEST_CASE("exchange implication and its agreement with the theorem") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 200; ++t) {
        std::uniform_int_distribution<std::size_t> sz(1, 4);
        const auto x = make_abstract_set("X", sz(rng));
        const auto y = make_abstract_set("Y", sz(rng));
        const auto xs = make_abstract_set("Xs", sz(rng));
        const auto ys = make_abstract_set("Ys", sz(rng));
        const Kernel e(x, ys, draw_mat(rng, x->size(), ys->size(), 0.1));
        const Coupling c = Coupling::table(x, xs, draw_mat(rng, x->size(), xs->size(), 0.1));
        const Coupling d = Coupling::table(y, ys, draw_mat(rng, y->size(), ys->size(), 0.1));
        const ValueTable g(y, draw_mat(rng, 1, y->size(), 0.1).data());
        DualityInstance inst{c, d, partial_conj_dual(e, d), ValueTable::constant(x, 0.0), g};
        inst.f = lhs_envelope(inst);
        const CheckReport rep = check_exchange_implication(inst.f, g, e, c, d, 0.0);
        CHECK(rep.hypothesis_holds);
        CHECK(rep.conclusion_holds == true);
        // the theorem bound through the lemma never exceeds the exchange bound
        CHECK(pointwise_leq(rhs_envelope(inst), exchange_bound(g, e, c, d)));
    }

    // identity-like d on Y# = Y: both bounds coincide
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
        const auto x = make_abstract_set("X", 3);
        const auto xs = make_abstract_set("Xs", 2);
        const auto y = make_abstract_set("Y", n);
        ExtMatrix id(n, n, ExtReal::neg_inf());
        for (std::size_t i = 0; i < n; ++i) id(i, i) = 0.0;
        const Coupling d = Coupling::table(y, y, id);
        const Coupling c = Coupling::table(x, xs, draw_mat(rng, 3, 2, 0.1));
        const Kernel e(x, y, draw_mat(rng, 3, n, 0.1));
        const ValueTable g(y, draw_mat(rng, 1, n, 0.1).data());
        DualityInstance inst{c, d, partial_conj_dual(e, d), ValueTable::constant(x, 0.0), g};
        CHECK(inst.kernel == e);
        CHECK(rhs_envelope(inst) == exchange_bound(g, e, c, d));
    }

    const auto a = make_abstract_set("A", 2);
    const Coupling z = Coupling::zero(a, a);
    const ValueTable top = ValueTable::constant(a, ExtReal::pos_inf());
    const CheckReport r = check_exchange_implication(top, top, Kernel::constant(a, a, 0.0), z, z);
    CHECK(r.hypothesis_holds);
    CHECK(r.conclusion_holds == true);
    CHECK(r.notes.size() == 1);
}
