#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "conjugax/conjugacy.hpp"
#include "test_util.hpp"

using namespace conjugax;
using oracle::kInf;
using testutil::ext;
using testutil::same;

namespace {

double draw_value(std::mt19937_64& rng, double p_inf = 0.1) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double r = u(rng);
    if (r < p_inf) {
        return kInf;
    }
    if (r < 2 * p_inf) {
        return -kInf;
    }
    std::uniform_int_distribution<int> k(-16, 16);
    return k(rng) * 0.5;
}

oracle::Vec draw_vec(std::mt19937_64& rng, std::size_t n, double p_inf = 0.1) {
    oracle::Vec v(n);
    for (auto& x : v) {
        x = draw_value(rng, p_inf);
    }
    return v;
}

oracle::Mat draw_mat(std::mt19937_64& rng, std::size_t r, std::size_t c, double p_inf = 0.1) {
    oracle::Mat m(r);
    for (auto& row : m) {
        row = draw_vec(rng, c, p_inf);
    }
    return m;
}

}  // namespace

TEST_CASE("conjugate: reference examples on {0,1}") {
    const auto x = make_grid("X", {0.0, 1.0});
    const auto s = make_grid("Xs", {0.0, 1.0});
    const Coupling c = Coupling::bilinear(x, s);
    const ValueTable f(x, ext({0.0, 2.0}));
    CHECK(same(conjugate(f, c), {0.0, 0.0}));
    CHECK(same(biconjugate(f, c), {0.0, 1.0}));
    CHECK(same(conjugate(ValueTable::constant(x, 0.0), c), {0.0, 1.0}));
    CHECK(same(conjugate(ValueTable::constant(x, ExtReal::pos_inf()), c), {-kInf, -kInf}));
    CHECK(same(biconjugate(ValueTable::constant(x, ExtReal::neg_inf()), c), {-kInf, -kInf}));

    const auto other = make_grid("Y", {0.0, 1.0, 2.0});
    CHECK_THROWS_AS((void)conjugate(ValueTable::constant(other, 0.0), c), std::invalid_argument);
}

TEST_CASE("kernel conjugate: reference examples") {
    const auto x = make_grid("X", {0.0, 1.0});
    const auto y = make_grid("Y", {0.0, 1.0});
    const Coupling c = Coupling::bilinear(x, x);
    const Coupling d = Coupling::bilinear(y, y);
    const Kernel zero = Kernel::constant(x, y, 0.0);
    CHECK(same(kernel_conjugate(zero, c, d), {{0, 1}, {1, 2}}));
    const Kernel absdiff(x, y, ext(oracle::Mat{{0, 1}, {1, 0}}));
    const Kernel kc = kernel_conjugate(absdiff, c, d);
    CHECK(kc(1, 1) == ExtReal(2.0));
    CHECK(kc(1, 0) == ExtReal(1.0));
    CHECK(kc(0, 0) == ExtReal(0.0));
    CHECK(same(kernel_conjugate(Kernel::constant(x, y, ExtReal::pos_inf()), c, d),
               {{-kInf, -kInf}, {-kInf, -kInf}}));
}

TEST_CASE("marginal kernel") {
    const auto x = make_grid("X", {0.0, 1.0});
    const auto y = make_abstract_set("Y", 3);
    const Coupling c = Coupling::bilinear(x, x);
    CHECK(same(marginal_kernel(Kernel::constant(x, y, 0.0), c, 1), {-1, -1, -1}));
    const Coupling minus_inf = Coupling::table(x, x, ExtMatrix(2, 2, ExtReal::neg_inf()));
    CHECK(same(marginal_kernel(Kernel::constant(x, y, 0.0), minus_inf, 0), {kInf, kInf, kInf}));

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const auto xs = make_abstract_set("Xs", 3);
        const Coupling ct = Coupling::table(x, xs, ext(draw_mat(rng, 2, 3)));
        const Kernel k(x, y, ext(draw_mat(rng, 2, 3)));
        for (std::size_t a = 0; a < 3; ++a) {
            const ValueTable m = marginal_kernel(k, ct, a);
            for (std::size_t j = 0; j < 3; ++j) {
                CHECK(neg(m[j]) == conjugate(k.column(j), ct)[a]);
            }
        }
    }
}

TEST_CASE("conjugate and biconjugate agree with the oracle; structural laws hold") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        std::uniform_int_distribution<std::size_t> sz(1, 6);
        const std::size_t n = sz(rng);
        const std::size_t m = sz(rng);
        const auto x = make_abstract_set("X", n);
        const auto s = make_abstract_set("S", m);
        const oracle::Mat cm = draw_mat(rng, n, m);
        const oracle::Vec fv = draw_vec(rng, n);
        const Coupling c = Coupling::table(x, s, ext(cm));
        const ValueTable f(x, ext(fv));

        const ValueTable fc = conjugate(f, c);
        CHECK(same(fc, oracle::conjugate(fv, cm)));
        const ValueTable fcc = biconjugate(f, c);
        CHECK(same(fcc, oracle::biconjugate(fv, cm)));
        CHECK(pointwise_leq(fcc, f));
        CHECK(conjugate(fcc, c) == fc);
        CHECK(biconjugate(fcc, c) == fcc);

        // antitone
        oracle::Vec gv = fv;
        for (auto& v : gv) {
            v = oracle::mx(v, draw_value(rng));
        }
        const ValueTable g(x, ext(gv));
        CHECK(pointwise_leq(conjugate(g, c), fc));
    }
}

TEST_CASE("kernel conjugate equals the sum-coupling conjugate on the product set") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        std::uniform_int_distribution<std::size_t> sz(1, 4);
        const auto x = make_abstract_set("X", sz(rng));
        const auto y = make_abstract_set("Y", sz(rng));
        const auto xs = make_abstract_set("Xs", sz(rng));
        const auto ys = make_abstract_set("Ys", sz(rng));
        const oracle::Mat cm = draw_mat(rng, x->size(), xs->size());
        const oracle::Mat dm = draw_mat(rng, y->size(), ys->size());
        const oracle::Mat km = draw_mat(rng, x->size(), y->size());
        const Coupling c = Coupling::table(x, xs, ext(cm));
        const Coupling d = Coupling::table(y, ys, ext(dm));
        const Kernel k(x, y, ext(km));
        const Kernel kc = kernel_conjugate(k, c, d);
        CHECK(same(kc, oracle::kernel_conjugate(km, cm, dm)));
        const ValueTable flat = conjugate(k.as_table(), Coupling::sum(c, d));
        CHECK(flat.values() == kc.values().data());
        CHECK(composed_conjugate_check(k, c, d, 0.0).ok());
    }
}

TEST_CASE("composed conjugate check on the listed kernels") {
    const auto x = make_grid("X", {0.0, 1.0});
    const Coupling c = Coupling::bilinear(x, x);
    CHECK(composed_conjugate_check(Kernel::constant(x, x, 0.0), c, c).conclusion_holds == true);
    Kernel with_inf(x, x, ext(oracle::Mat{{0, kInf}, {1, 2}}));
    CHECK(composed_conjugate_check(with_inf, c, c).conclusion_holds == true);
    const Kernel minus = Kernel::constant(x, x, ExtReal::neg_inf());
    CHECK(composed_conjugate_check(minus, c, c).conclusion_holds == true);
    CHECK(same(kernel_conjugate(minus, c, c), {{kInf, kInf}, {kInf, kInf}}));
}

TEST_CASE("conjugate of an infimum family") {
    std::mt19937_64 rng(3);
    const auto x = make_abstract_set("X", 4);
    const auto s = make_abstract_set("S", 4);
    for (int trial = 0; trial < 30; ++trial) {
        const Coupling c = Coupling::table(x, s, ext(draw_mat(rng, 4, 4)));
        std::vector<ValueTable> fam;
        for (int i = 0; i < 3; ++i) {
            fam.emplace_back(x, ext(draw_vec(rng, 4)));
        }
        CHECK_NOTHROW((void)conjugate_of_inf_family(fam, c));
        const std::vector<ValueTable> single = {fam[0]};
        CHECK(conjugate_of_inf_family(single, c) == conjugate(fam[0], c));
        const std::vector<ValueTable> twice = {fam[1], fam[1]};
        CHECK(conjugate_of_inf_family(twice, c) == conjugate(fam[1], c));
    }
    CHECK_THROWS_WITH_AS((void)conjugate_of_inf_family(std::vector<ValueTable>{},
                                                       Coupling::zero(x, s)),
                         "empty family", std::invalid_argument);
}

TEST_CASE("fast bilinear conjugate matches brute force") {
    const auto x = make_uniform_grid("X", -1.0, 1.0, 101);
    const auto s = make_uniform_grid("S", -2.0, 2.0, 101);
    const Coupling c = Coupling::bilinear(x, s);
    std::vector<ExtReal> sq;
    for (double v : x->coordinates_1d()) {
        sq.emplace_back(v * v);
    }
    const ValueTable f(x, sq);
    CHECK(conjugate_bilinear_fast(f, c) == conjugate(f, c));

    std::vector<ExtReal> spike(101, ExtReal::pos_inf());
    spike[50] = 0.0;
    const ValueTable sp(x, spike);
    CHECK(conjugate_bilinear_fast(sp, c) == ValueTable::constant(s, 0.0));

    std::vector<ExtReal> aff;
    for (double v : x->coordinates_1d()) {
        aff.emplace_back(0.75 * v - 0.5);
    }
    CHECK(conjugate_bilinear_fast(ValueTable(x, aff), c) == conjugate(ValueTable(x, aff), c));
    CHECK(conjugate_bilinear_fast(ValueTable(x, aff), Coupling::bilinear(x, s, -1)) ==
          conjugate(ValueTable(x, aff), Coupling::bilinear(x, s, -1)));

    std::vector<ExtReal> bad = sq;
    bad[3] = ExtReal::neg_inf();
    CHECK_THROWS_WITH_AS((void)conjugate_bilinear_fast(ValueTable(x, bad), c),
                         "fast path requires proper f", std::invalid_argument);
    const auto unsorted = make_grid("U", {0.0, 2.0, 1.0});
    CHECK_THROWS_AS((void)conjugate_bilinear_fast(ValueTable::constant(unsorted, 0.0),
                                                  Coupling::bilinear(unsorted, unsorted)),
                    std::invalid_argument);
    const auto a = make_abstract_set("A", 2);
    CHECK_THROWS_AS((void)conjugate_bilinear_fast(ValueTable::constant(a, 0.0), Coupling::zero(a, a)),
                    std::invalid_argument);
    CHECK(conjugate_bilinear_fast(ValueTable::constant(x, ExtReal::pos_inf()), c) ==
          ValueTable::constant(s, ExtReal::neg_inf()));
}

TEST_CASE("fast bilinear conjugate on random grids") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        std::uniform_int_distribution<std::size_t> sz(1, 40);
        const std::size_t n = sz(rng);
        const std::size_t m = sz(rng);
        std::uniform_real_distribution<double> step(0.01, 1.0);
        std::vector<double> xs(n), ss(m);
        double acc = -5.0;
        for (auto& v : xs) {
            acc += step(rng);
            v = acc;
        }
        acc = -10.0;
        for (auto& v : ss) {
            acc += step(rng);
            v = acc;
        }
        const auto x = make_grid("X", xs);
        const auto s = make_grid("S", ss);
        std::uniform_real_distribution<double> val(-3.0, 3.0);
        std::vector<ExtReal> fv(n);
        for (auto& v : fv) {
            v = std::uniform_real_distribution<double>(0, 1)(rng) < 0.2 ? ExtReal::pos_inf()
                                                                          : ExtReal(val(rng));
        }
        const ValueTable f(x, fv);
        for (int sign : {1, -1}) {
            const Coupling c = Coupling::bilinear(x, s, sign);
            const ValueTable fast = conjugate_bilinear_fast(f, c);
            const ValueTable slow = conjugate(f, c);
            for (std::size_t j = 0; j < m; ++j) {
                CHECK(approx_eq(fast[j], slow[j], 1e-12));
            }
        }
    }
}
