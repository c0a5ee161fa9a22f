#include "conjugax/suites.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace conjugax {

namespace {

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

std::size_t draw_size(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

ExtReal draw_real(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Nonnegative raise: 0 half of the time, else a half-integer in (0, 4] or +inf.
ExtReal draw_raise(Rng& rng, double p_inf) {
    const double r = uniform01(rng);
    if (r < p_inf) {
        return ExtReal::pos_inf();
    }
    if (r < 0.5) {
        return 0.0;
    }
    return 0.5 * static_cast<double>(draw_size(rng, 1, 8));
}

ValueTable raised(Rng& rng, const ValueTable& base, double p_inf) {
    std::vector<ExtReal> v(base.values().begin(), base.values().end());
    for (auto& e : v) e = upp_add(e, draw_raise(rng, p_inf));
    return ValueTable(base.set(), std::move(v));
}

Kernel raised(Rng& rng, const Kernel& base, double p_inf) {
    ExtMatrix m(base.rows()->size(), base.cols()->size());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = upp_add(base(i, j), draw_raise(rng, p_inf));
    return Kernel(base.rows(), base.cols(), std::move(m));
}

// Folds one instance report into a suite report.
struct Aggregate {
    CheckReport rep;
    std::size_t instances = 0;
    std::size_t hypothesis_failures = 0;
    std::size_t premise_instances = 0;
    std::size_t asserted = 0;

    void absorb(const CheckReport& r, std::size_t instance) {
        ++instances;
        if (!r.hypothesis_holds) {
            ++hypothesis_failures;
        }
        if (!r.unmet.empty()) {
            ++premise_instances;
        }
        if (r.conclusion_holds) {
            ++asserted;
        }
        for (const auto& v : r.violations) {
            Violation w = v;
            w.index.insert(w.index.begin(), instance);
            rep.violations.push_back(std::move(w));
        }
        for (const auto& u : r.unmet) {
            std::vector<std::size_t> idx = u;
            idx.insert(idx.begin(), instance);
            rep.unmet.push_back(std::move(idx));
        }
    }

    void fail(std::size_t instance, std::size_t code, ExtReal lhs, ExtReal rhs) {
        rep.violations.push_back({{instance, code}, lhs, rhs});
    }
};

void finish(CheckReport& rep, bool expect_hypothesis = true, std::size_t hyp_failures = 0) {
    rep.hypothesis_holds = !expect_hypothesis || hyp_failures == 0;
    rep.conclusion_holds = rep.violations.empty() && rep.hypothesis_holds;
}

// Componentwise comparison with an instance/code/position index.
void compare_tables(Aggregate& agg, std::size_t instance, std::size_t code, const ValueTable& got,
                    const ValueTable& want, double tol) {
    for (std::size_t i = 0; i < got.size(); ++i) {
        if (!approx_eq(got[i], want[i], tol)) {
            agg.rep.violations.push_back({{instance, code, i}, got[i], want[i]});
        }
    }
}

// ---- Moreau algebra ----------------------------------------------------

struct Law {
    const char* name;
    std::size_t arity;
    std::function<bool(const ExtReal*)> holds;
};

ExtReal sup_of(const std::vector<ExtReal>& v) { return conjugax::sup(v).value; }
ExtReal inf_of(const std::vector<ExtReal>& v) { return conjugax::inf(v).value; }

bool iff(bool a, bool b) { return a == b; }

std::vector<Law> tuple_laws() {
    const ExtReal zero(0.0);
    std::vector<Law> laws;
    laws.push_back({"lower addition is commutative", 2,
                    [](const ExtReal* a) { return low_add(a[0], a[1]) == low_add(a[1], a[0]); }});
    laws.push_back({"upper addition is commutative", 2,
                    [](const ExtReal* a) { return upp_add(a[0], a[1]) == upp_add(a[1], a[0]); }});
    laws.push_back({"lower addition is associative", 3, [](const ExtReal* a) {
                        return low_add(low_add(a[0], a[1]), a[2]) == low_add(a[0], low_add(a[1], a[2]));
                    }});
    laws.push_back({"upper addition is associative", 3, [](const ExtReal* a) {
                        return upp_add(upp_add(a[0], a[1]), a[2]) == upp_add(a[0], upp_add(a[1], a[2]));
                    }});
    laws.push_back({"lower addition resolves +inf and -inf to -inf", 1, [](const ExtReal* a) {
                        return !(a[0].is_pos_inf() || a[0].is_neg_inf()) ||
                               low_add(a[0], neg(a[0])) == ExtReal::neg_inf();
                    }});
    laws.push_back({"upper addition resolves +inf and -inf to +inf", 1, [](const ExtReal* a) {
                        return !(a[0].is_pos_inf() || a[0].is_neg_inf()) ||
                               upp_add(a[0], neg(a[0])) == ExtReal::pos_inf();
                    }});
    laws.push_back({"lower addition is monotone", 4, [](const ExtReal* a) {
                        return !(a[0] <= a[1] && a[2] <= a[3]) || low_add(a[0], a[2]) <= low_add(a[1], a[3]);
                    }});
    laws.push_back({"upper addition is monotone", 4, [](const ExtReal* a) {
                        return !(a[0] <= a[1] && a[2] <= a[3]) || upp_add(a[0], a[2]) <= upp_add(a[1], a[3]);
                    }});
    laws.push_back({"(-u) lower+ (-v) <= -(u lower+ v)", 2, [](const ExtReal* a) {
                        return low_add(neg(a[0]), neg(a[1])) <= neg(low_add(a[0], a[1]));
                    }});
    laws.push_back({"(-u) upper+ (-v) >= -(u upper+ v)", 2, [](const ExtReal* a) {
                        return upp_add(neg(a[0]), neg(a[1])) >= neg(upp_add(a[0], a[1]));
                    }});
    laws.push_back({"(-u) lower+ u <= 0", 1, [zero](const ExtReal* a) { return low_add(neg(a[0]), a[0]) <= zero; }});
    laws.push_back({"(-u) upper+ u >= 0", 1, [zero](const ExtReal* a) { return upp_add(neg(a[0]), a[0]) >= zero; }});
    laws.push_back({"u lower+ v <= u upper+ v", 2,
                    [](const ExtReal* a) { return low_add(a[0], a[1]) <= upp_add(a[0], a[1]); }});
    laws.push_back({"-(u upper+ v) = (-u) lower+ (-v)", 2, [](const ExtReal* a) {
                        return neg(upp_add(a[0], a[1])) == low_add(neg(a[0]), neg(a[1]));
                    }});
    laws.push_back({"-(u lower+ v) = (-u) upper+ (-v)", 2, [](const ExtReal* a) {
                        return neg(low_add(a[0], a[1])) == upp_add(neg(a[0]), neg(a[1]));
                    }});
    laws.push_back({"(u upper+ v) lower+ w <= u upper+ (v lower+ w)", 3, [](const ExtReal* a) {
                        return low_add(upp_add(a[0], a[1]), a[2]) <= upp_add(a[0], low_add(a[1], a[2]));
                    }});
    laws.push_back({"mixed associativity is strict exactly in the two listed cases", 3, [](const ExtReal* a) {
                        const ExtReal& u = a[0];
                        const ExtReal& v = a[1];
                        const ExtReal& w = a[2];
                        const bool strict = low_add(upp_add(u, v), w) < upp_add(u, low_add(v, w));
                        const bool listed = (u.is_pos_inf() && w.is_neg_inf()) ||
                                            (u.is_neg_inf() && w.is_pos_inf() && v.is_finite());
                        return strict == listed;
                    }});
    laws.push_back({"u lower+ (-v) <= 0 iff u <= v iff 0 <= v upper+ (-u)", 2, [zero](const ExtReal* a) {
                        const ExtReal& u = a[0];
                        const ExtReal& v = a[1];
                        const bool m = u <= v;
                        return iff(low_add(u, neg(v)) <= zero, m) && iff(m, zero <= upp_add(v, neg(u)));
                    }});
    laws.push_back({"u lower+ (-v) <= w iff u <= v upper+ w iff u lower+ (-w) <= v", 3, [](const ExtReal* a) {
                        const ExtReal& u = a[0];
                        const ExtReal& v = a[1];
                        const ExtReal& w = a[2];
                        const bool m = u <= upp_add(v, w);
                        return iff(low_add(u, neg(v)) <= w, m) && iff(m, low_add(u, neg(w)) <= v);
                    }});
    laws.push_back({"w <= v upper+ (-u) iff u lower+ w <= v iff u <= v upper+ (-w)", 3, [](const ExtReal* a) {
                        const ExtReal& u = a[0];
                        const ExtReal& v = a[1];
                        const ExtReal& w = a[2];
                        const bool m = low_add(u, w) <= v;
                        return iff(w <= upp_add(v, neg(u)), m) && iff(m, u <= upp_add(v, neg(w)));
                    }});
    laws.push_back({"-(u1 lower+ u2) lower+ -(v1 upper+ v2) <= ((-u1) lower+ (-v1)) upper+ ((-u2) lower+ (-v2))",
                    4, [](const ExtReal* a) {
                        const ExtReal l = low_add(neg(low_add(a[0], a[1])), neg(upp_add(a[2], a[3])));
                        const ExtReal r = upp_add(low_add(neg(a[0]), neg(a[2])), low_add(neg(a[1]), neg(a[3])));
                        return l <= r;
                    }});
    return laws;
}

struct ArrayLaw {
    const char* name;
    std::function<bool(const std::vector<ExtReal>&, const std::vector<ExtReal>&, ExtReal)> holds;
};

std::vector<ArrayLaw> array_laws() {
    auto pairs = [](const std::vector<ExtReal>& f, const std::vector<ExtReal>& g, auto op) {
        std::vector<ExtReal> out;
        for (auto a : f)
            for (auto b : g) out.push_back(op(a, b));
        return out;
    };
    auto with_t = [](const std::vector<ExtReal>& f, ExtReal t, auto op) {
        std::vector<ExtReal> out;
        for (auto a : f) out.push_back(op(a, t));
        return out;
    };
    auto lo = [](ExtReal a, ExtReal b) { return low_add(a, b); };
    auto up = [](ExtReal a, ExtReal b) { return upp_add(a, b); };
    std::vector<ArrayLaw> laws;
    laws.push_back({"sup f lower+ sup g = sup of pairwise lower sums",
                    [=](const auto& f, const auto& g, ExtReal) {
                        return low_add(sup_of(f), sup_of(g)) == sup_of(pairs(f, g, lo));
                    }});
    laws.push_back({"inf f lower+ inf g <= inf of pairwise lower sums",
                    [=](const auto& f, const auto& g, ExtReal) {
                        return low_add(inf_of(f), inf_of(g)) <= inf_of(pairs(f, g, lo));
                    }});
    laws.push_back({"t < +inf: inf f lower+ t = inf of f lower+ t", [=](const auto& f, const auto&, ExtReal t) {
                        return t.is_pos_inf() || low_add(inf_of(f), t) == inf_of(with_t(f, t, lo));
                    }});
    laws.push_back({"inf f upper+ inf g = inf of pairwise upper sums",
                    [=](const auto& f, const auto& g, ExtReal) {
                        return upp_add(inf_of(f), inf_of(g)) == inf_of(pairs(f, g, up));
                    }});
    laws.push_back({"sup f upper+ sup g >= sup of pairwise upper sums",
                    [=](const auto& f, const auto& g, ExtReal) {
                        return upp_add(sup_of(f), sup_of(g)) >= sup_of(pairs(f, g, up));
                    }});
    laws.push_back({"-inf < t: sup f upper+ t = sup of f upper+ t", [=](const auto& f, const auto&, ExtReal t) {
                        return t.is_neg_inf() || upp_add(sup_of(f), t) == sup_of(with_t(f, t, up));
                    }});
    return laws;
}

// ---- suites -------------------------------------------------------------

CheckReport theorem_suite(Rng& rng) {
    Aggregate agg;
    for (std::size_t i = 0; i < 200; ++i) {
        agg.absorb(check_theorem_main(random_theorem_instance(rng), 0.0), i);
    }
    agg.rep.notes.push_back(std::to_string(agg.instances) + " instances, " +
                            std::to_string(agg.rep.violations.size()) + " conclusion violation(s)");
    finish(agg.rep, true, agg.hypothesis_failures);
    return agg.rep;
}

CheckReport equality_real_suite(Rng& rng, double tol) {
    Aggregate agg;
    for (std::size_t i = 0; i < 100; ++i) {
        const CheckReport r = check_equality_real_valued(random_strong_duality_instance(rng), tol);
        agg.absorb(r, i);
        if (!r.conclusion_holds) {
            agg.fail(i, 0, ExtReal(0.0), ExtReal(0.0));
        }
    }
    agg.rep.notes.push_back(std::to_string(agg.instances) + " instances, equality asserted at every dual point of " +
                            std::to_string(agg.asserted) + "; premise unmet in " +
                            std::to_string(agg.premise_instances));
    // with a single dual point of Y the minimax premise is automatic
    for (const auto& u : agg.rep.unmet) agg.fail(u.front(), 1, ExtReal(0.0), ExtReal(0.0));
    finish(agg.rep, true, agg.hypothesis_failures);
    return agg.rep;
}

CheckReport equality_extended_suite(Rng& rng, double tol) {
    Aggregate agg;
    std::size_t condition_failed = 0;
    for (std::size_t i = 0; i < 100; ++i) {
        const CheckReport r = check_equality_extended(random_theorem_instance(rng, 4, 0.1), tol);
        agg.absorb(r, i);
        if (!r.unmet.empty()) {
            ++condition_failed;
        }
    }
    agg.rep.notes.push_back(std::to_string(agg.instances) + " instances, equality asserted in " +
                            std::to_string(agg.asserted) + "; condition failed somewhere in " +
                            std::to_string(condition_failed) + " (reported, not asserted)");
    finish(agg.rep, true, agg.hypothesis_failures);
    return agg.rep;
}

CheckReport infconv_suite(Rng& rng) {
    Aggregate agg;
    // (a) conjugate representation and the two dual-convoluter routes
    std::size_t a_count = 0;
    for (std::size_t i = 0; i < 100; ++i, ++a_count) {
        const InfconvInstance in = random_infconv_instance(rng);
        try {
            (void)infconv_as_conjugate(in.g1, in.gamma, in.g2);
        } catch (const std::logic_error&) {
            agg.fail(i, 0, ExtReal(0.0), ExtReal(0.0));
        }
        if (!(dual_convoluter(in.gamma, in.c, in.d1, in.d2) ==
              dual_convoluter_via_kernel(in.gamma, in.c, in.d1, in.d2))) {
            agg.fail(i, 1, ExtReal(0.0), ExtReal(0.0));
        }
    }
    agg.rep.notes.push_back("conjugate representation: " + std::to_string(a_count) + " instances");

    // (b) classical delta convoluter on {0..8} x {0..16} x {0..8}
    std::vector<double> half;
    std::vector<double> full;
    for (int k = 0; k <= 8; ++k) half.push_back(k);
    for (int k = 0; k <= 16; ++k) full.push_back(k);
    const SetRef y1 = make_grid("Y1", half);
    const SetRef y2 = make_grid("Y2", half);
    const SetRef x = make_grid("X", full);
    const SetRef xs = make_grid("Xs", full);
    const Convoluter delta = Convoluter::classical_delta(y1, x, y2);
    const Coupling c = Coupling::bilinear(x, xs);
    const Coupling s1 = Coupling::bilinear(xs, y1);
    const Coupling s2 = Coupling::bilinear(xs, y2);
    std::size_t split_asserted = 0;
    for (std::size_t i = 0; i < 20; ++i) {
        const ValueTable g1 = draw_table(rng, y1, i == 0 ? 0.0 : 0.05);
        const ValueTable g2 = draw_table(rng, y2, i == 0 ? 0.0 : 0.05);
        // only +inf may occur: drop -inf draws to keep the functions proper
        auto proper = [](const ValueTable& t) {
            std::vector<ExtReal> v(t.values().begin(), t.values().end());
            for (auto& e : v)
                if (e.is_neg_inf()) e = ExtReal::pos_inf();
            return ValueTable(t.set(), std::move(v));
        };
        const CheckReport r = split_conjugate(proper(g1), proper(g2), delta, c, s1, s2, 0.0);
        if (!r.hypothesis_holds || r.conclusion_holds != true) {
            agg.fail(100 + i, 2, ExtReal(0.0), ExtReal(0.0));
        } else {
            ++split_asserted;
        }
        for (const auto& v : r.violations) {
            std::vector<std::size_t> idx = v.index;
            idx.insert(idx.begin(), 100 + i);
            agg.rep.violations.push_back({idx, v.lhs, v.rhs});
        }
    }
    agg.rep.notes.push_back("classical split on 17 points: hypothesis verified and equality exact in " +
                            std::to_string(split_asserted) + " of 20");

    // (c) duality inequality
    std::size_t c_viol = 0;
    for (std::size_t i = 0; i < 100; ++i) {
        const InfconvInstance in = random_infconv_instance(rng);
        const CheckReport r = check_infconv_duality(in.f, in.g1, in.g2, in.gamma, in.c, in.d1, in.d2, 0.0);
        if (!r.hypothesis_holds) {
            agg.fail(200 + i, 3, ExtReal(0.0), ExtReal(0.0));
        }
        c_viol += r.violations.size();
        for (const auto& v : r.violations) {
            std::vector<std::size_t> idx = v.index;
            idx.insert(idx.begin(), 200 + i);
            agg.rep.violations.push_back({idx, v.lhs, v.rhs});
        }
    }
    agg.rep.notes.push_back("duality inequality: 100 instances, " + std::to_string(c_viol) + " violation(s)");
    finish(agg.rep, false);
    return agg.rep;
}

CheckReport partial_suite(Rng& rng, double tol) {
    Aggregate agg;
    std::size_t lemma_viol = 0;
    for (std::size_t i = 0; i < 200; ++i) {
        const PartialInstance p = random_partial_instance(rng);
        const Kernel h = raised(rng, partial_conj_dual(p.e, p.d), 0.1);
        const CheckReport lem = check_lemma_partial(h, p.e, p.c, p.d);
        if (!lem.hypothesis_holds) {
            agg.fail(i, 0, ExtReal(0.0), ExtReal(0.0));
        }
        lemma_viol += lem.violations.size();
        for (const auto& v : lem.violations) {
            std::vector<std::size_t> idx = v.index;
            idx.insert(idx.begin(), i);
            agg.rep.violations.push_back({idx, v.lhs, v.rhs});
        }

        // the theorem through the kernel H = partial_conj_dual(E, d) is bounded by the exchange bound
        DualityInstance inst{p.c, p.d, partial_conj_dual(p.e, p.d), ValueTable::constant(p.e.rows(), 0.0), p.g};
        inst.f = lhs_envelope(inst);
        const CheckReport thm = check_theorem_main(inst, 0.0);
        const CheckReport ex = check_exchange_implication(inst.f, p.g, p.e, p.c, p.d, 0.0);
        if (thm.conclusion_holds != true) {
            agg.fail(i, 1, ExtReal(0.0), ExtReal(0.0));
        }
        if (ex.conclusion_holds != true) {
            agg.fail(i, 2, ExtReal(0.0), ExtReal(0.0));
        }
        const ValueTable r = rhs_envelope(inst);
        const ValueTable b = exchange_bound(p.g, p.e, p.c, p.d);
        for (std::size_t a = 0; a < r.size(); ++a) {
            if (!approx_le(r[a], b[a], tol)) {
                agg.rep.violations.push_back({{i, 3, a}, r[a], b[a]});
            }
        }

        // identity-like d on Y# = Y: the two bounds coincide
        const SetRef y = p.g.set();
        ExtMatrix id(y->size(), y->size(), ExtReal::neg_inf());
        for (std::size_t k = 0; k < y->size(); ++k) id(k, k) = 0.0;
        const Coupling did = Coupling::table(y, y, id);
        const Kernel e2(p.e.rows(), y, draw_matrix(rng, p.e.rows()->size(), y->size(), 0.1));
        DualityInstance same{p.c, did, partial_conj_dual(e2, did), ValueTable::constant(p.e.rows(), 0.0), p.g};
        same.f = lhs_envelope(same);
        if (!(check_theorem_main(same, tol).conclusion_holds == true)) {
            agg.fail(i, 4, ExtReal(0.0), ExtReal(0.0));
        }
        compare_tables(agg, i, 5, rhs_envelope(same), exchange_bound(p.g, e2, p.c, did), tol);
    }
    agg.rep.notes.push_back("200 lemma instances, " + std::to_string(lemma_viol) + " conclusion violation(s)");
    finish(agg.rep, false);
    return agg.rep;
}

CheckReport fast_path_suite(Rng& rng) {
    Aggregate agg;
    std::size_t largest = 0;
    for (std::size_t i = 0; i < 1000; ++i) {
        const FastPathInstance in = random_fast_path_instance(rng);
        largest = std::max(largest, in.f.size());
        const ValueTable fast = conjugate_bilinear_fast(in.f, in.c);
        const ValueTable slow = conjugate(in.f, in.c);
        for (std::size_t s = 0; s < fast.size(); ++s) {
            if (fast[s].tag() != slow[s].tag() || !approx_eq(fast[s], slow[s], 1e-12)) {
                agg.rep.violations.push_back({{i, s}, fast[s], slow[s]});
            }
        }
    }
    agg.rep.notes.push_back("1000 instances, tags exact and finite values within 1e-12");
    finish(agg.rep, false);
    return agg.rep;
}

}  // namespace

const std::vector<ExtReal>& moreau_lattice() {
    static const std::vector<ExtReal> s = {ExtReal::neg_inf(), ExtReal(-1.0), ExtReal(0.0), ExtReal(2.5),
                                           ExtReal::pos_inf()};
    return s;
}

ExtReal draw_dyadic(Rng& rng, double p_inf) {
    const double r = uniform01(rng);
    if (r < p_inf) {
        return ExtReal::pos_inf();
    }
    if (r < 2 * p_inf) {
        return ExtReal::neg_inf();
    }
    return 0.5 * static_cast<double>(std::uniform_int_distribution<int>(-16, 16)(rng));
}

SetRef draw_abstract_set(Rng& rng, std::string id, std::size_t max_size) {
    return make_abstract_set(std::move(id), draw_size(rng, 1, max_size));
}

ExtMatrix draw_matrix(Rng& rng, std::size_t rows, std::size_t cols, double p_inf) {
    ExtMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = draw_dyadic(rng, p_inf);
    return m;
}

ValueTable draw_table(Rng& rng, const SetRef& set, double p_inf) {
    std::vector<ExtReal> v(set->size());
    for (auto& e : v) e = draw_dyadic(rng, p_inf);
    return ValueTable(set, std::move(v));
}

DualityInstance random_theorem_instance(Rng& rng, std::size_t max_size, double p_inf) {
    const SetRef x = draw_abstract_set(rng, "X", max_size);
    const SetRef y = draw_abstract_set(rng, "Y", max_size);
    const SetRef xs = draw_abstract_set(rng, "Xs", max_size);
    const SetRef ys = draw_abstract_set(rng, "Ys", max_size);
    DualityInstance inst{Coupling::table(x, xs, draw_matrix(rng, x->size(), xs->size(), p_inf)),
                         Coupling::table(y, ys, draw_matrix(rng, y->size(), ys->size(), p_inf)),
                         Kernel(x, y, draw_matrix(rng, x->size(), y->size(), p_inf)),
                         ValueTable::constant(x, 0.0), draw_table(rng, y, p_inf)};
    inst.f = lhs_envelope(inst);
    return inst;
}

DualityInstance random_strong_duality_instance(Rng& rng, std::size_t max_size) {
    const SetRef x = draw_abstract_set(rng, "X", max_size);
    const SetRef y = draw_abstract_set(rng, "Y", max_size);
    const SetRef xs = draw_abstract_set(rng, "Xs", max_size);
    const SetRef ys = make_abstract_set("Ys", 1);
    auto real_matrix = [&](std::size_t r, std::size_t c) {
        ExtMatrix m(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) m(i, j) = draw_real(rng, -4.0, 4.0);
        return m;
    };
    std::vector<ExtReal> gv(y->size());
    for (auto& e : gv) e = draw_real(rng, -4.0, 4.0);
    DualityInstance inst{Coupling::table(x, xs, real_matrix(x->size(), xs->size())),
                         Coupling::table(y, ys, real_matrix(y->size(), 1)),
                         Kernel(x, y, real_matrix(x->size(), y->size())),
                         ValueTable::constant(x, 0.0), ValueTable(y, std::move(gv))};
    DualityInstance sub = inst;
    sub.g = biconjugate(inst.g, Coupling::opposite(inst.d));
    inst.f = lhs_envelope(sub);
    return inst;
}

InfconvInstance random_infconv_instance(Rng& rng, std::size_t max_size, double p_inf) {
    const SetRef y1 = draw_abstract_set(rng, "Y1", max_size);
    const SetRef y2 = draw_abstract_set(rng, "Y2", max_size);
    const SetRef x = draw_abstract_set(rng, "X", max_size);
    const SetRef xs = draw_abstract_set(rng, "Xs", max_size);
    const SetRef y1s = draw_abstract_set(rng, "Y1s", max_size);
    const SetRef y2s = draw_abstract_set(rng, "Y2s", max_size);
    std::vector<ExtReal> gamma(y1->size() * x->size() * y2->size());
    for (auto& e : gamma) e = draw_dyadic(rng, p_inf);
    InfconvInstance in{draw_table(rng, y1, p_inf),
                       draw_table(rng, y2, p_inf),
                       Convoluter(y1, x, y2, std::move(gamma)),
                       Coupling::table(x, xs, draw_matrix(rng, x->size(), xs->size(), p_inf)),
                       Coupling::table(y1, y1s, draw_matrix(rng, y1->size(), y1s->size(), p_inf)),
                       Coupling::table(y2, y2s, draw_matrix(rng, y2->size(), y2s->size(), p_inf)),
                       ValueTable::constant(x, 0.0)};
    in.f = raised(rng, infconv(in.g1, in.gamma, in.g2), p_inf);
    return in;
}

PartialInstance random_partial_instance(Rng& rng, std::size_t max_size, double p_inf) {
    const SetRef x = draw_abstract_set(rng, "X", max_size);
    const SetRef y = draw_abstract_set(rng, "Y", max_size);
    const SetRef xs = draw_abstract_set(rng, "Xs", max_size);
    const SetRef ys = draw_abstract_set(rng, "Ys", max_size);
    return PartialInstance{Kernel(x, ys, draw_matrix(rng, x->size(), ys->size(), p_inf)),
                           Coupling::table(x, xs, draw_matrix(rng, x->size(), xs->size(), p_inf)),
                           Coupling::table(y, ys, draw_matrix(rng, y->size(), ys->size(), p_inf)),
                           draw_table(rng, y, p_inf)};
}

FastPathInstance random_fast_path_instance(Rng& rng, std::size_t max_points) {
    auto grid = [&](std::string id, std::size_t n) {
        std::vector<double> pts(n);
        double at = draw_real(rng, -4.0, 0.0).value();
        for (auto& p : pts) {
            p = at;
            at += draw_real(rng, 1e-3, 8.0 / static_cast<double>(n)).value();
        }
        return make_grid(std::move(id), pts);
    };
    const std::size_t n = draw_size(rng, 1, max_points);
    const std::size_t m = draw_size(rng, 1, max_points);
    const SetRef x = grid("X", n);
    const SetRef s = grid("S", m);
    const double p_inf = uniform01(rng) < 0.05 ? 1.0 : 0.1;
    std::vector<ExtReal> f(n);
    for (auto& e : f) e = uniform01(rng) < p_inf ? ExtReal::pos_inf() : draw_real(rng, -8.0, 8.0);
    return FastPathInstance{ValueTable(x, std::move(f)), Coupling::bilinear(x, s)};
}

CheckReport moreau_law_suite(std::uint64_t seed, std::size_t random_pairs) {
    CheckReport rep;
    rep.check = "moreau-laws";
    rep.notes.push_back("seed " + std::to_string(seed));
    const auto& s = moreau_lattice();
    const std::size_t ns = s.size();
    std::size_t law_id = 0;
    std::size_t total = 0;
    for (const Law& law : tuple_laws()) {
        std::size_t cases = 1;
        for (std::size_t k = 0; k < law.arity; ++k) cases *= ns;
        std::array<ExtReal, 4> args{};
        for (std::size_t code = 0; code < cases; ++code) {
            std::size_t rest = code;
            for (std::size_t k = law.arity; k-- > 0;) {
                args[k] = s[rest % ns];
                rest /= ns;
            }
            if (!law.holds(args.data())) {
                rep.violations.push_back({{law_id, code}, args[0], args[law.arity - 1]});
            }
        }
        rep.notes.push_back(std::string(law.name) + ": " + std::to_string(cases) + " cases");
        total += cases;
        ++law_id;
    }

    // array laws: every pair of length-2 arrays, every constant, then random arrays
    Rng rng(seed);
    for (const ArrayLaw& law : array_laws()) {
        std::size_t cases = 0;
        for (std::size_t code = 0; code < ns * ns * ns * ns * ns; ++code) {
            const std::vector<ExtReal> f = {s[code % ns], s[(code / ns) % ns]};
            const std::vector<ExtReal> g = {s[(code / (ns * ns)) % ns], s[(code / (ns * ns * ns)) % ns]};
            const ExtReal t = s[(code / (ns * ns * ns * ns)) % ns];
            ++cases;
            if (!law.holds(f, g, t)) {
                rep.violations.push_back({{law_id, code}, f[0], g[0]});
            }
        }
        for (std::size_t r = 0; r < random_pairs; ++r) {
            std::vector<ExtReal> f(draw_size(rng, 1, 6));
            std::vector<ExtReal> g(draw_size(rng, 1, 6));
            for (auto& e : f) e = s[draw_size(rng, 0, ns - 1)];
            for (auto& e : g) e = s[draw_size(rng, 0, ns - 1)];
            const ExtReal t = s[draw_size(rng, 0, ns - 1)];
            ++cases;
            if (!law.holds(f, g, t)) {
                rep.violations.push_back({{law_id, ns * ns * ns * ns * ns + r}, f[0], g[0]});
            }
        }
        rep.notes.push_back(std::string(law.name) + ": " + std::to_string(cases) + " cases");
        total += cases;
        ++law_id;
    }
    rep.notes.push_back(std::to_string(law_id) + " laws, " + std::to_string(total) + " cases, " +
                        std::to_string(rep.violations.size()) + " failure(s)");
    rep.conclusion_holds = rep.violations.empty();
    return rep;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"moreau-laws",       "theorem-random", "equality-real",
                                                   "equality-extended", "infconv",        "partial",
                                                   "fast-path"};
    return names;
}

CheckReport run_suite(const std::string& name, std::uint64_t seed, double tol) {
    if (name == "moreau-laws") {
        return moreau_law_suite(seed);
    }
    Rng rng(seed);
    CheckReport rep;
    if (name == "theorem-random") {
        rep = theorem_suite(rng);
    } else if (name == "equality-real") {
        rep = equality_real_suite(rng, tol);
    } else if (name == "equality-extended") {
        rep = equality_extended_suite(rng, tol);
    } else if (name == "infconv") {
        rep = infconv_suite(rng);
    } else if (name == "partial") {
        rep = partial_suite(rng, tol);
    } else if (name == "fast-path") {
        rep = fast_path_suite(rng);
    } else {
        throw std::invalid_argument("unknown suite \"" + name + "\"");
    }
    rep.check = name;
    rep.notes.insert(rep.notes.begin(), "seed " + std::to_string(seed));
    return rep;
}

}  // namespace conjugax
