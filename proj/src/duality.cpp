#include "conjugax/duality.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace conjugax {

namespace {

void require_same(const SetRef& a, const SetRef& b, const char* what) {
    if (!same_set(a, b)) {
        throw std::invalid_argument(std::string("domain mismatch: ") + what + " ('" +
                                    (a ? a->id() : "?") + "' vs '" + (b ? b->id() : "?") + "')");
    }
}

// g^{-d}, a function on Y#.
ValueTable opposite_conjugate(const ValueTable& g, const Coupling& d) {
    return conjugate(g, Coupling::opposite(d));
}

bool equal_within(const ValueTable& a, const ValueTable& b, double tol) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!approx_eq(a[i], b[i], tol)) {
            return false;
        }
    }
    return true;
}

bool has_infinite(const ValueTable& t) {
    for (auto v : t.values()) {
        if (!v.is_finite()) {
            return true;
        }
    }
    return false;
}

}  // namespace

void DualityInstance::validate() const {
    require_same(f.set(), c.primal(), "f and c");
    require_same(g.set(), d.primal(), "g and d");
    require_same(kernel.rows(), c.primal(), "kernel rows and c");
    require_same(kernel.cols(), d.primal(), "kernel cols and d");
}

ValueTable lhs_envelope(const DualityInstance& inst) {
    inst.validate();
    const std::size_t nx = inst.kernel.rows()->size();
    const std::size_t ny = inst.kernel.cols()->size();
    std::vector<ExtReal> out(nx, ExtReal::pos_inf());
    for (std::size_t x = 0; x < nx; ++x) {
        for (std::size_t y = 0; y < ny; ++y) {
            ExtReal v = upp_add(inst.kernel(x, y), inst.g[y]);
            if (v < out[x]) {
                out[x] = v;
            }
        }
    }
    return ValueTable(inst.kernel.rows(), std::move(out));
}

ValueTable rhs_envelope(const DualityInstance& inst) {
    inst.validate();
    const Kernel kc = kernel_conjugate(inst.kernel, inst.c, inst.d);
    const ValueTable gd = opposite_conjugate(inst.g, inst.d);
    const std::size_t mx = kc.rows()->size();
    const std::size_t my = kc.cols()->size();
    std::vector<ExtReal> out(mx, ExtReal::pos_inf());
    for (std::size_t a = 0; a < mx; ++a) {
        for (std::size_t b = 0; b < my; ++b) {
            ExtReal v = upp_add(kc(a, b), gd[b]);
            if (v < out[a]) {
                out[a] = v;
            }
        }
    }
    return ValueTable(inst.c.dual(), std::move(out));
}

CheckReport check_theorem_main(const DualityInstance& inst, double tol) {
    CheckReport rep;
    rep.check = "theorem-main";
    const ValueTable env = lhs_envelope(inst);
    for (std::size_t x = 0; x < env.size(); ++x) {
        if (inst.f[x] < env[x]) {
            rep.hypothesis_holds = false;
            rep.unmet.push_back({x});
        }
    }
    if (!rep.hypothesis_holds) {
        rep.notes.emplace_back("hypothesis f >= envelope fails; conclusion not evaluated");
        return rep;
    }
    const ValueTable fc = conjugate(inst.f, inst.c);
    const ValueTable r = rhs_envelope(inst);
    bool all_ok = true;
    for (std::size_t a = 0; a < fc.size(); ++a) {
        rep.margins.push_back(margin(fc[a], r[a]));
        if (!approx_le(fc[a], r[a], tol)) {
            all_ok = false;
            rep.violations.push_back({{a}, fc[a], r[a]});
        }
    }
    rep.conclusion_holds = all_ok;
    return rep;
}

MinimaxPair supinf_infsup(const DualityInstance& inst, std::size_t dual_index) {
    inst.validate();
    if (dual_index >= inst.c.dual()->size()) {
        throw std::out_of_range("index out of range");
    }
    const ValueTable gd = opposite_conjugate(inst.g, inst.d);
    const std::size_t nx = inst.kernel.rows()->size();
    const std::size_t ny = inst.kernel.cols()->size();
    const std::size_t my = inst.d.dual()->size();

    // payload((x, y), y#), kept row-major over (x * ny + y, y#).
    ExtMatrix payload(nx * ny, my);
    for (std::size_t x = 0; x < nx; ++x) {
        const ExtReal cx = inst.c(x, dual_index);
        for (std::size_t y = 0; y < ny; ++y) {
            const ExtReal base = low_add(cx, neg(inst.kernel(x, y)));
            for (std::size_t b = 0; b < my; ++b) {
                payload(x * ny + y, b) = upp_add(low_add(base, inst.d(y, b)), gd[b]);
            }
        }
    }

    MinimaxPair out{ExtReal::neg_inf(), ExtReal::pos_inf()};
    for (std::size_t p = 0; p < nx * ny; ++p) {
        const ExtReal row_inf = inf(payload.row(p)).value;
        if (row_inf > out.sup_inf) {
            out.sup_inf = row_inf;
        }
    }
    for (std::size_t b = 0; b < my; ++b) {
        ExtReal col_sup = ExtReal::neg_inf();
        for (std::size_t p = 0; p < nx * ny; ++p) {
            if (payload(p, b) > col_sup) {
                col_sup = payload(p, b);
            }
        }
        if (col_sup < out.inf_sup) {
            out.inf_sup = col_sup;
        }
    }
    return out;
}

CheckReport check_equality_real_valued(const DualityInstance& inst, double tol) {
    inst.validate();
    if (!inst.c.is_finite_valued() || !inst.d.is_finite_valued() ||
        !inst.kernel.is_finite_valued()) {
        throw std::invalid_argument(
            "strong-duality equality check requires finite couplings and kernel");
    }
    CheckReport rep;
    rep.check = "equality-real";

    const ValueTable g2 = biconjugate(inst.g, Coupling::opposite(inst.d));
    rep.notes.emplace_back(g2 == inst.g ? "g already equals its (-d)-biconjugate"
                                        : "g replaced by its (-d)-biconjugate");
    DualityInstance sub{inst.c, inst.d, inst.kernel, inst.f, g2};
    if (has_infinite(inst.f) || has_infinite(g2)) {
        rep.notes.emplace_back("f or g takes an infinite value; equality tested as stated");
    }

    const ValueTable env = lhs_envelope(sub);
    if (!equal_within(inst.f, env, tol)) {
        rep.hypothesis_holds = false;
        for (std::size_t x = 0; x < env.size(); ++x) {
            if (!approx_eq(inst.f[x], env[x], tol)) {
                rep.unmet.push_back({x});
            }
        }
        rep.notes.emplace_back("f differs from the envelope of the substituted g");
        return rep;
    }

    const ValueTable fc = conjugate(inst.f, inst.c);
    const ValueTable r = rhs_envelope(sub);
    bool all_ok = true;
    bool any_premise = false;
    for (std::size_t a = 0; a < fc.size(); ++a) {
        const MinimaxPair mm = supinf_infsup(sub, a);
        if (!approx_eq(mm.sup_inf, mm.inf_sup, tol)) {
            rep.unmet.push_back({a});
            continue;
        }
        any_premise = true;
        rep.margins.push_back(margin(fc[a], r[a]));
        if (!approx_eq(fc[a], r[a], tol)) {
            all_ok = false;
            rep.violations.push_back({{a}, fc[a], r[a]});
        }
    }
    if (!rep.unmet.empty()) {
        rep.notes.emplace_back("premise failed at " + std::to_string(rep.unmet.size()) +
                               " dual point(s); equality not asserted there");
    }
    if (any_premise) {
        rep.conclusion_holds = all_ok;
    }
    return rep;
}

CheckReport check_equality_extended(const DualityInstance& inst, double tol) {
    CheckReport rep;
    rep.check = "equality-extended";
    const ValueTable env = lhs_envelope(inst);
    if (!(inst.f == env)) {
        rep.hypothesis_holds = false;
        rep.notes.emplace_back("f is not the envelope; nothing asserted");
        return rep;
    }
    const ValueTable fc = conjugate(inst.f, inst.c);
    const ValueTable r = rhs_envelope(inst);
    const ValueTable gd = opposite_conjugate(inst.g, inst.d);
    const std::size_t my = inst.d.dual()->size();
    bool all_ok = true;
    bool any_condition = false;
    for (std::size_t a = 0; a < fc.size(); ++a) {
        const ValueTable kx = marginal_kernel(inst.kernel, inst.c, a);
        std::vector<ExtReal> lhs_terms(kx.size());
        for (std::size_t y = 0; y < kx.size(); ++y) {
            lhs_terms[y] = low_add(neg(kx[y]), neg(inst.g[y]));
        }
        const ValueTable kxd = conjugate(kx, inst.d);
        std::vector<ExtReal> rhs_terms(my);
        for (std::size_t b = 0; b < my; ++b) {
            rhs_terms[b] = upp_add(kxd[b], gd[b]);
        }
        const ExtReal left = sup(lhs_terms).value;
        const ExtReal right = inf(rhs_terms).value;
        if (!approx_eq(left, right, tol)) {
            rep.unmet.push_back({a});
            continue;
        }
        any_condition = true;
        rep.margins.push_back(margin(fc[a], r[a]));
        if (!approx_eq(fc[a], r[a], tol)) {
            all_ok = false;
            rep.violations.push_back({{a}, fc[a], r[a]});
        }
    }
    if (!rep.unmet.empty()) {
        rep.notes.emplace_back("condition not met at " + std::to_string(rep.unmet.size()) +
                               " dual point(s)");
    }
    if (any_condition) {
        rep.conclusion_holds = all_ok;
    }
    return rep;
}

CheckReport fenchel_inequality_general(const ValueTable& g3, const ValueTable& g,
                                       const Coupling& d, double tol) {
    require_same(g3.set(), d.primal(), "g3 and d");
    require_same(g.set(), d.primal(), "g and d");
    CheckReport rep;
    rep.check = "fenchel-general";
    std::vector<ExtReal> lhs_terms(g.size());
    for (std::size_t y = 0; y < g.size(); ++y) {
        lhs_terms[y] = low_add(neg(g3[y]), neg(g[y]));
    }
    const ValueTable g3d = conjugate(g3, d);
    const ValueTable gd = opposite_conjugate(g, d);
    std::vector<ExtReal> rhs_terms(g3d.size());
    for (std::size_t b = 0; b < g3d.size(); ++b) {
        rhs_terms[b] = upp_add(g3d[b], gd[b]);
    }
    const ExtReal left = sup(lhs_terms).value;
    const ExtReal right = inf(rhs_terms).value;
    rep.margins.push_back(margin(left, right));
    const bool holds = approx_le(left, right, tol);
    if (!holds) {
        rep.violations.push_back({{}, left, right});
    }
    rep.conclusion_holds = holds;
    return rep;
}

CheckReport check_factorization(const Kernel& l, const Kernel& m, const Coupling& c,
                                const Coupling& d, double tol) {
    require_same(l.cols(), m.rows(), "shared control set");
    require_same(l.rows(), c.primal(), "L rows and c");
    require_same(m.cols(), d.primal(), "M cols and d");
    CheckReport rep;
    rep.check = "factorization";
    const std::size_t nx = l.rows()->size();
    const std::size_t nu = l.cols()->size();
    const std::size_t ny = m.cols()->size();

    ExtMatrix fv(nx, ny, ExtReal::pos_inf());
    for (std::size_t x = 0; x < nx; ++x) {
        for (std::size_t u = 0; u < nu; ++u) {
            for (std::size_t y = 0; y < ny; ++y) {
                ExtReal v = upp_add(l(x, u), m(u, y));
                if (v < fv(x, y)) {
                    fv(x, y) = v;
                }
            }
        }
    }
    const Kernel direct = kernel_conjugate(Kernel(l.rows(), m.cols(), std::move(fv)), c, d);

    std::vector<ValueTable> lc;
    std::vector<ValueTable> md;
    for (std::size_t u = 0; u < nu; ++u) {
        lc.push_back(conjugate(l.column(u), c));
        md.push_back(conjugate(m.row(u), d));
    }
    bool all_ok = true;
    std::vector<ExtReal> terms(nu);
    for (std::size_t a = 0; a < direct.rows()->size(); ++a) {
        for (std::size_t b = 0; b < direct.cols()->size(); ++b) {
            for (std::size_t u = 0; u < nu; ++u) {
                terms[u] = low_add(lc[u][a], md[u][b]);
            }
            const Extremum best = sup(terms);
            rep.margins.push_back(margin(direct(a, b), best.value));
            if (!approx_eq(direct(a, b), best.value, tol)) {
                all_ok = false;
                rep.violations.push_back({{a, b, best.index}, direct(a, b), best.value});
            }
        }
    }
    rep.conclusion_holds = all_ok;
    return rep;
}

}  // namespace conjugax
