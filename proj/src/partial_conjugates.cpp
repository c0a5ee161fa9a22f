#include "conjugax/partial_conjugates.hpp"

#include <stdexcept>
#include <string>

#include "conjugax/duality.hpp"

namespace conjugax {

namespace {

void require_same(const SetRef& a, const SetRef& b, const char* what) {
    if (!same_set(a, b)) {
        throw std::invalid_argument(std::string("domain mismatch: ") + what + " ('" +
                                    (a ? a->id() : "?") + "' vs '" + (b ? b->id() : "?") + "')");
    }
}

struct Outcome {
    bool hypothesis = true;
    bool conclusion = true;
    ValueTable fc;
    ValueTable bound;
};

Outcome evaluate(const ValueTable& f, const ValueTable& g, const ExchangeFunction& e,
                 const Coupling& c, const Coupling& d, double tol) {
    const Kernel h = partial_conj_dual(e, d);
    DualityInstance inst{c, d, h, f, g};
    const ValueTable env = lhs_envelope(inst);
    Outcome out{true, true, conjugate(f, c), exchange_bound(g, e, c, d)};
    out.hypothesis = pointwise_leq(env, f);
    for (std::size_t a = 0; a < out.fc.size(); ++a) {
        if (!approx_le(out.fc[a], out.bound[a], tol)) {
            out.conclusion = false;
        }
    }
    return out;
}

}  // namespace

Kernel partial_conj_dual(const ExchangeFunction& e, const Coupling& d) {
    require_same(e.cols(), d.dual(), "exchange function and d");
    const std::size_t nx = e.rows()->size();
    const std::size_t ny = d.primal()->size();
    const std::size_t ms = e.cols()->size();
    ExtMatrix out(nx, ny, ExtReal::neg_inf());
    for (std::size_t x = 0; x < nx; ++x) {
        for (std::size_t y = 0; y < ny; ++y) {
            for (std::size_t b = 0; b < ms; ++b) {
                ExtReal v = low_add(d(y, b), e(x, b));
                if (v > out(x, y)) {
                    out(x, y) = v;
                }
            }
        }
    }
    return Kernel(e.rows(), d.primal(), std::move(out));
}

Kernel partial_conj_primal(const ExchangeFunction& e, const Coupling& c) {
    require_same(e.rows(), c.primal(), "exchange function and c");
    const std::size_t nx = e.rows()->size();
    const std::size_t mx = c.dual()->size();
    const std::size_t ms = e.cols()->size();
    ExtMatrix out(mx, ms, ExtReal::neg_inf());
    for (std::size_t a = 0; a < mx; ++a) {
        for (std::size_t b = 0; b < ms; ++b) {
            for (std::size_t x = 0; x < nx; ++x) {
                ExtReal v = low_add(c(x, a), neg(e(x, b)));
                if (v > out(a, b)) {
                    out(a, b) = v;
                }
            }
        }
    }
    return Kernel(c.dual(), e.cols(), std::move(out));
}

ExchangeFunction negated(const ExchangeFunction& e) {
    ExtMatrix m = e.values();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            m(i, j) = neg(m(i, j));
        }
    }
    return ExchangeFunction(e.rows(), e.cols(), std::move(m));
}

CheckReport check_lemma_partial(const Kernel& k, const ExchangeFunction& e, const Coupling& c,
                                const Coupling& d, double tol) {
    require_same(k.rows(), e.rows(), "kernel and exchange function");
    CheckReport rep;
    rep.check = "lemma-partial";
    const Kernel h = partial_conj_dual(e, d);
    require_same(k.cols(), h.cols(), "kernel and d");
    for (std::size_t x = 0; x < k.rows()->size(); ++x) {
        for (std::size_t y = 0; y < k.cols()->size(); ++y) {
            if (k(x, y) < h(x, y)) {
                rep.hypothesis_holds = false;
                rep.unmet.push_back({x, y});
            }
        }
    }
    if (!rep.hypothesis_holds) {
        rep.notes.emplace_back("hypothesis K >= partial conjugate fails; conclusion not evaluated");
        return rep;
    }
    const Kernel kc = kernel_conjugate(k, c, d);
    const Kernel p = partial_conj_primal(e, c);
    bool all_ok = true;
    for (std::size_t a = 0; a < kc.rows()->size(); ++a) {
        for (std::size_t b = 0; b < kc.cols()->size(); ++b) {
            rep.margins.push_back(margin(kc(a, b), p(a, b)));
            if (!approx_le(kc(a, b), p(a, b), tol)) {
                all_ok = false;
                rep.violations.push_back({{a, b}, kc(a, b), p(a, b)});
            }
        }
    }
    rep.conclusion_holds = all_ok;
    return rep;
}

ValueTable exchange_bound(const ValueTable& g, const ExchangeFunction& e, const Coupling& c,
                          const Coupling& d) {
    require_same(g.set(), d.primal(), "g and d");
    const Kernel p = partial_conj_primal(e, c);
    const ValueTable gd = conjugate(g, Coupling::opposite(d));
    std::vector<ExtReal> out(p.rows()->size(), ExtReal::pos_inf());
    for (std::size_t a = 0; a < out.size(); ++a) {
        for (std::size_t b = 0; b < gd.size(); ++b) {
            ExtReal v = upp_add(p(a, b), gd[b]);
            if (v < out[a]) {
                out[a] = v;
            }
        }
    }
    return ValueTable(c.dual(), std::move(out));
}

CheckReport check_exchange_implication(const ValueTable& f, const ValueTable& g,
                                       const ExchangeFunction& e, const Coupling& c,
                                       const Coupling& d, double tol) {
    CheckReport rep;
    rep.check = "exchange-implication";
    const Outcome main = evaluate(f, g, e, c, d, tol);
    const Outcome swapped = evaluate(f, g, negated(e), c, d, tol);
    rep.notes.push_back(std::string("swapped-sign variant: hypothesis ") +
                        (swapped.hypothesis ? "holds" : "fails") +
                        (swapped.hypothesis ? std::string(", conclusion ") +
                                                  (swapped.conclusion ? "holds" : "fails")
                                            : std::string()));
    if (!main.hypothesis) {
        rep.hypothesis_holds = false;
        rep.notes.emplace_back("hypothesis fails; conclusion not evaluated");
        return rep;
    }
    bool all_ok = true;
    for (std::size_t a = 0; a < main.fc.size(); ++a) {
        rep.margins.push_back(margin(main.fc[a], main.bound[a]));
        if (!approx_le(main.fc[a], main.bound[a], tol)) {
            all_ok = false;
            rep.violations.push_back({{a}, main.fc[a], main.bound[a]});
        }
    }
    rep.conclusion_holds = all_ok;
    return rep;
}

}  // namespace conjugax
