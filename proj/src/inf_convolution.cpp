#include "conjugax/inf_convolution.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "conjugax/parallel.hpp"

namespace conjugax {

namespace {

void require_same(const SetRef& a, const SetRef& b, const char* what) {
    if (!same_set(a, b)) {
        throw std::invalid_argument(std::string("domain mismatch: ") + what + " ('" +
                                    (a ? a->id() : "?") + "' vs '" + (b ? b->id() : "?") + "')");
    }
}

std::size_t checked_volume(const SetRef& a, const SetRef& b, const SetRef& c, std::size_t budget) {
    if (!a || !b || !c) {
        throw std::invalid_argument("convoluter needs three sets");
    }
    const std::size_t n = a->size() * b->size() * c->size();
    if (n > budget) {
        throw std::length_error("convoluter too large");
    }
    return n;
}

}  // namespace

Convoluter::Convoluter(SetRef y1, SetRef x, SetRef y2, std::vector<ExtReal> values,
                       std::size_t budget)
    : y1_(std::move(y1)), x_(std::move(x)), y2_(std::move(y2)), values_(std::move(values)) {
    const std::size_t n = checked_volume(y1_, x_, y2_, budget);
    if (values_.size() != n) {
        throw std::invalid_argument("convoluter over '" + y1_->id() + "' x '" + x_->id() +
                                    "' x '" + y2_->id() + "' has " +
                                    std::to_string(values_.size()) + " entries, expected " +
                                    std::to_string(n));
    }
    nx_ = x_->size();
    n2_ = y2_->size();
}

Convoluter Convoluter::constant(SetRef y1, SetRef x, SetRef y2, ExtReal value) {
    const std::size_t n = checked_volume(y1, x, y2, kDefaultConvoluterBudget);
    return Convoluter(std::move(y1), std::move(x), std::move(y2), std::vector<ExtReal>(n, value));
}

Convoluter Convoluter::classical_delta(SetRef y1, SetRef x, SetRef y2, bool require_closure) {
    const std::size_t n = checked_volume(y1, x, y2, kDefaultConvoluterBudget);
    if (!y1->has_coordinates() || y1->dim() != x->dim() || y2->dim() != x->dim()) {
        throw std::invalid_argument("classical convoluter needs coordinates of one dimension");
    }
    const std::size_t dim = x->dim();
    std::vector<ExtReal> values(n, ExtReal::pos_inf());
    std::vector<double> s(dim);
    for (std::size_t a = 0; a < y1->size(); ++a) {
        for (std::size_t b = 0; b < y2->size(); ++b) {
            for (std::size_t k = 0; k < dim; ++k) {
                s[k] = y1->point(a)[k] + y2->point(b)[k];
            }
            bool landed = false;
            for (std::size_t i = 0; i < x->size(); ++i) {
                auto p = x->point(i);
                if (std::equal(s.begin(), s.end(), p.begin())) {
                    values[(a * x->size() + i) * y2->size() + b] = 0.0;
                    landed = true;
                }
            }
            if (!landed && require_closure) {
                throw std::invalid_argument("classical convoluter: sum of points " +
                                            std::to_string(a) + " and " + std::to_string(b) +
                                            " is not on the grid '" + x->id() + "'");
            }
        }
    }
    return Convoluter(std::move(y1), std::move(x), std::move(y2), std::move(values));
}

ValueTable Convoluter::slice(std::size_t a, std::size_t b) const {
    std::vector<ExtReal> v(nx_);
    for (std::size_t i = 0; i < nx_; ++i) {
        v[i] = (*this)(a, i, b);
    }
    return ValueTable(x_, std::move(v));
}

bool operator==(const Convoluter& l, const Convoluter& r) {
    return same_set(l.y1_, r.y1_) && same_set(l.x_, r.x_) && same_set(l.y2_, r.y2_) &&
           l.values_ == r.values_;
}

ValueTable upper_tensor_sum(const ValueTable& g1, const ValueTable& g2) {
    std::vector<ExtReal> v;
    v.reserve(g1.size() * g2.size());
    for (std::size_t a = 0; a < g1.size(); ++a) {
        for (std::size_t b = 0; b < g2.size(); ++b) {
            v.push_back(upp_add(g1[a], g2[b]));
        }
    }
    return ValueTable(make_product({g1.set(), g2.set()}), std::move(v));
}

ValueTable infconv(const ValueTable& g1, const Convoluter& gamma, const ValueTable& g2) {
    require_same(g1.set(), gamma.y1(), "g1 and convoluter");
    require_same(g2.set(), gamma.y2(), "g2 and convoluter");
    const std::size_t nx = gamma.x()->size();
    std::vector<ExtReal> out(nx, ExtReal::pos_inf());
    parallel_for(nx, g1.size() * g2.size(), [&](std::size_t x) {
        ExtReal best = ExtReal::pos_inf();
        for (std::size_t a = 0; a < g1.size(); ++a) {
            for (std::size_t b = 0; b < g2.size(); ++b) {
                // grouped as gamma (upper+) (g1 (upper+) g2), matching the conjugate route
                ExtReal v = upp_add(gamma(a, x, b), upp_add(g1[a], g2[b]));
                if (v < best) {
                    best = v;
                }
            }
        }
        out[x] = best;
    });
    return ValueTable(gamma.x(), std::move(out));
}

Kernel lift_kernel(const Convoluter& gamma) {
    const std::size_t n1 = gamma.y1()->size();
    const std::size_t nx = gamma.x()->size();
    const std::size_t n2 = gamma.y2()->size();
    ExtMatrix m(nx, n1 * n2);
    for (std::size_t a = 0; a < n1; ++a) {
        for (std::size_t x = 0; x < nx; ++x) {
            for (std::size_t b = 0; b < n2; ++b) {
                m(x, a * n2 + b) = gamma(a, x, b);
            }
        }
    }
    return Kernel(gamma.x(), make_product({gamma.y1(), gamma.y2()}), std::move(m));
}

Coupling lift_coupling(const Convoluter& gamma) {
    Kernel k = lift_kernel(gamma);
    return Coupling::table(k.rows(), k.cols(), k.values());
}

Convoluter unlift(const Kernel& k, SetRef y1, SetRef y2) {
    require_same(k.cols(), make_product({y1, y2}), "kernel columns and y1 x y2");
    const std::size_t n1 = y1->size();
    const std::size_t nx = k.rows()->size();
    const std::size_t n2 = y2->size();
    std::vector<ExtReal> v(n1 * nx * n2);
    for (std::size_t a = 0; a < n1; ++a) {
        for (std::size_t x = 0; x < nx; ++x) {
            for (std::size_t b = 0; b < n2; ++b) {
                v[(a * nx + x) * n2 + b] = k(x, a * n2 + b);
            }
        }
    }
    return Convoluter(std::move(y1), k.rows(), std::move(y2), std::move(v));
}

Convoluter dual_convoluter(const Convoluter& gamma, const Coupling& c, const Coupling& d1,
                           const Coupling& d2) {
    require_same(gamma.x(), c.primal(), "convoluter and c");
    require_same(gamma.y1(), d1.primal(), "convoluter and d1");
    require_same(gamma.y2(), d2.primal(), "convoluter and d2");
    const std::size_t n1 = gamma.y1()->size();
    const std::size_t nx = gamma.x()->size();
    const std::size_t n2 = gamma.y2()->size();
    const std::size_t mx = c.dual()->size();
    const std::size_t m2 = d2.dual()->size();
    const std::size_t total = checked_volume(d1.dual(), c.dual(), d2.dual(), kDefaultConvoluterBudget);
    std::vector<ExtReal> out(total);
    parallel_for(total, n1 * nx * n2, [&](std::size_t idx) {
        const std::size_t bs = idx % m2;
        const std::size_t xs = (idx / m2) % mx;
        const std::size_t as = idx / (m2 * mx);
        ExtReal best = ExtReal::neg_inf();
        for (std::size_t a = 0; a < n1; ++a) {
            const ExtReal da = d1(a, as);
            for (std::size_t b = 0; b < n2; ++b) {
                const ExtReal dab = low_add(da, d2(b, bs));
                for (std::size_t x = 0; x < nx; ++x) {
                    ExtReal v = low_add(low_add(c(x, xs), dab), neg(gamma(a, x, b)));
                    if (v > best) {
                        best = v;
                    }
                }
            }
        }
        out[idx] = best;
    });
    return Convoluter(d1.dual(), c.dual(), d2.dual(), std::move(out));
}

Convoluter dual_convoluter_via_kernel(const Convoluter& gamma, const Coupling& c,
                                      const Coupling& d1, const Coupling& d2) {
    const Kernel kc = kernel_conjugate(lift_kernel(gamma), c, Coupling::sum(d1, d2));
    return unlift(kc, d1.dual(), d2.dual());
}

CheckReport check_infconv_duality(const ValueTable& f, const ValueTable& g1, const ValueTable& g2,
                                  const Convoluter& gamma, const Coupling& c, const Coupling& d1,
                                  const Coupling& d2, double tol) {
    require_same(f.set(), gamma.x(), "f and convoluter");
    CheckReport rep;
    rep.check = "infconv-duality";
    const ValueTable ic = infconv(g1, gamma, g2);
    for (std::size_t x = 0; x < f.size(); ++x) {
        if (f[x] < ic[x]) {
            rep.hypothesis_holds = false;
            rep.unmet.push_back({x});
        }
    }
    if (!rep.hypothesis_holds) {
        rep.notes.emplace_back("hypothesis f >= inf-convolution fails; conclusion not evaluated");
        return rep;
    }
    const ValueTable fc = conjugate(f, c);
    const Convoluter gs = dual_convoluter(gamma, c, d1, d2);
    const ValueTable bound = infconv(conjugate(g1, Coupling::opposite(d1)), gs,
                                     conjugate(g2, Coupling::opposite(d2)));
    bool all_ok = true;
    for (std::size_t a = 0; a < fc.size(); ++a) {
        rep.margins.push_back(margin(fc[a], bound[a]));
        if (!approx_le(fc[a], bound[a], tol)) {
            all_ok = false;
            rep.violations.push_back({{a}, fc[a], bound[a]});
        }
    }
    rep.conclusion_holds = all_ok;
    return rep;
}

ValueTable infconv_as_conjugate(const ValueTable& g1, const Convoluter& gamma,
                                const ValueTable& g2) {
    const ValueTable direct = infconv(g1, gamma, g2);
    const Coupling minus_bar = Coupling::opposite(Coupling::transpose(lift_coupling(gamma)));
    const ValueTable conj = conjugate(upper_tensor_sum(g1, g2), minus_bar);
    std::vector<ExtReal> v(conj.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = neg(conj[i]);
    }
    ValueTable out(gamma.x(), std::move(v));
    if (!(out == direct)) {
        throw std::logic_error("inf-convolution disagrees with its conjugate representation");
    }
    return out;
}

CheckReport split_conjugate(const ValueTable& g1, const ValueTable& g2, const Convoluter& gamma,
                            const Coupling& c, const Coupling& split1, const Coupling& split2,
                            double tol) {
    require_same(gamma.x(), c.primal(), "convoluter and c");
    require_same(split1.primal(), c.dual(), "first split coupling and c");
    require_same(split2.primal(), c.dual(), "second split coupling and c");
    require_same(split1.dual(), gamma.y1(), "first split coupling and convoluter");
    require_same(split2.dual(), gamma.y2(), "second split coupling and convoluter");
    CheckReport rep;
    rep.check = "split-conjugate";
    const std::size_t n1 = gamma.y1()->size();
    const std::size_t n2 = gamma.y2()->size();
    const std::size_t mx = c.dual()->size();
    for (std::size_t a = 0; a < n1; ++a) {
        for (std::size_t b = 0; b < n2; ++b) {
            const ValueTable sc = conjugate(gamma.slice(a, b), c);
            for (std::size_t xs = 0; xs < mx; ++xs) {
                const ExtReal want = low_add(split1(xs, a), split2(xs, b));
                if (!approx_eq(sc[xs], want, tol)) {
                    if (rep.hypothesis_holds) {
                        rep.notes.push_back("split hypothesis violated at (" + std::to_string(a) +
                                            ", " + std::to_string(xs) + ", " +
                                            std::to_string(b) + ")");
                    }
                    rep.hypothesis_holds = false;
                    rep.unmet.push_back({a, xs, b});
                }
            }
        }
    }
    if (!rep.hypothesis_holds) {
        return rep;
    }
    const ValueTable lhs = conjugate(infconv(g1, gamma, g2), c);
    const ValueTable p1 = conjugate(g1, Coupling::transpose(split1));
    const ValueTable p2 = conjugate(g2, Coupling::transpose(split2));
    bool all_ok = true;
    for (std::size_t xs = 0; xs < mx; ++xs) {
        const ExtReal rhs = low_add(p1[xs], p2[xs]);
        rep.margins.push_back(margin(lhs[xs], rhs));
        if (!approx_eq(lhs[xs], rhs, tol)) {
            all_ok = false;
            rep.violations.push_back({{xs}, lhs[xs], rhs});
        }
    }
    rep.conclusion_holds = all_ok;
    return rep;
}

CheckReport psi_additive_bound(const ValueTable& g1, const ValueTable& g2, const Coupling& d1,
                               const Coupling& d2, double tol) {
    require_same(g1.set(), d1.primal(), "g1 and d1");
    require_same(g2.set(), d2.primal(), "g2 and d2");
    CheckReport rep;
    rep.check = "psi-additive";
    const ValueTable joint =
        conjugate(upper_tensor_sum(g1, g2), Coupling::opposite(Coupling::sum(d1, d2)));
    const ValueTable c1 = conjugate(g1, Coupling::opposite(d1));
    const ValueTable c2 = conjugate(g2, Coupling::opposite(d2));
    const std::size_t m2 = c2.size();
    bool all_ok = true;
    std::size_t strict = 0;
    for (std::size_t a = 0; a < c1.size(); ++a) {
        for (std::size_t b = 0; b < m2; ++b) {
            const ExtReal lhs = joint[a * m2 + b];
            const ExtReal rhs = upp_add(c1[a], c2[b]);
            rep.margins.push_back(margin(lhs, rhs));
            if (!approx_le(lhs, rhs, tol)) {
                all_ok = false;
                rep.violations.push_back({{a, b}, lhs, rhs});
            } else if (lhs < rhs && !approx_eq(lhs, rhs, tol)) {
                ++strict;
            }
        }
    }
    rep.notes.push_back("strict at " + std::to_string(strict) + " dual pair(s)");
    rep.conclusion_holds = all_ok;
    return rep;
}

CheckReport check_classical_dual_convoluter(SetRef y1, SetRef x, SetRef y2, SetRef y1s,
                                            SetRef xs, SetRef y2s) {
    for (const SetRef* s : {&y1, &x, &y2, &y1s, &xs, &y2s}) {
        if (!*s || (*s)->dim() != 1) {
            throw std::invalid_argument("classical dual convoluter needs 1-D grids");
        }
    }
    CheckReport rep;
    rep.check = "classical-dual-convoluter";
    const Convoluter gamma = Convoluter::classical_delta(y1, x, y2, false);
    const Coupling c = Coupling::bilinear(x, xs);
    const Coupling d1 = Coupling::bilinear(y1, y1s, -1);
    const Coupling d2 = Coupling::bilinear(y2, y2s, -1);
    const Convoluter gs = dual_convoluter(gamma, c, d1, d2);
    rep.notes.emplace_back(
        "the printed dual formula repeats the first dual index; checked with y1# = x# = y2#");
    bool all_ok = true;
    bool any = false;
    const auto p1 = y1s->coordinates_1d();
    const auto px = xs->coordinates_1d();
    const auto p2 = y2s->coordinates_1d();
    for (std::size_t a = 0; a < p1.size(); ++a) {
        for (std::size_t i = 0; i < px.size(); ++i) {
            for (std::size_t b = 0; b < p2.size(); ++b) {
                const ExtReal v = gs(a, i, b);
                if (p1[a] == px[i] && p2[b] == px[i]) {
                    any = true;
                    rep.margins.push_back(v);
                    if (v != ExtReal(0.0)) {
                        all_ok = false;
                        rep.violations.push_back({{a, i, b}, v, ExtReal(0.0)});
                    }
                }
            }
        }
    }
    if (any) {
        rep.conclusion_holds = all_ok;
    } else {
        rep.notes.emplace_back("no dual triple with coinciding coordinates");
    }
    return rep;
}

}  // namespace conjugax
