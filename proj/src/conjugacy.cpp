#include "conjugax/conjugacy.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "conjugax/parallel.hpp"

namespace conjugax {

namespace {

void require_same(const SetRef& a, const SetRef& b) {
    if (!same_set(a, b)) {
        throw std::invalid_argument("domain mismatch: '" + (a ? a->id() : "?") + "' vs '" +
                                    (b ? b->id() : "?") + "'");
    }
}

}  // namespace

ValueTable::ValueTable(SetRef set, std::vector<ExtReal> values)
    : set_(std::move(set)), values_(std::move(values)) {
    if (!set_) {
        throw std::invalid_argument("value table needs a set");
    }
    if (values_.size() != set_->size()) {
        throw std::invalid_argument("value table for '" + set_->id() + "' has " +
                                    std::to_string(values_.size()) + " entries, expected " +
                                    std::to_string(set_->size()));
    }
}

ValueTable ValueTable::constant(SetRef set, ExtReal value) {
    const std::size_t n = set->size();
    return ValueTable(std::move(set), std::vector<ExtReal>(n, value));
}

bool operator==(const ValueTable& a, const ValueTable& b) {
    return same_set(a.set_, b.set_) && a.values_ == b.values_;
}

Kernel::Kernel(SetRef rows, SetRef cols, ExtMatrix values)
    : rows_(std::move(rows)), cols_(std::move(cols)), values_(std::move(values)) {
    if (!rows_ || !cols_) {
        throw std::invalid_argument("kernel needs both sets");
    }
    if (values_.rows() != rows_->size() || values_.cols() != cols_->size()) {
        throw std::invalid_argument("kernel over '" + rows_->id() + "' x '" + cols_->id() +
                                    "' has the wrong shape");
    }
}

Kernel Kernel::constant(SetRef rows, SetRef cols, ExtReal value) {
    ExtMatrix m(rows->size(), cols->size(), value);
    return Kernel(std::move(rows), std::move(cols), std::move(m));
}

ValueTable Kernel::column(std::size_t j) const {
    std::vector<ExtReal> v(rows_->size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = values_(i, j);
    }
    return ValueTable(rows_, std::move(v));
}

ValueTable Kernel::row(std::size_t i) const {
    auto r = values_.row(i);
    return ValueTable(cols_, std::vector<ExtReal>(r.begin(), r.end()));
}

ValueTable Kernel::as_table() const {
    return ValueTable(make_product({rows_, cols_}), values_.data());
}

bool Kernel::is_finite_valued() const noexcept {
    for (auto v : values_.data()) {
        if (!v.is_finite()) {
            return false;
        }
    }
    return true;
}

bool operator==(const Kernel& a, const Kernel& b) {
    return same_set(a.rows_, b.rows_) && same_set(a.cols_, b.cols_) && a.values_ == b.values_;
}

ValueTable conjugate(const ValueTable& f, const Coupling& c) {
    require_same(f.set(), c.primal());
    const std::size_t n = f.size();
    const std::size_t m = c.dual()->size();
    std::vector<ExtReal> neg_f(n);
    for (std::size_t i = 0; i < n; ++i) {
        neg_f[i] = neg(f[i]);
    }
    std::vector<ExtReal> out(m);
    parallel_for(m, n, [&](std::size_t j) {
        ExtReal best = ExtReal::neg_inf();
        for (std::size_t i = 0; i < n; ++i) {
            ExtReal v = low_add(c(i, j), neg_f[i]);
            if (v > best) {
                best = v;
            }
        }
        out[j] = best;
    });
    return ValueTable(c.dual(), std::move(out));
}

ValueTable biconjugate(const ValueTable& f, const Coupling& c) {
    return conjugate(conjugate(f, c), Coupling::transpose(c));
}

Kernel kernel_conjugate(const Kernel& k, const Coupling& c, const Coupling& d) {
    require_same(k.rows(), c.primal());
    require_same(k.cols(), d.primal());
    const std::size_t nx = k.rows()->size();
    const std::size_t ny = k.cols()->size();
    const std::size_t mx = c.dual()->size();
    const std::size_t my = d.dual()->size();
    ExtMatrix out(mx, my);
    parallel_for(mx * my, nx * ny, [&](std::size_t idx) {
        const std::size_t a = idx / my;
        const std::size_t b = idx % my;
        ExtReal best = ExtReal::neg_inf();
        for (std::size_t x = 0; x < nx; ++x) {
            const ExtReal cx = c(x, a);
            for (std::size_t y = 0; y < ny; ++y) {
                ExtReal v = low_add(low_add(cx, d(y, b)), neg(k(x, y)));
                if (v > best) {
                    best = v;
                }
            }
        }
        out(a, b) = best;
    });
    return Kernel(c.dual(), d.dual(), std::move(out));
}

ValueTable marginal_kernel(const Kernel& k, const Coupling& c, std::size_t dual_index) {
    require_same(k.rows(), c.primal());
    if (dual_index >= c.dual()->size()) {
        throw std::out_of_range("index out of range");
    }
    const std::size_t nx = k.rows()->size();
    const std::size_t ny = k.cols()->size();
    std::vector<ExtReal> out(ny);
    for (std::size_t y = 0; y < ny; ++y) {
        ExtReal best = ExtReal::pos_inf();
        for (std::size_t x = 0; x < nx; ++x) {
            ExtReal v = upp_add(neg(c(x, dual_index)), k(x, y));
            if (v < best) {
                best = v;
            }
        }
        out[y] = best;
    }
    return ValueTable(k.cols(), std::move(out));
}

namespace {

template <bool TakeMin>
ValueTable pointwise_extremum(std::span<const ValueTable> family) {
    if (family.empty()) {
        throw std::invalid_argument("empty family");
    }
    std::vector<ExtReal> out = family.front().values();
    for (const auto& g : family.subspan(1)) {
        require_same(family.front().set(), g.set());
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (TakeMin ? g[i] < out[i] : g[i] > out[i]) {
                out[i] = g[i];
            }
        }
    }
    return ValueTable(family.front().set(), std::move(out));
}

}  // namespace

ValueTable pointwise_inf(std::span<const ValueTable> family) {
    return pointwise_extremum<true>(family);
}

ValueTable pointwise_sup(std::span<const ValueTable> family) {
    return pointwise_extremum<false>(family);
}

ValueTable conjugate_of_inf_family(std::span<const ValueTable> family, const Coupling& c) {
    ValueTable direct = conjugate(pointwise_inf(family), c);
    std::vector<ValueTable> members;
    members.reserve(family.size());
    for (const auto& g : family) {
        members.push_back(conjugate(g, c));
    }
    if (!(pointwise_sup(members) == direct)) {
        throw std::logic_error("conjugate of infimum disagrees with supremum of conjugates");
    }
    return direct;
}

CheckReport composed_conjugate_check(const Kernel& k, const Coupling& c, const Coupling& d,
                                     double tol) {
    require_same(k.rows(), c.primal());
    require_same(k.cols(), d.primal());
    CheckReport rep;
    rep.check = "composed-conjugate";
    const std::size_t nx = k.rows()->size();
    const std::size_t ny = k.cols()->size();
    const std::size_t mx = c.dual()->size();
    const std::size_t my = d.dual()->size();

    const Kernel direct = kernel_conjugate(k, c, d);

    // rows_conj(x, y#) = K(x, .)^d (y#);  cols_conj(x#, y) = K(., y)^c (x#).
    ExtMatrix rows_conj(nx, my);
    for (std::size_t x = 0; x < nx; ++x) {
        ValueTable r = conjugate(k.row(x), d);
        for (std::size_t b = 0; b < my; ++b) {
            rows_conj(x, b) = r[b];
        }
    }
    ExtMatrix cols_conj(mx, ny);
    for (std::size_t y = 0; y < ny; ++y) {
        ValueTable col = conjugate(k.column(y), c);
        for (std::size_t a = 0; a < mx; ++a) {
            cols_conj(a, y) = col[a];
        }
    }

    bool all_ok = true;
    for (std::size_t a = 0; a < mx; ++a) {
        for (std::size_t b = 0; b < my; ++b) {
            std::vector<ExtReal> via_rows(nx);
            for (std::size_t x = 0; x < nx; ++x) {
                via_rows[x] = low_add(c(x, a), rows_conj(x, b));
            }
            std::vector<ExtReal> via_cols(ny);
            for (std::size_t y = 0; y < ny; ++y) {
                via_cols[y] = low_add(d(y, b), cols_conj(a, y));
            }
            const ExtReal first = sup(via_rows).value;
            const ExtReal third = sup(via_cols).value;
            const ExtReal mid = direct(a, b);
            rep.margins.push_back(margin(mid, first));
            if (!approx_eq(first, mid, tol)) {
                all_ok = false;
                rep.violations.push_back({{a, b, 0}, first, mid});
            }
            if (!approx_eq(third, mid, tol)) {
                all_ok = false;
                rep.violations.push_back({{a, b, 2}, third, mid});
            }
        }
    }
    rep.conclusion_holds = all_ok;
    return rep;
}

ValueTable conjugate_bilinear_fast(const ValueTable& f, const Coupling& c) {
    require_same(f.set(), c.primal());
    if (c.kind() != Coupling::Kind::Bilinear) {
        throw std::invalid_argument("fast path requires a bilinear coupling");
    }
    const std::vector<double> xs = c.primal()->coordinates_1d();
    const std::vector<double> ss = c.dual()->coordinates_1d();
    auto strictly_increasing = [](const std::vector<double>& v) {
        for (std::size_t i = 1; i < v.size(); ++i) {
            if (!(v[i - 1] < v[i])) {
                return false;
            }
        }
        return true;
    };
    if (!strictly_increasing(xs) || !strictly_increasing(ss)) {
        throw std::invalid_argument("fast path requires strictly increasing grids");
    }
    for (auto v : f.values()) {
        if (v.is_neg_inf()) {
            throw std::invalid_argument("fast path requires proper f");
        }
    }
    const double sign = c.sign();

    // Lower convex hull of the finite samples (monotone chain).
    std::vector<double> hx;
    std::vector<double> hf;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!f[i].is_finite()) {
            continue;
        }
        const double px = xs[i];
        const double pf = f[i].value();
        while (hx.size() >= 2) {
            const std::size_t k = hx.size();
            const double cross =
                (hx[k - 1] - hx[k - 2]) * (pf - hf[k - 2]) - (hf[k - 1] - hf[k - 2]) * (px - hx[k - 2]);
            if (cross > 0) {
                break;
            }
            hx.pop_back();
            hf.pop_back();
        }
        hx.push_back(px);
        hf.push_back(pf);
    }

    const std::size_t m = ss.size();
    std::vector<ExtReal> out(m, ExtReal::neg_inf());
    if (hx.empty()) {
        return ValueTable(c.dual(), std::move(out));
    }
    const std::size_t h = hx.size();
    // Same arithmetic as the bilinear coupling: sign * (x * s), then minus f.
    auto value_at = [&](std::size_t k, double s) { return sign * (hx[k] * s) - hf[k]; };

    // Effective slopes sign * s increase along the dual grid when sign > 0,
    // and decrease when sign < 0; walk the dual grid in increasing-slope order.
    std::size_t k = 0;
    for (std::size_t step = 0; step < m; ++step) {
        const std::size_t j = sign > 0 ? step : m - 1 - step;
        const double s = ss[j];
        while (k + 1 < h && value_at(k + 1, s) > value_at(k, s)) {
            ++k;
        }
        double best = value_at(k, s);
        if (k > 0) {
            best = std::max(best, value_at(k - 1, s));
        }
        if (k + 1 < h) {
            best = std::max(best, value_at(k + 1, s));
        }
        out[j] = ExtReal(best);
    }
    return ValueTable(c.dual(), std::move(out));
}

bool pointwise_leq(const ValueTable& f, const ValueTable& g) {
    require_same(f.set(), g.set());
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!(f[i] <= g[i])) {
            return false;
        }
    }
    return true;
}

}  // namespace conjugax
