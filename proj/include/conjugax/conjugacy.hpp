#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "conjugax/coupling.hpp"
#include "conjugax/ext_real.hpp"
#include "conjugax/report.hpp"
#include "conjugax/sets.hpp"

namespace conjugax {

/// A univariate function stored densely over a finite set.
class ValueTable {
public:
    ValueTable(SetRef set, std::vector<ExtReal> values);
    static ValueTable constant(SetRef set, ExtReal value);

    [[nodiscard]] const SetRef& set() const noexcept { return set_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] const std::vector<ExtReal>& values() const noexcept { return values_; }
    ExtReal operator[](std::size_t i) const noexcept { return values_[i]; }

    /// Same set and identical entries.
    friend bool operator==(const ValueTable& a, const ValueTable& b);

private:
    SetRef set_;
    std::vector<ExtReal> values_;
};

/// A bivariate function stored densely over rows x cols.
class Kernel {
public:
    Kernel(SetRef rows, SetRef cols, ExtMatrix values);
    static Kernel constant(SetRef rows, SetRef cols, ExtReal value);

    [[nodiscard]] const SetRef& rows() const noexcept { return rows_; }
    [[nodiscard]] const SetRef& cols() const noexcept { return cols_; }
    [[nodiscard]] const ExtMatrix& values() const noexcept { return values_; }
    ExtReal operator()(std::size_t i, std::size_t j) const noexcept { return values_(i, j); }

    /// x -> K(x, j) over rows.
    [[nodiscard]] ValueTable column(std::size_t j) const;
    /// y -> K(i, y) over cols.
    [[nodiscard]] ValueTable row(std::size_t i) const;
    /// K viewed as a function on rows x cols (row-major product indexing).
    [[nodiscard]] ValueTable as_table() const;
    [[nodiscard]] bool is_finite_valued() const noexcept;

    friend bool operator==(const Kernel& a, const Kernel& b);

private:
    SetRef rows_;
    SetRef cols_;
    ExtMatrix values_;
};

/// f^c(x#) = sup_x c(x, x#) (lower+) (-f(x)).
[[nodiscard]] ValueTable conjugate(const ValueTable& f, const Coupling& c);

/// (f^c)^{c'} with c' the transposed coupling; never exceeds f.
[[nodiscard]] ValueTable biconjugate(const ValueTable& f, const Coupling& c);

/// K^{c+d}(x#, y#) = sup_{x,y} c(x, x#) (lower+) d(y, y#) (lower+) (-K(x, y)).
[[nodiscard]] Kernel kernel_conjugate(const Kernel& k, const Coupling& c, const Coupling& d);

/// y -> inf_x (-c(x, x#)) (upper+) K(x, y), the negated column conjugate.
[[nodiscard]] ValueTable marginal_kernel(const Kernel& k, const Coupling& c, std::size_t dual_index);

[[nodiscard]] ValueTable pointwise_inf(std::span<const ValueTable> family);
[[nodiscard]] ValueTable pointwise_sup(std::span<const ValueTable> family);

/// Conjugate of the pointwise infimum, cross-checked against the pointwise
/// supremum of the member conjugates (std::logic_error on disagreement).
[[nodiscard]] ValueTable conjugate_of_inf_family(std::span<const ValueTable> family,
                                                 const Coupling& c);

/// Compares the three routes to K^{c+d}: conjugating x -> -(K(x,.)^d) with c,
/// the direct sum-coupling conjugate, and conjugating y -> -(K(.,y)^c) with d.
[[nodiscard]] CheckReport composed_conjugate_check(const Kernel& k, const Coupling& c,
                                                   const Coupling& d,
                                                   double tol = kDefaultTolerance);

/// Linear-time discrete Legendre transform for a bilinear coupling between
/// strictly increasing 1-D grids.  Same result as conjugate(f, c) for f with
/// no -inf entry; computed from the lower convex hull of the finite samples.
[[nodiscard]] ValueTable conjugate_bilinear_fast(const ValueTable& f, const Coupling& c);

/// Pointwise f <= g (exact), on equal sets.
[[nodiscard]] bool pointwise_leq(const ValueTable& f, const ValueTable& g);

}  // namespace conjugax
