#pragma once

#include <cstddef>
#include <vector>

#include "conjugax/conjugacy.hpp"
#include "conjugax/coupling.hpp"
#include "conjugax/report.hpp"

namespace conjugax {

/// Default cap on the number of entries of a dense convoluter.
inline constexpr std::size_t kDefaultConvoluterBudget = 1'000'000;

/// A trivariate function gamma : Y1 x X x Y2 -> [-inf, +inf], stored densely
/// with index ((y1 * |X|) + x) * |Y2| + y2.
class Convoluter {
public:
    Convoluter(SetRef y1, SetRef x, SetRef y2, std::vector<ExtReal> values,
               std::size_t budget = kDefaultConvoluterBudget);
    static Convoluter constant(SetRef y1, SetRef x, SetRef y2, ExtReal value);

    /// gamma(y1, x, y2) = 0 when y1 + y2 = x coordinatewise, +inf otherwise.
    /// With `require_closure`, every sum y1 + y2 must land exactly on a point
    /// of X (std::invalid_argument otherwise).
    static Convoluter classical_delta(SetRef y1, SetRef x, SetRef y2, bool require_closure = true);

    [[nodiscard]] const SetRef& y1() const noexcept { return y1_; }
    [[nodiscard]] const SetRef& x() const noexcept { return x_; }
    [[nodiscard]] const SetRef& y2() const noexcept { return y2_; }
    [[nodiscard]] const std::vector<ExtReal>& values() const noexcept { return values_; }

    ExtReal operator()(std::size_t a, std::size_t x, std::size_t b) const noexcept {
        return values_[(a * nx_ + x) * n2_ + b];
    }

    /// x -> gamma(a, x, b) as a function on X.
    [[nodiscard]] ValueTable slice(std::size_t a, std::size_t b) const;

    friend bool operator==(const Convoluter& l, const Convoluter& r);

private:
    SetRef y1_;
    SetRef x_;
    SetRef y2_;
    std::size_t nx_ = 0;
    std::size_t n2_ = 0;
    std::vector<ExtReal> values_;
};

/// (g1 box g2)(y1, y2) = g1(y1) (upper+) g2(y2), on the product Y1 x Y2.
[[nodiscard]] ValueTable upper_tensor_sum(const ValueTable& g1, const ValueTable& g2);

/// x -> inf_{y1,y2} g1(y1) (upper+) gamma(y1, x, y2) (upper+) g2(y2).
[[nodiscard]] ValueTable infconv(const ValueTable& g1, const Convoluter& gamma,
                                 const ValueTable& g2);

/// gamma as a coupling between X and Y1 x Y2.
[[nodiscard]] Coupling lift_coupling(const Convoluter& gamma);
/// gamma as a kernel on X x (Y1 x Y2).
[[nodiscard]] Kernel lift_kernel(const Convoluter& gamma);
/// Inverse of lift_kernel; the kernel columns must be the product y1 x y2.
[[nodiscard]] Convoluter unlift(const Kernel& k, SetRef y1, SetRef y2);

/// gamma#(y1#, x#, y2#) = sup over (y1, x, y2) of
/// c(x, x#) (lower+) d1(y1, y1#) (lower+) d2(y2, y2#) (lower+) (-gamma(y1, x, y2)).
[[nodiscard]] Convoluter dual_convoluter(const Convoluter& gamma, const Coupling& c,
                                         const Coupling& d1, const Coupling& d2);

/// Same quantity through kernel_conjugate of lift_kernel(gamma) with the
/// couplings c and d1 (+) d2, reindexed.
[[nodiscard]] Convoluter dual_convoluter_via_kernel(const Convoluter& gamma, const Coupling& c,
                                                    const Coupling& d1, const Coupling& d2);

/// Hypothesis f >= infconv(g1, gamma, g2); conclusion
/// f^c <= infconv(g1^{-d1}, gamma#, g2^{-d2}) pointwise on X#.
[[nodiscard]] CheckReport check_infconv_duality(const ValueTable& f, const ValueTable& g1,
                                                const ValueTable& g2, const Convoluter& gamma,
                                                const Coupling& c, const Coupling& d1,
                                                const Coupling& d2,
                                                double tol = kDefaultTolerance);

/// -((g1 box g2)^{-gamma-bar}) with gamma-bar = lift_coupling(gamma).  Throws
/// std::logic_error if it differs from infconv(g1, gamma, g2) in any entry.
[[nodiscard]] ValueTable infconv_as_conjugate(const ValueTable& g1, const Convoluter& gamma,
                                              const ValueTable& g2);

/// Verifies the split hypothesis  gamma(y1, ., y2)^c(x#) = G1(x#, y1) (lower+) G2(x#, y2)
/// for G1 : X# x Y1 and G2 : X# x Y2; where it holds, asserts
/// (infconv(g1, gamma, g2))^c = g1^{G1'} (lower+) g2^{G2'} with G' the transposes.
[[nodiscard]] CheckReport split_conjugate(const ValueTable& g1, const ValueTable& g2,
                                          const Convoluter& gamma, const Coupling& c,
                                          const Coupling& split1, const Coupling& split2,
                                          double tol = kDefaultTolerance);

/// (g1 box g2)^{-(d1 (+) d2)}(y1#, y2#) <= g1^{-d1}(y1#) (upper+) g2^{-d2}(y2#), exact.
/// Notes record how many dual pairs are strict.
[[nodiscard]] CheckReport psi_additive_bound(const ValueTable& g1, const ValueTable& g2,
                                             const Coupling& d1, const Coupling& d2,
                                             double tol = 0.0);

/// Dual convoluter of the classical delta convoluter on 1-D grids, with c
/// bilinear and d_i(y, y#) = -y * y#.  Asserts gamma# = 0 wherever
/// y1# = x# = y2#, and records the finite values elsewhere as margins.
[[nodiscard]] CheckReport check_classical_dual_convoluter(SetRef y1, SetRef x, SetRef y2,
                                                          SetRef y1s, SetRef xs, SetRef y2s);

}  // namespace conjugax
