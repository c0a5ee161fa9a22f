#pragma once

#include <cstddef>
#include <utility>

#include "conjugax/conjugacy.hpp"
#include "conjugax/coupling.hpp"
#include "conjugax/report.hpp"

namespace conjugax {

/// The data of the three-coupling duality inequality: couplings
/// c : X x X# and d : Y x Y#, a kernel K on X x Y, and functions f on X, g on Y.
struct DualityInstance {
    Coupling c;
    Coupling d;
    Kernel kernel;
    ValueTable f;
    ValueTable g;

    /// Throws std::invalid_argument("domain mismatch ...") on incompatible sets.
    void validate() const;
};

/// E(x) = inf_y K(x, y) (upper+) g(y).
[[nodiscard]] ValueTable lhs_envelope(const DualityInstance& inst);

/// R(x#) = inf_{y#} K^{c+d}(x#, y#) (upper+) g^{-d}(y#).
[[nodiscard]] ValueTable rhs_envelope(const DualityInstance& inst);

/// Hypothesis f >= lhs_envelope pointwise; conclusion f^c <= rhs_envelope.
/// Finite pairs compare within `tol` (pass 0 for exact comparison).
[[nodiscard]] CheckReport check_theorem_main(const DualityInstance& inst,
                                             double tol = kDefaultTolerance);

/// The payload (c(x,x#) (lower+) -K(x,y) (lower+) d(y,y#)) (upper+) g^{-d}(y#)
/// reduced as sup over (x,y) of inf over y#, and as inf over y# of sup over (x,y).
struct MinimaxPair {
    ExtReal sup_inf;
    ExtReal inf_sup;
};
[[nodiscard]] MinimaxPair supinf_infsup(const DualityInstance& inst, std::size_t dual_index);

/// Equality case for finite couplings and kernel.  g is replaced by its
/// (-d)-biconjugate; the minimax premise is certified by enumeration at each
/// x#, and equality f^c = R is asserted where it holds, provided f equals the
/// envelope built from the substituted g.
/// Throws std::invalid_argument when c, d or K take an infinite value.
[[nodiscard]] CheckReport check_equality_real_valued(const DualityInstance& inst,
                                                     double tol = kDefaultTolerance);

/// Equality case for extended couplings: at each x#, compares
/// sup_y (-K_{x#}(y)) (lower+) (-g(y)) with inf_{y#} K_{x#}^d(y#) (upper+) g^{-d}(y#)
/// using the marginal kernel, and asserts f^c(x#) = R(x#) where they agree.
[[nodiscard]] CheckReport check_equality_extended(const DualityInstance& inst,
                                                  double tol = kDefaultTolerance);

/// sup_y (-g3(y)) (lower+) (-g(y)) <= inf_{y#} g3^d(y#) (upper+) g^{-d}(y#).
[[nodiscard]] CheckReport fenchel_inequality_general(const ValueTable& g3, const ValueTable& g,
                                                     const Coupling& d,
                                                     double tol = 0.0);

/// F(x,y) = inf_u L(x,u) (upper+) M(u,y) against
/// F^{c+d}(x#,y#) = sup_u L^c(x#,u) (lower+) M^d(u,y#) with partial conjugates.
[[nodiscard]] CheckReport check_factorization(const Kernel& l, const Kernel& m,
                                              const Coupling& c, const Coupling& d,
                                              double tol = kDefaultTolerance);

}  // namespace conjugax
