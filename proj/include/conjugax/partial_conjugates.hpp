#pragma once

#include "conjugax/conjugacy.hpp"
#include "conjugax/coupling.hpp"
#include "conjugax/report.hpp"

namespace conjugax {

/// E : X x Y# -> [-inf, +inf], stored as a kernel with rows X and cols Y#.
using ExchangeFunction = Kernel;

/// (x, y) -> sup_{y#} d(y, y#) (lower+) E(x, y#).
[[nodiscard]] Kernel partial_conj_dual(const ExchangeFunction& e, const Coupling& d);

/// (x#, y#) -> sup_x c(x, x#) (lower+) (-E(x, y#)).
[[nodiscard]] Kernel partial_conj_primal(const ExchangeFunction& e, const Coupling& c);

/// Entrywise negation of E.
[[nodiscard]] ExchangeFunction negated(const ExchangeFunction& e);

/// Hypothesis K >= partial_conj_dual(E, d) pointwise; conclusion
/// K^{c+d} <= partial_conj_primal(E, c) at every dual pair.
[[nodiscard]] CheckReport check_lemma_partial(const Kernel& k, const ExchangeFunction& e,
                                              const Coupling& c, const Coupling& d,
                                              double tol = 0.0);

/// x# -> inf_{y#} partial_conj_primal(E, c)(x#, y#) (upper+) g^{-d}(y#).
[[nodiscard]] ValueTable exchange_bound(const ValueTable& g, const ExchangeFunction& e,
                                        const Coupling& c, const Coupling& d);

/// Hypothesis f(x) >= inf_y partial_conj_dual(E, d)(x, y) (upper+) g(y);
/// conclusion f^c <= exchange_bound(g, E, c, d).  The variant with E and -E
/// swapped in both partial conjugates is also evaluated and recorded in the
/// notes, but not asserted.
[[nodiscard]] CheckReport check_exchange_implication(const ValueTable& f, const ValueTable& g,
                                                     const ExchangeFunction& e, const Coupling& c,
                                                     const Coupling& d,
                                                     double tol = kDefaultTolerance);

}  // namespace conjugax
