#pragma once

// Seeded random instance generators and the named property suites built on them.
//
// Unless stated otherwise, finite draws are multiples of 1/2 in [-8, 8], so
// every sum and maximum in a check is exact in double precision.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "conjugax/conjugacy.hpp"
#include "conjugax/coupling.hpp"
#include "conjugax/duality.hpp"
#include "conjugax/inf_convolution.hpp"
#include "conjugax/partial_conjugates.hpp"
#include "conjugax/report.hpp"

namespace conjugax {

using Rng = std::mt19937_64;

/// The sample lattice of the algebra suite.
[[nodiscard]] const std::vector<ExtReal>& moreau_lattice();

/// +inf and -inf each with probability `p_inf`, otherwise a half-integer in [-8, 8].
[[nodiscard]] ExtReal draw_dyadic(Rng& rng, double p_inf);
[[nodiscard]] SetRef draw_abstract_set(Rng& rng, std::string id, std::size_t max_size);
[[nodiscard]] ExtMatrix draw_matrix(Rng& rng, std::size_t rows, std::size_t cols, double p_inf);
[[nodiscard]] ValueTable draw_table(Rng& rng, const SetRef& set, double p_inf);

/// Sets of size <= max_size, table couplings and kernel, f := lhs_envelope.
[[nodiscard]] DualityInstance random_theorem_instance(Rng& rng, std::size_t max_size = 6,
                                                      double p_inf = 0.1);

/// Finite real data in [-4, 4] with |Y#| = 1; f is the envelope of the
/// (-d)-biconjugate of g, as the strong-duality check expects.
[[nodiscard]] DualityInstance random_strong_duality_instance(Rng& rng, std::size_t max_size = 5);

struct InfconvInstance {
    ValueTable g1;
    ValueTable g2;
    Convoluter gamma;
    Coupling c;
    Coupling d1;
    Coupling d2;
    /// infconv(g1, gamma, g2) raised by a nonnegative (possibly +inf) amount.
    ValueTable f;
};
[[nodiscard]] InfconvInstance random_infconv_instance(Rng& rng, std::size_t max_size = 4,
                                                      double p_inf = 0.1);

struct PartialInstance {
    ExchangeFunction e;
    Coupling c;
    Coupling d;
    ValueTable g;
};
[[nodiscard]] PartialInstance random_partial_instance(Rng& rng, std::size_t max_size = 4,
                                                      double p_inf = 0.1);

struct FastPathInstance {
    ValueTable f;
    Coupling c;
};
/// Strictly increasing 1-D grids of 1..max_points points with real
/// coordinates, f real with +inf entries; no -inf.
[[nodiscard]] FastPathInstance random_fast_path_instance(Rng& rng, std::size_t max_points = 2048);

/// Every law of the Moreau algebra over tuples of the lattice, plus
/// the distributivity laws on `random_pairs` seeded random array pairs.
[[nodiscard]] CheckReport moreau_law_suite(std::uint64_t seed, std::size_t random_pairs = 200);

/// Names accepted by run_suite.
[[nodiscard]] const std::vector<std::string>& suite_names();

/// Runs a named suite.  The report's first note echoes the seed, and
/// violation indices start with the instance number.  `tol` applies to
/// suites with real-valued data; suites on half-integer data compare exactly.
/// Throws std::invalid_argument on an unknown name.
[[nodiscard]] CheckReport run_suite(const std::string& name, std::uint64_t seed,
                                    double tol = kDefaultTolerance);

}  // namespace conjugax
