#pragma once

#include "resinv/jost.hpp"
#include "resinv/potential.hpp"
#include "resinv/zero_search.hpp"

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

namespace resinv {

struct ResonanceZero {
    std::complex<double> z;
    int multiplicity = 1;
};

/// Zeros of a Jost function inside the closed disk of radius R: eigenvalue
/// roots in the upper half-plane, resonances in the closed lower half-plane.
/// A zero at the origin is carried by n_origin, never listed.
struct ResonanceSet {
    double R = 0.0;
    int n_origin = 0;
    std::vector<ResonanceZero> zeros; ///< sorted by (Re, Im)

    /// N(R) = n_origin + sum of multiplicities.
    int total() const;
    void validate() const;
};

/// Bijective pairing between two equinumerous sets; epsilon is the achieved
/// bottleneck max of |1/z2 - 1/z1| over the pairs.
struct PairingResult {
    std::vector<std::pair<std::complex<double>, std::complex<double>>> pairs;
    double epsilon = 0.0;
};

/// Maximum-cardinality bottleneck pairing for sets of unequal size; zeros that
/// found no partner are listed per side (multiplicity-expanded).
struct PartialPairing {
    std::vector<std::pair<std::complex<double>, std::complex<double>>> pairs;
    double epsilon = 0.0;
    std::vector<std::complex<double>> only1, only2;
};

struct ResonanceSearchConfig {
    JostEvaluationConfig jost;
    ZeroSearchOptions search;
    double origin_radius = 1e-3; ///< circle for reading the origin multiplicity

    void validate() const;
};

/// Winding number of psi_q over |z - center| = radius.  Throws
/// ZeroOnContourError when a zero sits within ~1e-6 of the circle.
int count_zeros(const Potential& q, std::complex<double> center, double radius,
                const JostEvaluationConfig& cfg = {});
int count_zeros(const JostEvaluator& ev, std::complex<double> center, double radius,
                const WindingOptions& opt = {});

/// Locate every zero of psi_q in the closed disk |z| <= R (radius jittered by
/// up to 0.5% when zeros sit on the contour; the radius actually used is
/// returned in the set).  tol is the |psi| threshold for the origin test and
/// root acceptance.
ResonanceSet find_resonances(const Potential& q, double R, double tol = 1e-9,
                             const ResonanceSearchConfig& cfg = {});
ResonanceSet find_resonances(const JostEvaluator& ev, double R, double tol = 1e-9,
                             const ResonanceSearchConfig& cfg = {});

/// Optimal bottleneck pairing.  Requires equal totals and equal origin
/// multiplicities; anything else throws std::invalid_argument.
PairingResult pair_resonances(const ResonanceSet& s1, const ResonanceSet& s2);

/// Pairing that tolerates unequal counts (used by the reconstruction pipeline
/// when one set is larger); matches as many zeros as possible, minimizing the
/// bottleneck cost among maximum matchings.
PartialPairing pair_resonances_partial(const ResonanceSet& s1, const ResonanceSet& s2);

/// Replace each zero z by z' with |1/z' - 1/z| < eps, uniformly over the
/// admissible disk in 1/z coordinates, deterministically under seed.  Mirror
/// symmetry of symmetric inputs is preserved; purely imaginary zeros move
/// along their axis.  Requires 2*eps*|z| < 1 for every zero, and flags zeros
/// whose half-plane membership cannot be preserved.
ResonanceSet perturb_resonances(const ResonanceSet& s, double eps, std::uint64_t seed);

} // namespace resinv
