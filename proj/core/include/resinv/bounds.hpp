#pragma once

#include "resinv/potential.hpp"

#include <string>
#include <utility>
#include <vector>

namespace resinv {

/// Named, insertion-ordered table of evaluated constants.  `in_force` records
/// whether the supplied radius clears every threshold the estimate requires;
/// below threshold the values are still produced, just not guaranteed.
struct BoundBreakdown {
    std::vector<std::pair<std::string, double>> entries;
    bool in_force = false;
    std::string note; // threshold provenance (configured vs defaulted R1/R2)

    bool has(const std::string& name) const;
    double at(const std::string& name) const; // throws std::out_of_range
    void set(const std::string& name, double value);
    double total() const { return at("total"); }
};

/// Envelope of the principal-value integral of e^{-ixu}/x over rho < |x| < A:
/// 2*pi*min(1, (3/pi)/(rho|u|)) for finite A, pi*min(1, (4/pi)/(rho|u|)) in
/// the A -> infinity limit.  u = 0 returns the clamp value (2*pi resp. pi).
double sinc_tail_bound(double rho, double u, bool truncated);

/// Growth factor ((1+y)^N - 1 + s) e^s with y = 2 R^{1+alpha} eps,
/// s = 6 a e R^{1+alpha} eps, N = ceil(3 a e R); the binomial sum is collapsed
/// through expm1/log1p so N in the thousands cannot overflow.  Returns
/// +infinity once the exponent leaves the double range; exactly 0 at eps = 0.
double phi_alpha(double R, double eps, double alpha, double a);

/// Envelope 12 |f|_s rho^{-(s-1)/s} (ln(pi a e rho/3))^{(s-1)/s} for the tail
/// of the double oscillatory integral.  Requires rho > 3/(pi a) and s > 1.
double double_int_bound(double norm_f_s, const Lp& s, double rho, double a);

/// Pointwise envelope (1/2) Q1 e^{a Q1} min(1, 4/(pi R^alpha t)) + Phi + Phi_eps
/// for the boundary-kernel difference at offset t in (0, 2a).
double kd_envelope(double t, double R, double eps, double alpha,
                   const AprioriParams& params);

/// Radius thresholds by name (R1, R2 from configuration, R3, R4, R0, and R5
/// with beta_star when derivative data is present), all at the given alpha.
BoundBreakdown thresholds(const AprioriParams& params, double alpha);

/// alpha* = (1 - delta) (2p - 1) / (3p - 2), the split exponent balancing the
/// slowest-decaying terms of the primitive estimate.
double optimal_split_exponent(const AprioriParams& params);

/// Constant breakdown of the stability estimate for the primitive of the
/// potential difference at radius R and resonance proximity eps.
BoundBreakdown primitive_stability_bound(double R, double eps,
                                         const AprioriParams& params);

/// Constant breakdown of the pointwise stability estimate; needs the
/// derivative a-priori data (r, Dr_prime, A_inf).  The envelope is assembled
/// at the interior point x = a/2, where every term decays in R.
BoundBreakdown pointwise_stability_bound(double R, double eps,
                                         const AprioriParams& params);

} // namespace resinv
