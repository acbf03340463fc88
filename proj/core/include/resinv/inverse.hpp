#pragma once

#include "resinv/bounds.hpp"
#include "resinv/jost.hpp"
#include "resinv/kernels.hpp"
#include "resinv/potential.hpp"
#include "resinv/resonances.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace resinv {

/// Piecewise-linear function on the uniform mesh over [0, a], zero outside.
struct GridFunction {
    double a = 1.0;
    int n_grid = 0;
    std::vector<double> values; ///< n_grid + 1 node samples

    double operator()(double x) const;
    void validate() const;
};

/// Knobs for the resonance-data reconstruction pipeline.  Zero-valued fields
/// marked "0:" resolve to their data-dependent defaults inside reconstruct().
struct ReconstructionConfig {
    double R = 0.0;        ///< disk radius; 0: radius carried by the input set
    double alpha = 0.0;    ///< split exponent in (0, 1-delta); 0: the optimal one
    double cutoff_A = 0.0; ///< Fourier window half-width, >= R^alpha; 0: R^alpha
    int quad_points = 4096; ///< cells across the window [-A, A]
    int n_grid = 0;         ///< output mesh; 0: inherit q1's mesh
    int outer_iters = 20;   ///< self-consistency sweep budget
    double outer_damping = 0.7; ///< relaxation weight in (0, 1]
    double outer_tol = 1e-8;    ///< sup-norm residual target for the sweeps
    bool contour_shift = false; ///< invert on the raised contour instead of the axis
    double resonance_tol = 1e-9; ///< origin detection tolerance for q1's zeros
    ResonanceSearchConfig search{};
    GoursatConfig goursat{};

    void validate() const;
};

/// Per-stage residuals of one reconstruction run.  Everything here is a
/// diagnostic, never an input to the estimates themselves.
struct StageResiduals {
    double pairing_epsilon = 0.0;   ///< achieved bottleneck max |1/z2 - 1/z1|
    int unpaired_1 = 0;             ///< q1 zeros without a partner
    int unpaired_2 = 0;             ///< data zeros without a partner
    double model_drift = 0.0;       ///< |psi2_hat(2iA) - 1|, Hadamard-model sanity
    double fourier_imag_max = 0.0;  ///< largest |Im| left by the inversion
    double primitive_raw_at_a = 0.0; ///< diagonal value at x = a before pinning
    double primitive_at_zero = 0.0;  ///< full-interval mean mismatch, x = 0 value
    std::vector<double> outer_residuals; ///< sup |q1 + update - q2| per sweep
    int outer_iterations = 0;
    bool outer_converged = false;
    GoursatInfo goursat; ///< convergence record of the final kernel solve
};

struct ReconstructionResult {
    GridFunction primitive_estimate; ///< x -> int_x^a (q2 - q1); exactly 0 at x = a
    std::optional<GridFunction> pointwise_estimate; ///< q2 - q1 when derivative data exists
    StageResiduals diagnostics;
    BoundBreakdown bound; ///< the stability estimate evaluated at (R, epsilon)
};

/// Genus-one canonical factor (1 - w) e^w.
std::complex<double> weierstrass_factor(std::complex<double> w);

/// Ratio prod E(z/z2_n) / E(z/z1_n) over the pairs, evaluated as the
/// exponential of a branch-consistent sum of pairwise log terms.  Throws when
/// z coincides with a first-set zero (a pole of the ratio).
std::complex<double> hadamard_ratio_W(const PairingResult& pairing, std::complex<double> z);

/// Same ratio for a partial pairing: unmatched zeros contribute one-sided
/// canonical factors (second set in the numerator, first set below).
std::complex<double> hadamard_ratio_W(const PartialPairing& pairing, std::complex<double> z);

/// psi2_hat(z) = psi1(z) * W(z): the Jost function a potential with the paired
/// zero set would have, keeping only the zero-relocation factor.
std::complex<double> psi2_estimate(const JostEvaluator& ev1, const PairingResult& pairing,
                                   std::complex<double> z);
std::complex<double> psi2_estimate(const Potential& q1, const PairingResult& pairing,
                                   std::complex<double> z, const JostEvaluationConfig& cfg = {});

/// Real part of (1/2pi) int_{-A}^{A} f(x) e^{-ixt} dx from uniform samples of
/// f on [-A, A].  Requires t > 0 and at least eight samples per oscillation
/// period 2pi/t; the imaginary part (a symmetry diagnostic) lands in
/// imag_part when given.
double fourier_invert_diff(const std::vector<std::complex<double>>& psi_diff, double A, double t,
                           double* imag_part = nullptr);

/// Boundary data K12(0, t) = Kd(t) + int_0^t Kd(s) K10(s, t) ds on the t-grid
/// t_j = j * 2a/n carried by Kd (n + 1 samples).  K10 is the kernel taking
/// y_q1 back to the free solution; with q1 = 0 the map is the identity.
std::vector<double> k12_boundary(const std::vector<double>& Kd, const KernelGrid& K10);
std::vector<double> k12_boundary(const std::vector<double>& Kd, const Potential& q1,
                                 const GoursatConfig& cfg = {});

/// Pointwise difference estimate from an edge-data kernel solve:
///   (q2 - q1)(x) = -2 [ I1(x) - I2(x) + 2 dK12/dt(0, 2x) ],
///   I1 = int_x^a (q1(y+x) - q2(y-x)) Kt(x, y) dy,
///   I2 = int_0^x (q1(x+y) - q2(x-y)) Kt(y, x) dy,
/// where dK12/dt(0, t) = Kd'(t) + Kd(t) K10(t, t) + int_0^t Kd(y) dK10/dt(y, t) dy.
/// Kd and dKd are samples on the t-grid t_j = j * 2a/n (n + 1 each); K12 and
/// K10 share q1's mesh.  Returns node samples of the right-hand side.
GridFunction pointwise_from_kernel(const KernelGrid& K12, const Potential& q1,
                                   const Potential& q2, const std::vector<double>& Kd,
                                   const std::vector<double>& dKd, const KernelGrid& K10);

/// Reconstruct int_x^a (q2 - q1) (and q2 - q1 itself when the a-priori data
/// includes the derivative block) from q1 and the resonance set of q2:
/// pair the two zero inventories, transport psi1 by the Hadamard ratio,
/// Fourier-invert the difference on [-A, A], correct to transformation-kernel
/// boundary data, and solve the edge-data kernel equation inside a damped
/// self-consistency loop over the unknown potential.
ReconstructionResult reconstruct(const Potential& q1, const ResonanceSet& resonances2,
                                 const AprioriParams& params,
                                 const ReconstructionConfig& cfg = {});

/// Same pipeline with q1's own resonance inventory supplied by the caller
/// (as produced by find_resonances over the same disk), so sweeps can reuse
/// one search across many perturbations.
ReconstructionResult reconstruct(const Potential& q1, const ResonanceSet& resonances1,
                                 const ResonanceSet& resonances2, const AprioriParams& params,
                                 const ReconstructionConfig& cfg = {});

} // namespace resinv
