#pragma once

#include "resinv/kernels.hpp"
#include "resinv/oscillatory.hpp"
#include "resinv/potential.hpp"

#include <complex>
#include <string>
#include <utility>
#include <vector>

namespace resinv {

/// Evaluation knobs for the two routes.  Both counts must be >= 16.
struct JostEvaluationConfig {
    int ode_steps_per_unit = 192; ///< RK4 substeps per unit length, scaled by (1+|z|)
    int quad_points = 512;        ///< minimum cell count for the Fourier-representation route

    void validate() const;
};

enum class JostRoute { ode, kernel };

/// Solution of -y'' + q y = z^2 y with y ~ e^{izx} at infinity, integrated
/// backward from x = a where the data is exact.  Returns (y(x), y'(x)).
std::pair<std::complex<double>, std::complex<double>>
jost_solution(const Potential& q, std::complex<double> z, double x,
              const JostEvaluationConfig& cfg = {});

/// Cached evaluator of psi(z) = y_q(0,z) and its z-derivative.
///
/// The kernel route integrates 1 + int_0^{2a} K(0,t) e^{izt} dt over the
/// transformation-kernel boundary (solved once, then read-only; concurrent
/// evaluation is safe).  Large |Im z| makes that integrand grow like
/// e^{2a|Im z|}, so beyond im_cutoff() = 25/(2a) evaluations fall back to the
/// backward-ODE route automatically.
class JostEvaluator {
  public:
    explicit JostEvaluator(Potential q, JostEvaluationConfig cfg = {});

    std::complex<double> psi(std::complex<double> z) const;
    std::complex<double> psi(std::complex<double> z, JostRoute route) const;
    std::complex<double> dpsi(std::complex<double> z) const;
    std::complex<double> dpsi(std::complex<double> z, JostRoute route) const;
    /// (psi, psi') in one call.
    std::pair<std::complex<double>, std::complex<double>> both(std::complex<double> z) const;

    double im_cutoff() const { return 25.0 / (2.0 * q_.a); }
    const Potential& potential() const { return q_; }
    const KernelGrid& kernel() const { return k0_; }
    const JostEvaluationConfig& config() const { return cfg_; }

  private:
    bool use_ode(std::complex<double> z) const;

    Potential q_;
    JostEvaluationConfig cfg_;
    KernelGrid k0_;
    SampledExpIntegrand boundary_;   ///< K(0,t) samples on [0, 2a]
    SampledExpIntegrand t_boundary_; ///< t * K(0,t) samples
    bool zero_row_ = false;          ///< K(0,.) == 0: kernel route exact at any depth
};

/// psi_q(z) by the requested route (kernel route solves the kernel per call;
/// use JostEvaluator for repeated evaluation).
std::complex<double> jost_function(const Potential& q, std::complex<double> z, JostRoute route,
                                   const JostEvaluationConfig& cfg = {});

/// psi_q'(z) = i * int_0^{2a} t K(0,t) e^{izt} dt, ODE fallback for large |Im z|.
std::complex<double> jost_derivative(const Potential& q, std::complex<double> z,
                                     const JostEvaluationConfig& cfg = {});

/// One aggregated check across z samples: ratio = measured / allowed.
struct ZSampleCheck {
    std::string name;
    double max_ratio = 0.0;
    int violations = 0;
    std::complex<double> worst_z;
    int samples = 0;
};

struct JostBoundReport {
    std::vector<ZSampleCheck> checks;
    bool all_within() const;
};

/// Check the closed-upper-half-plane estimates |psi - 1| <= sigma_q(0) e^{sigmabar_q(0)} / |z|
/// and |psi| <= e^{sigmabar_q(0)} at the samples (all must have Im z >= 0), plus
/// the refinement |psi(ix) - 1| <= Q1 e^{aQ1} / (2x) on purely imaginary samples.
JostBoundReport verify_halfplane_bounds(const Potential& q,
                                        const std::vector<std::complex<double>>& samples,
                                        const JostEvaluationConfig& cfg = {});

} // namespace resinv
