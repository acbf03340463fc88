#pragma once

#include <array>
#include <complex>
#include <vector>

namespace resinv {

/// Exact moments M_k = int_0^h s^k e^{mu*s} ds for k = 0..3.
/// Uses the upward recurrence M_k = (h^k e^{mu h} - k M_{k-1}) / mu, switching
/// to the Taylor series in mu*h near the removable singularity at mu = 0.
std::array<std::complex<double>, 4> power_exp_moments(std::complex<double> mu, double h);

/// A sampled integrand with per-cell polynomial coefficients frozen, ready for
/// repeated integration against different exponentials e^{w*s}.
///
/// order 1 keeps each cell's linear interpolant; order 3 the cubic through the
/// 4-node stencil around the cell (one-sided at the ends).  Coefficients are
/// stored in local units x = (s - s_j)/h.
struct SampledExpIntegrand {
    double s0 = 0.0;
    double h = 0.0;
    std::vector<std::array<std::complex<double>, 4>> cells;
};

SampledExpIntegrand prepare_exp_integrand(const std::vector<std::complex<double>>& f, double s0,
                                          double h, int order = 3);

/// int_{s0}^{s0 + n*h} f(s) e^{w*s} ds with the frozen interpolant.  Each cell
/// is integrated exactly against the oscillator, so the rule stays accurate
/// for |w|*h >> 1.
std::complex<double> evaluate_exp_integral(const SampledExpIntegrand& g, std::complex<double> w);

/// One-shot convenience: prepare + evaluate.
std::complex<double> sampled_exp_integral(const std::vector<std::complex<double>>& f, double s0,
                                          double h, std::complex<double> w, int order = 3);

/// Real-sample convenience overload.
std::complex<double> sampled_exp_integral(const std::vector<double>& f, double s0, double h,
                                          std::complex<double> w, int order = 3);

} // namespace resinv
