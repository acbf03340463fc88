#pragma once

#include <vector>

namespace resinv {

/// Grid functions in this library are the piecewise-linear interpolants of
/// their node samples on the uniform mesh x_i = i * a / n over [0, a], and
/// identically zero outside.  The integrals below are exact for that class
/// (absolute values are split at sign crossings, so no quadrature error).

/// Interpolant value at x; zero outside [0, a], inside-limit value at x = a.
double pwl_eval(double a, const std::vector<double>& v, double x);

/// Exact signed integral over [x0, x1] (clamped to [0, a]).
double pwl_integral(double a, const std::vector<double>& v, double x0, double x1);

/// Exact integral of |f| over [x0, x1].
double pwl_abs_integral(double a, const std::vector<double>& v, double x0, double x1);

/// Exact integral of (t - x) |f(t)| over [x, a]; zero when x >= a.
double pwl_abs_weighted_tail(double a, const std::vector<double>& v, double x);

/// Composite Gauss(4) integral of |f|^p over [0, a]; exact enough for norms
/// (interior cells are smooth except at isolated sign crossings).
double pwl_abs_pow_integral(double a, const std::vector<double>& v, double p);

/// Trapezoid weights over node range [i0, i1] of the mesh; returns
/// h * (sum - (f[i0] + f[i1]) / 2) given precomputed plain partial sums.
/// Helper kept here so the kernel solvers and the pipeline agree on weights.
double trapezoid(const std::vector<double>& f, int i0, int i1, double h);

} // namespace resinv
