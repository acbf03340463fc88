#pragma once

#include "resinv/potential.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace resinv {

/// Transformation-operator kernel sampled on the triangle {0 <= u <= v <= a}.
///
/// Coordinates: K(x,t) = Ktilde((t-x)/2, (t+x)/2).  Nodes u_i = i*h, v_j = j*h
/// with h = a/n_grid; storage is the upper triangle i <= j, row-major.
/// The kernel vanishes identically for v > a.
struct KernelGrid {
    double a = 1.0;
    int n_grid = 0;
    std::vector<double> values; // (n+1)(n+2)/2 entries, row i holds j = i..n

    double h() const { return a / n_grid; }

    std::size_t index(int i, int j) const {
        // offset(i) = i*(n+1) - i*(i-1)/2 entries precede row i
        return static_cast<std::size_t>(i) * (n_grid + 1) -
               static_cast<std::size_t>(i) * (i - 1) / 2 + (j - i);
    }
    double at(int i, int j) const { return values[index(i, j)]; }
    double& at(int i, int j) { return values[index(i, j)]; }

    /// Interpolated Ktilde(u,v); bilinear inside, barycentric in diagonal cells, 0 for v > a.
    double value_uv(double u, double v) const;
    /// Interpolated K(x,t) through the coordinate map.
    double value_xt(double x, double t) const;

    /// Samples of K(0, 2*v_j) along the u = v edge (the x = 0 boundary), j = 0..n_grid.
    std::vector<double> edge_x0() const;

    void validate() const;
};

/// Controls the successive-approximation solve.  tol = 0 picks
/// 1e-10 * (1 + Qm * exp(2*a*Qm)) with Qm the larger L1 norm involved.
struct GoursatConfig {
    double tol = 0.0;
    int max_iter = 200;

    void validate() const;
};

/// Per-solve convergence record.
struct GoursatInfo {
    int iterations = 0;          ///< Picard sweeps performed
    double last_increment = 0.0; ///< sup-norm of the final increment
    double tol_used = 0.0;       ///< effective tolerance after the auto rule
    bool converged = false;
    std::vector<double> term_sup; ///< sup-norm of each series term, term 0 = data
};

/// One bound check over grid nodes: ratio = |measured| / allowed.
struct BoundCheck {
    std::string name;
    double max_ratio = 0.0;
    int violations = 0; ///< nodes with ratio > 1
    double worst_u = 0.0, worst_v = 0.0;
    int samples = 0;
};

struct KernelBoundReport {
    std::vector<BoundCheck> checks;
    bool all_within() const;
};

/// Solve the forward kernel equation for the pair (qi -> qj):
///   Ktilde(u,v) = 1/2 * int_v^a (qj - qi)  +  int_0^u dr int_v^a ds [qj(s-r) - qi(s+r)] Ktilde(r,s)
/// so that y_qj(x,z) = y_qi(x,z) + int_x^{2a-x} K(x,t) y_qi(t,z) dt.
KernelGrid solve_kernel(const Potential& qi, const Potential& qj, const GoursatConfig& cfg = {},
                        GoursatInfo* info = nullptr);

/// Kernel taking y_q1 to y_q2.
KernelGrid solve_K12(const Potential& q1, const Potential& q2, const GoursatConfig& cfg = {},
                     GoursatInfo* info = nullptr);

/// Kernel taking the free solution e^{izx} to y_q.
KernelGrid solve_K0(const Potential& q, const GoursatConfig& cfg = {},
                    GoursatInfo* info = nullptr);

/// Kernel taking y_q back to the free solution (free term -1/2 * int_v^a q).
KernelGrid inverse_kernel_K10(const Potential& q, const GoursatConfig& cfg = {},
                              GoursatInfo* info = nullptr);

/// K(x,x) = Ktilde(0,x), interpolated along the first row.  Requires 0 <= x <= a.
double kernel_diagonal(const KernelGrid& K, double x);

/// Solve the edge-data form of the kernel equation, data on the u = v edge:
///   Ktilde(u,v) = b(v) + int_u^v dr int_v^a ds [q1(s+r) - q2(s-r)] Ktilde(r,s)
/// b holds K(0, 2*v_j) on the v-grid (n_grid + 1 samples).  The kernel of the
/// equation needs q2, unknown in the inverse problem; callers supply a guess.
KernelGrid goursat_from_boundary(const std::vector<double>& boundary, const Potential& q1,
                                 const Potential& q2_guess, const GoursatConfig& cfg = {},
                                 GoursatInfo* info = nullptr);

/// Check finite-difference x/t derivatives of H = K - free term against the
/// explicit a-priori bound 3/2 * Qm^2 * exp(2*a*Qm); violations are reported,
/// never asserted.
KernelBoundReport verify_H_derivative_bounds(const Potential& q1, const Potential& q2,
                                             const KernelGrid& K);

/// Check |Ktilde(u,v)| <= Qm * exp(2*u*Qm) at all nodes (and the sharper
/// Qm/2 * exp(a*Qm) form when one potential vanishes identically).
KernelBoundReport verify_kernel_bounds(const Potential& q1, const Potential& q2,
                                       const KernelGrid& K);

} // namespace resinv
