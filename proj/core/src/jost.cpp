#include "resinv/jost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace resinv {

using cd = std::complex<double>;

void JostEvaluationConfig::validate() const {
    if (ode_steps_per_unit < 16)
        throw std::invalid_argument("JostEvaluationConfig: ode_steps_per_unit must be >= 16");
    if (quad_points < 16)
        throw std::invalid_argument("JostEvaluationConfig: quad_points must be >= 16");
}

namespace {

struct OdeState {
    cd y, p;   // y and y'
    cd w, wp;  // dy/dz and its x-derivative (augmented route)
};

// One RK4 step of size hs (negative when integrating backward) for
//   y'' = (q - z^2) y,  w'' = (q - z^2) w - 2 z y
// with q linear inside the current cell: q(x) = q0 + slope * (x - x_ref).
OdeState rk4_step(const OdeState& s, double x, double hs, double q0, double slope, double x_ref,
                  cd z2, cd two_z, bool augmented) {
    auto coeff = [&](double xx) { return cd(q0 + slope * (xx - x_ref), 0.0) - z2; };
    auto rhs = [&](const OdeState& u, double xx) {
        OdeState d;
        cd c = coeff(xx);
        d.y = u.p;
        d.p = c * u.y;
        if (augmented) {
            d.w = u.wp;
            d.wp = c * u.w - two_z * u.y;
        }
        return d;
    };
    auto axpy = [&](const OdeState& u, const OdeState& d, double f) {
        OdeState r;
        r.y = u.y + f * d.y;
        r.p = u.p + f * d.p;
        r.w = u.w + f * d.w;
        r.wp = u.wp + f * d.wp;
        return r;
    };
    OdeState k1 = rhs(s, x);
    OdeState k2 = rhs(axpy(s, k1, 0.5 * hs), x + 0.5 * hs);
    OdeState k3 = rhs(axpy(s, k2, 0.5 * hs), x + 0.5 * hs);
    OdeState k4 = rhs(axpy(s, k3, hs), x + hs);
    OdeState r;
    r.y = s.y + hs / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y);
    r.p = s.p + hs / 6.0 * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p);
    r.w = s.w + hs / 6.0 * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w);
    r.wp = s.wp + hs / 6.0 * (k1.wp + 2.0 * k2.wp + 2.0 * k3.wp + k4.wp);
    return r;
}

// Integrate from x = a down to x_target.  Substeps stay inside potential
// cells so the integrand is smooth across every RK4 stage, and the count per
// cell scales with (1 + |z|) to track the oscillation wavelength.
OdeState integrate_back(const Potential& q, cd z, double x_target, int steps_per_unit,
                        bool augmented) {
    const double a = q.a;
    const cd eiza = std::exp(cd(0.0, 1.0) * z * a);
    OdeState s;
    s.y = eiza;
    s.p = cd(0.0, 1.0) * z * eiza;
    s.w = cd(0.0, a) * eiza;
    s.wp = cd(0.0, 1.0) * (1.0 + cd(0.0, 1.0) * z * a) * eiza;
    if (x_target >= a) return s;

    const int n = q.n_grid;
    const double h = q.h();
    const cd z2 = z * z;
    const cd two_z = 2.0 * z;
    const double rate = steps_per_unit * (1.0 + std::abs(z));

    for (int c = n - 1; c >= 0; --c) {
        double lo = std::max(x_target, c * h);
        double hi = std::min(a, (c + 1) * h);
        if (hi <= x_target) break;
        if (hi <= lo) continue;
        double q0 = q.values[c];
        double slope = (q.values[c + 1] - q.values[c]) / h;
        int m = std::max(1, static_cast<int>(std::ceil((hi - lo) * rate)));
        double hs = (lo - hi) / m;
        double x = hi;
        for (int k = 0; k < m; ++k) {
            s = rk4_step(s, x, hs, q0, slope, c * h, z2, two_z, augmented);
            x += hs;
        }
        if (lo == x_target) break;
    }
    return s;
}

} // namespace

std::pair<cd, cd> jost_solution(const Potential& q, cd z, double x,
                                const JostEvaluationConfig& cfg) {
    q.validate();
    cfg.validate();
    if (x < -1e-12 * q.a || x > q.a * (1.0 + 1e-12))
        throw std::domain_error("jost_solution: x outside [0, a]");
    x = std::clamp(x, 0.0, q.a);
    OdeState s = integrate_back(q, z, x, cfg.ode_steps_per_unit, false);
    return {s.y, s.p};
}

JostEvaluator::JostEvaluator(Potential q, JostEvaluationConfig cfg)
    : q_(std::move(q)), cfg_(cfg) {
    q_.validate();
    cfg_.validate();
    k0_ = solve_K0(q_);
    const int n = q_.n_grid;
    const double ht = 2.0 * q_.a / n; // K(0,t) lives on [0, 2a]
    std::vector<cd> b(n + 1), tb(n + 1);
    double bmax = 0.0;
    for (int j = 0; j <= n; ++j) {
        double bj = k0_.at(j, j); // K(0, 2 v_j) sits on the u = v edge
        b[j] = bj;
        tb[j] = (j * ht) * bj;
        bmax = std::max(bmax, std::abs(bj));
    }
    zero_row_ = bmax == 0.0;
    // refine through the same local cubics when a finer quadrature is asked
    // for; the refinement is exact for the stored interpolant
    int refine = std::max(1, (cfg_.quad_points + n - 1) / n);
    if (refine > 1) {
        SampledExpIntegrand coarse = prepare_exp_integrand(b, 0.0, ht, 3);
        SampledExpIntegrand tcoarse = prepare_exp_integrand(tb, 0.0, ht, 3);
        auto resample = [&](const SampledExpIntegrand& g, std::vector<cd>& out) {
            out.assign(static_cast<std::size_t>(n) * refine + 1, cd(0.0));
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < refine; ++k) {
                    double x = double(k) / refine;
                    const auto& c = g.cells[j];
                    out[static_cast<std::size_t>(j) * refine + k] =
                        c[0] + x * (c[1] + x * (c[2] + x * c[3]));
                }
            out.back() = g.cells.back()[0] + g.cells.back()[1] + g.cells.back()[2] +
                         g.cells.back()[3];
        };
        std::vector<cd> br, tbr;
        resample(coarse, br);
        resample(tcoarse, tbr);
        boundary_ = prepare_exp_integrand(br, 0.0, ht / refine, 3);
        t_boundary_ = prepare_exp_integrand(tbr, 0.0, ht / refine, 3);
    } else {
        boundary_ = prepare_exp_integrand(b, 0.0, ht, 3);
        t_boundary_ = prepare_exp_integrand(tb, 0.0, ht, 3);
    }
}

cd JostEvaluator::psi(cd z, JostRoute route) const {
    if (route == JostRoute::kernel)
        return 1.0 + evaluate_exp_integral(boundary_, cd(0.0, 1.0) * z);
    return integrate_back(q_, z, 0.0, cfg_.ode_steps_per_unit, false).y;
}

cd JostEvaluator::dpsi(cd z, JostRoute route) const {
    if (route == JostRoute::kernel)
        return cd(0.0, 1.0) * evaluate_exp_integral(t_boundary_, cd(0.0, 1.0) * z);
    return integrate_back(q_, z, 0.0, cfg_.ode_steps_per_unit, true).w;
}

bool JostEvaluator::use_ode(cd z) const {
    // A vanishing boundary row makes the kernel route exact (psi == 1), while
    // the ODE route's co-solution contamination blows up at depth; never leave
    // the kernel route in that case.
    return !zero_row_ && std::abs(z.imag()) > im_cutoff();
}

cd JostEvaluator::psi(cd z) const {
    return psi(z, use_ode(z) ? JostRoute::ode : JostRoute::kernel);
}

cd JostEvaluator::dpsi(cd z) const {
    return dpsi(z, use_ode(z) ? JostRoute::ode : JostRoute::kernel);
}

std::pair<cd, cd> JostEvaluator::both(cd z) const {
    if (use_ode(z)) {
        OdeState s = integrate_back(q_, z, 0.0, cfg_.ode_steps_per_unit, true);
        return {s.y, s.w};
    }
    return {psi(z, JostRoute::kernel), dpsi(z, JostRoute::kernel)};
}

cd jost_function(const Potential& q, cd z, JostRoute route, const JostEvaluationConfig& cfg) {
    if (route == JostRoute::ode) {
        q.validate();
        cfg.validate();
        return integrate_back(q, z, 0.0, cfg.ode_steps_per_unit, false).y;
    }
    return JostEvaluator(q, cfg).psi(z, JostRoute::kernel);
}

cd jost_derivative(const Potential& q, cd z, const JostEvaluationConfig& cfg) {
    return JostEvaluator(q, cfg).dpsi(z);
}

bool JostBoundReport::all_within() const {
    for (const auto& c : checks)
        if (c.violations > 0) return false;
    return true;
}

namespace {

void record_z(ZSampleCheck& c, double measured, double allowed, cd z) {
    double ratio;
    if (measured == 0.0)
        ratio = 0.0;
    else if (allowed == 0.0)
        ratio = std::numeric_limits<double>::infinity();
    else
        ratio = measured / allowed;
    ++c.samples;
    if (ratio > 1.0) ++c.violations;
    if (ratio > c.max_ratio) {
        c.max_ratio = ratio;
        c.worst_z = z;
    }
}

} // namespace

JostBoundReport verify_halfplane_bounds(const Potential& q, const std::vector<cd>& samples,
                                        const JostEvaluationConfig& cfg) {
    for (cd z : samples)
        if (z.imag() < -1e-15)
            throw std::invalid_argument("verify_halfplane_bounds: sample below the real axis");
    JostEvaluator ev(q, cfg);
    const double s0 = sigma(q, 0.0);
    const double sbar = sigma_bar(q, 0.0);
    const double q1 = s0;

    JostBoundReport rep;
    ZSampleCheck diff{"difference_bound", 0.0, 0, {}, 0};
    ZSampleCheck mod{"modulus_bound", 0.0, 0, {}, 0};
    ZSampleCheck axis{"imaginary_axis_bound", 0.0, 0, {}, 0};
    for (cd z : samples) {
        cd v = ev.psi(z);
        if (std::abs(z) > 0.0)
            record_z(diff, std::abs(v - 1.0), s0 * std::exp(sbar) / std::abs(z), z);
        record_z(mod, std::abs(v), std::exp(sbar), z);
        if (z.real() == 0.0 && z.imag() > 0.0)
            record_z(axis, std::abs(v - 1.0), 0.5 * q1 * std::exp(q.a * q1) / z.imag(), z);
    }
    rep.checks.push_back(diff);
    rep.checks.push_back(mod);
    if (axis.samples > 0) rep.checks.push_back(axis);
    return rep;
}

} // namespace resinv
