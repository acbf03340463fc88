#include "resinv/kernels.hpp"

#include "resinv/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace resinv {

void KernelGrid::validate() const {
    if (!(a > 0.0)) throw std::invalid_argument("KernelGrid: a must be positive");
    if (n_grid < 1) throw std::invalid_argument("KernelGrid: n_grid must be positive");
    std::size_t want = static_cast<std::size_t>(n_grid + 1) * (n_grid + 2) / 2;
    if (values.size() != want)
        throw std::invalid_argument("KernelGrid: values size does not match the triangle");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("KernelGrid: non-finite value");
}

double KernelGrid::value_uv(double u, double v) const {
    if (v > a) return 0.0; // support ends at v = a
    const double hh = h();
    v = std::max(v, 0.0);
    u = std::clamp(u, 0.0, v);
    int j = std::min(static_cast<int>(v / hh), n_grid - 1);
    int i = std::min(static_cast<int>(u / hh), j);
    double xi = u / hh - i;
    double eta = v / hh - j;
    if (i == j) {
        // diagonal cell: only the u <= v half exists; interpolate on its corners
        xi = std::min(xi, eta);
        return at(i, j) * (1.0 - eta) + at(i, j + 1) * (eta - xi) + at(i + 1, j + 1) * xi;
    }
    return at(i, j) * (1.0 - xi) * (1.0 - eta) + at(i + 1, j) * xi * (1.0 - eta) +
           at(i, j + 1) * (1.0 - xi) * eta + at(i + 1, j + 1) * xi * eta;
}

double KernelGrid::value_xt(double x, double t) const {
    return value_uv(0.5 * (t - x), 0.5 * (t + x));
}

std::vector<double> KernelGrid::edge_x0() const {
    std::vector<double> b(n_grid + 1);
    for (int j = 0; j <= n_grid; ++j) b[j] = at(j, j);
    return b;
}

void GoursatConfig::validate() const {
    if (!(tol >= 0.0) || !std::isfinite(tol))
        throw std::invalid_argument("GoursatConfig: tol must be finite and >= 0");
    if (max_iter < 1) throw std::invalid_argument("GoursatConfig: max_iter must be >= 1");
}

namespace {

// Data edge of the integral equation: the u = 0 row (forward form, free term
// given on the diagonal x = t) or the u = v edge (boundary-data form).
enum class DataEdge { diagonal, x0 };

std::size_t tri_size(int n) { return static_cast<std::size_t>(n + 1) * (n + 2) / 2; }

double resolved_tol(const GoursatConfig& cfg, const Potential& qa, const Potential& qb) {
    if (cfg.tol > 0.0) return cfg.tol;
    double qm = std::max(norm_l1(qa), norm_l1(qb));
    return 1e-10 * (1.0 + qm * std::exp(2.0 * qa.a * qm));
}

// Picard iteration on the triangle.  Both equation forms share the inner
// integral int_v^a ds g(r,s) K(r,s); they differ only in the r-range, which the
// prefix sums P(k,l) = int_0^{u_k} dr handle for both:
//   diagonal form: K(k,l) = data(l) + P(k,l)
//   x0 form:       K(k,l) = data(l) + P(l,l) - P(k,l)
KernelGrid picard_solve(const Potential& shape, const std::vector<double>& g,
                        const std::vector<double>& data, DataEdge edge, const GoursatConfig& cfg,
                        double tol, GoursatInfo* info) {
    const int n = shape.n_grid;
    const double h = shape.h();

    KernelGrid K{shape.a, n, std::vector<double>(tri_size(n))};
    for (int i = 0; i <= n; ++i)
        for (int j = i; j <= n; ++j) K.at(i, j) = data[j];

    std::vector<double> S(tri_size(n)), P(tri_size(n)), w(n + 1);
    KernelGrid next = K;

    GoursatInfo rec;
    rec.tol_used = tol;
    double data_sup = 0.0;
    for (double b : data) data_sup = std::max(data_sup, std::abs(b));
    rec.term_sup.push_back(data_sup);

    auto idx = [&](int i, int j) { return K.index(i, j); };
    for (int sweep = 1; sweep <= cfg.max_iter; ++sweep) {
        // suffix trapezoid over s per row: S(i,l) = int_{v_l}^{a} g(u_i,s) K(u_i,s) ds
        for (int i = 0; i <= n; ++i) {
            for (int j = i; j <= n; ++j) w[j] = g[idx(i, j)] * K.at(i, j);
            S[idx(i, n)] = 0.0;
            for (int l = n - 1; l >= i; --l)
                S[idx(i, l)] = S[idx(i, l + 1)] + 0.5 * h * (w[l] + w[l + 1]);
        }
        // prefix trapezoid over r: P(k,l) = int_0^{u_k} S(r,l) dr
        for (int l = 0; l <= n; ++l) P[idx(0, l)] = 0.0;
        for (int k = 1; k <= n; ++k)
            for (int l = k; l <= n; ++l)
                P[idx(k, l)] = P[idx(k - 1, l)] + 0.5 * h * (S[idx(k - 1, l)] + S[idx(k, l)]);

        double delta = 0.0;
        for (int k = 0; k <= n; ++k)
            for (int l = k; l <= n; ++l) {
                double val = data[l];
                val += (edge == DataEdge::diagonal) ? P[idx(k, l)]
                                                    : P[idx(l, l)] - P[idx(k, l)];
                delta = std::max(delta, std::abs(val - K.at(k, l)));
                next.at(k, l) = val;
            }
        K.values.swap(next.values);
        rec.iterations = sweep;
        rec.last_increment = delta;
        rec.term_sup.push_back(delta);
        if (!std::isfinite(delta)) break;
        if (delta < tol) {
            rec.converged = true;
            break;
        }
    }
    if (info) *info = rec;
    if (!rec.converged) {
        std::ostringstream msg;
        msg << "kernel solve did not converge in " << rec.iterations
            << " sweeps; last increment " << rec.last_increment;
        throw std::runtime_error(msg.str());
    }
    return K;
}

// Node values of qb(s-r) - qa(s+r); both argument combinations land on mesh
// nodes, and s+r beyond a falls outside the support.
std::vector<double> coupling_nodes(const Potential& qa, const Potential& qb, double sign) {
    const int n = qa.n_grid;
    std::vector<double> g(tri_size(n));
    KernelGrid shape{qa.a, n, {}};
    for (int i = 0; i <= n; ++i)
        for (int j = i; j <= n; ++j) {
            double plus = (i + j <= n) ? qa.values[i + j] : 0.0;
            g[shape.index(i, j)] = sign * (qb.values[j - i] - plus);
        }
    return g;
}

std::vector<double> free_term(const Potential& qi, const Potential& qj) {
    const int n = qi.n_grid;
    std::vector<double> f(n + 1);
    for (int l = 0; l <= n; ++l) {
        double v = l * qi.h();
        f[l] = 0.5 * (pwl_integral(qj.a, qj.values, v, qj.a) -
                      pwl_integral(qi.a, qi.values, v, qi.a));
    }
    return f;
}

void check_pair(const Potential& qi, const Potential& qj, const GoursatConfig& cfg) {
    qi.validate();
    qj.validate();
    cfg.validate();
    if (!qi.same_grid(qj)) throw std::invalid_argument("kernel solve: grids differ");
    if (qi.n_grid < 4) throw std::invalid_argument("kernel solve: n_grid must be >= 4");
}

bool is_zero(const Potential& q) {
    for (double v : q.values)
        if (v != 0.0) return false;
    return true;
}

} // namespace

KernelGrid solve_kernel(const Potential& qi, const Potential& qj, const GoursatConfig& cfg,
                        GoursatInfo* info) {
    check_pair(qi, qj, cfg);
    return picard_solve(qi, coupling_nodes(qi, qj, +1.0), free_term(qi, qj), DataEdge::diagonal,
                        cfg, resolved_tol(cfg, qi, qj), info);
}

KernelGrid solve_K12(const Potential& q1, const Potential& q2, const GoursatConfig& cfg,
                     GoursatInfo* info) {
    return solve_kernel(q1, q2, cfg, info);
}

KernelGrid solve_K0(const Potential& q, const GoursatConfig& cfg, GoursatInfo* info) {
    return solve_kernel(make_zero(q.a, q.n_grid), q, cfg, info);
}

KernelGrid inverse_kernel_K10(const Potential& q, const GoursatConfig& cfg, GoursatInfo* info) {
    return solve_kernel(q, make_zero(q.a, q.n_grid), cfg, info);
}

double kernel_diagonal(const KernelGrid& K, double x) {
    if (x < -1e-12 * K.a || x > K.a * (1.0 + 1e-12))
        throw std::domain_error("kernel_diagonal: x outside [0, a]");
    x = std::clamp(x, 0.0, K.a);
    double jf = x / K.h();
    int j = std::min(static_cast<int>(jf), K.n_grid - 1);
    double eta = jf - j;
    return K.at(0, j) * (1.0 - eta) + K.at(0, j + 1) * eta;
}

KernelGrid goursat_from_boundary(const std::vector<double>& boundary, const Potential& q1,
                                 const Potential& q2_guess, const GoursatConfig& cfg,
                                 GoursatInfo* info) {
    check_pair(q1, q2_guess, cfg);
    if (boundary.size() != static_cast<std::size_t>(q1.n_grid) + 1)
        throw std::invalid_argument("goursat_from_boundary: boundary must match the v-grid");
    for (double b : boundary)
        if (!std::isfinite(b))
            throw std::invalid_argument("goursat_from_boundary: non-finite boundary sample");
    // coupling q1(s+r) - q2(s-r) = -(q2(s-r) - q1(s+r))
    return picard_solve(q1, coupling_nodes(q1, q2_guess, -1.0), boundary, DataEdge::x0, cfg,
                        resolved_tol(cfg, q1, q2_guess), info);
}

bool KernelBoundReport::all_within() const {
    for (const auto& c : checks)
        if (c.violations > 0) return false;
    return true;
}

namespace {

BoundCheck make_check(std::string name) {
    BoundCheck c;
    c.name = std::move(name);
    return c;
}

void record(BoundCheck& c, double measured, double allowed, double u, double v) {
    double ratio;
    if (measured == 0.0)
        ratio = 0.0;
    else if (allowed == 0.0)
        ratio = std::numeric_limits<double>::infinity();
    else
        ratio = std::abs(measured) / allowed;
    ++c.samples;
    if (ratio > 1.0) ++c.violations;
    if (ratio > c.max_ratio) {
        c.max_ratio = ratio;
        c.worst_u = u;
        c.worst_v = v;
    }
}

} // namespace

KernelBoundReport verify_kernel_bounds(const Potential& q1, const Potential& q2,
                                       const KernelGrid& K) {
    K.validate();
    double qm = std::max(norm_l1(q1), norm_l1(q2));
    bool one_zero = is_zero(q1) || is_zero(q2);

    KernelBoundReport rep;
    BoundCheck pair = make_check("kernel_pair_bound");
    BoundCheck onezero = make_check("kernel_onezero_bound");
    const double h = K.h();
    for (int i = 0; i <= K.n_grid; ++i)
        for (int j = i; j <= K.n_grid; ++j) {
            double u = i * h, v = j * h;
            double val = K.at(i, j);
            record(pair, val, qm * std::exp(2.0 * u * qm), u, v);
            if (one_zero) record(onezero, val, 0.5 * qm * std::exp(K.a * qm), u, v);
        }
    rep.checks.push_back(pair);
    if (one_zero) rep.checks.push_back(onezero);
    return rep;
}

KernelBoundReport verify_H_derivative_bounds(const Potential& q1, const Potential& q2,
                                             const KernelGrid& K) {
    K.validate();
    if (!q1.same_grid(q2) || q1.n_grid != K.n_grid)
        throw std::invalid_argument("verify_H_derivative_bounds: grid mismatch");
    double qm = std::max(norm_l1(q1), norm_l1(q2));
    bool one_zero = is_zero(q1) || is_zero(q2);
    const double allowed_pair = 1.5 * qm * qm * std::exp(2.0 * K.a * qm);
    const double allowed_onezero = 0.5 * qm * qm * std::exp(K.a * qm);

    std::vector<double> free = free_term(q1, q2);
    auto H = [&](int i, int j) { return K.at(i, j) - free[j]; };

    KernelBoundReport rep;
    BoundCheck dx = make_check("dHdx_bound");
    BoundCheck dt = make_check("dHdt_bound");
    BoundCheck dx0 = make_check("dHdx_onezero_bound");
    BoundCheck dt0 = make_check("dHdt_onezero_bound");
    const int n = K.n_grid;
    const double h = K.h();
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n - 1; ++j) {
            double du = (H(i + 1, j) - H(i - 1, j)) / (2.0 * h);
            double dv = (H(i, j + 1) - H(i, j - 1)) / (2.0 * h);
            double u = i * h, v = j * h;
            record(dx, 0.5 * (dv - du), allowed_pair, u, v);
            record(dt, 0.5 * (dv + du), allowed_pair, u, v);
            if (one_zero) {
                record(dx0, 0.5 * (dv - du), allowed_onezero, u, v);
                record(dt0, 0.5 * (dv + du), allowed_onezero, u, v);
            }
        }
    rep.checks.push_back(dx);
    rep.checks.push_back(dt);
    if (one_zero) {
        rep.checks.push_back(dx0);
        rep.checks.push_back(dt0);
    }
    return rep;
}

} // namespace resinv
