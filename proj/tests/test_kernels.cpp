#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "resinv/grid.hpp"
#include "resinv/kernels.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include "oracle_helpers.hpp"

using namespace resinv;
using cd = std::complex<double>;

namespace {

// Exact overlap kernel for the pair (0 -> constant c):
//   Ktilde(u,v) = (c/2)(a-v) sum_k (c u (a-v))^k / (k! (k+1)!)
//               = (1/2) sqrt(c(a-v)/u) I_1(2 sqrt(c u (a-v)))
// (plugging the series into the integral equation reproduces it term by term).
double const_pair_kernel(double c, double a, double u, double v) {
    if (v >= a) return 0.0;
    const double w = c * u * (a - v);
    double term = 0.5 * c * (a - v);
    double acc = term;
    for (int k = 1; k <= 60; ++k) {
        term *= w / (static_cast<double>(k) * (k + 1));
        acc += term;
        if (std::abs(term) < 1e-18 * std::abs(acc)) break;
    }
    return acc;
}

// Backward trajectory of y_q(., z) stored on x_k = k a / m, k = 0..m.
std::vector<cd> jost_traj(const Potential& q, cd z, int m) {
    std::vector<cd> out(m + 1);
    const double a = q.a, h = a / m;
    cd y = std::exp(cd(0, 1) * z * a);
    cd yp = cd(0, 1) * z * y;
    out[m] = y;
    for (int k = m; k > 0; --k) {
        const double x = k * h;
        auto rhs = [&](double xx, cd Y, cd YP, cd& dY, cd& dYP) {
            dY = YP;
            dYP = (q(xx) - z * z) * Y;
        };
        cd k1y, k1p, k2y, k2p, k3y, k3p, k4y, k4p;
        const double hh = -h;
        rhs(x, y, yp, k1y, k1p);
        rhs(x + hh / 2, y + hh / 2 * k1y, yp + hh / 2 * k1p, k2y, k2p);
        rhs(x + hh / 2, y + hh / 2 * k2y, yp + hh / 2 * k2p, k3y, k3p);
        rhs(x + hh, y + hh * k3y, yp + hh * k3p, k4y, k4p);
        y += hh / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        yp += hh / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        out[k - 1] = y;
    }
    return out;
}

// y_q(t, z) for t possibly beyond a: trajectory inside, e^{izt} outside.
cd y_at(const std::vector<cd>& traj, double a, cd z, double t) {
    if (t >= a) return std::exp(cd(0, 1) * z * t);
    const int m = static_cast<int>(traj.size()) - 1;
    const double s = t / a * m;
    int k = static_cast<int>(s);
    if (k >= m) k = m - 1;
    const double w = s - k;
    return (1.0 - w) * traj[k] + w * traj[k + 1];
}

// Transformation-identity residual max over a few x and z for the kernel that
// maps y_qi into y_qj.
double transform_residual(const Potential& qi, const Potential& qj, const KernelGrid& K) {
    const double a = qi.a;
    const int m = 2048;
    double worst = 0.0;
    for (cd z : {cd(2.0, 0.0), cd(5.0, 0.0), cd(3.0, -2.0), cd(0.0, 0.5), cd(-1.5, 1.0)}) {
        const auto ti = jost_traj(qi, z, m);
        const auto tj = jost_traj(qj, z, m);
        for (int xi : {0, m / 4, (3 * m) / 5}) {
            const double x = xi * a / m;
            const int M = 4096;
            const double len = 2.0 * a - 2.0 * x;
            cd acc = 0.0;
            for (int k = 0; k <= M; ++k) {
                const double t = x + len * k / M;
                const cd f = K.value_xt(x, t) * y_at(ti, a, z, t);
                acc += (k == 0 || k == M) ? 0.5 * f : f;
            }
            acc *= len / M;
            const double scale = std::max(1.0, std::abs(tj[xi]));
            worst = std::max(worst, std::abs(ti[xi] + acc - tj[xi]) / scale);
        }
    }
    return worst;
}

} // namespace

TEST_CASE("series form of the constant-pair kernel matches the Bessel closed form") {
    const double c = 0.8, a = 1.0;
    for (double u : {0.1, 0.4, 0.7}) {
        for (double v : {0.7, 0.9}) {
            if (u > v) continue;
            const double w = 2.0 * std::sqrt(c * u * (a - v));
            const double bessel = 0.5 * std::sqrt(c * (a - v) / u) * std::cyl_bessel_i(1.0, w);
            CHECK(const_pair_kernel(c, a, u, v) == doctest::Approx(bessel).epsilon(1e-12));
        }
    }
}

TEST_CASE("solve_kernel reproduces the constant-pair closed form") {
    const double c = 0.8, a = 1.0;
    const int n = 256;
    const Potential q0 = make_zero(a, n);
    const Potential qc = make_constant(c, a, n);
    GoursatInfo info;
    const KernelGrid K = solve_kernel(q0, qc, {}, &info);
    CHECK(info.converged);
    CHECK(K.n_grid == n);
    const double h = K.h();
    double worst = 0.0;
    for (int i = 0; i <= n; ++i)
        for (int j = i; j <= n; ++j)
            worst = std::max(worst, std::abs(K.at(i, j) - const_pair_kernel(c, a, i * h, j * h)));
    CHECK(worst <= 2e-5);
}

TEST_CASE("solve_kernel agrees with an independent characteristics marcher") {
    const double a = 1.0;
    const int n = 128;
    const Potential qi = make_bump(0.5, 0.5, 0.3, a, n);
    const Potential qj = make_sine(0.4, 2, a, n);
    const KernelGrid K = solve_kernel(qi, qj, {});
    auto g = [&](double r, double s) { return qj(s - r) - qi(s + r); };
    auto free_term = [&](double v) {
        return 0.5 * (pwl_integral(a, qj.values, v, a) - pwl_integral(a, qi.values, v, a));
    };
    const int nm = 1024; // 8x refinement of the library grid
    const auto M = oracle::march_goursat(g, free_term, a, nm);
    double worst = 0.0;
    for (int i = 0; i <= n; ++i)
        for (int j = i; j <= n; ++j) {
            const double ref = M[(i * (nm / n)) * (nm + 1) + j * (nm / n)];
            worst = std::max(worst, std::abs(K.at(i, j) - ref));
        }
    CHECK(worst <= 5e-4);
}

TEST_CASE("row zero is the diagonal slice K(x,x) = half tail integral of the difference") {
    const double a = 1.3;
    const int n = 128;
    const Potential qi = make_sine(0.7, 1, a, n);
    const Potential qj = make_constant(-0.4, a, n);
    const KernelGrid K = solve_kernel(qi, qj, {});
    const double h = K.h();
    for (int j = 0; j <= n; ++j) {
        const double ref = 0.5 * (pwl_integral(a, qj.values, j * h, a) -
                                  pwl_integral(a, qi.values, j * h, a));
        CHECK(K.at(0, j) == doctest::Approx(ref).epsilon(1e-12));
    }
    // interpolated accessor agrees on and between nodes
    CHECK(kernel_diagonal(K, 0.5 * h) ==
          doctest::Approx(0.5 * (K.at(0, 0) + K.at(0, 1))).epsilon(1e-12));
}

TEST_CASE("solved kernel satisfies the discrete fixed-point equation") {
    const double a = 1.0;
    const int n = 96;
    const Potential qi = make_constant(0.3, a, n);
    const Potential qj = make_bump(0.6, 0.4, 0.25, a, n);
    GoursatConfig cfg;
    cfg.tol = 1e-12;
    const KernelGrid K = solve_kernel(qi, qj, cfg);
    const double h = K.h();
    double worst = 0.0;
    std::vector<double> inner(n + 1), outer(n + 1);
    for (int i = 0; i <= n; ++i)
        for (int j = i; j <= n; ++j) {
            // double trapezoid of g(r,s) Kt(r,s) over [0,u_i] x [v_j,a]
            for (int r = 0; r <= i; ++r) {
                for (int s = j; s <= n; ++s)
                    inner[s] = (qj((s - r) * h) - qi((s + r) * h)) *
                               K.at(std::min(r, s), std::max(r, s));
                outer[r] = trapezoid(inner, j, n, h);
            }
            const double up = trapezoid(outer, 0, i, h);
            const double free = 0.5 * (pwl_integral(a, qj.values, j * h, a) -
                                       pwl_integral(a, qi.values, j * h, a));
            worst = std::max(worst, std::abs(K.at(i, j) - (free + up)));
        }
    CHECK(worst <= 1e-9);
}

TEST_CASE("mixed derivative satisfies the hyperbolic equation") {
    const double a = 1.0;
    const int n = 256;
    const Potential qi = make_sine(0.5, 1, a, n);
    const Potential qj = make_constant(0.6, a, n);
    const KernelGrid K = solve_kernel(qi, qj, {});
    const double h = K.h();
    double worst = 0.0;
    for (int i = 2; i < n; i += 7)
        for (int j = i + 2; j < n; j += 5) {
            const double u = i * h, v = j * h;
            const double D = (K.at(i + 1, j + 1) - K.at(i + 1, j - 1) - K.at(i - 1, j + 1) +
                              K.at(i - 1, j - 1)) /
                             (4.0 * h * h);
            const double rhs = (qi(v + u) - qj(v - u)) * K.at(i, j);
            worst = std::max(worst, std::abs(D - rhs) / (1.0 + std::abs(rhs)));
        }
    CHECK(worst <= 5e-3);
}

TEST_CASE("kernel vanishes on v = a and value_uv clamps as documented") {
    const Potential qi = make_zero(1.0, 64);
    const Potential qj = make_sine(0.8, 3, 1.0, 64);
    const KernelGrid K = solve_kernel(qi, qj, {});
    for (int i = 0; i <= 64; ++i) CHECK(K.at(i, 64) == 0.0);
    CHECK(K.value_uv(0.3, 1.5) == 0.0);
    CHECK(K.value_uv(0.25, 0.5) == doctest::Approx(K.value_xt(0.25, 0.75)).epsilon(1e-14));
    const auto edge = K.edge_x0();
    REQUIRE(static_cast<int>(edge.size()) == 65);
    for (int j = 0; j <= 64; ++j) CHECK(edge[j] == K.at(j, j));
}

TEST_CASE("transformation identity: free to dressed, pair, and inverse kernels") {
    const double a = 1.0;
    const int n = 256;
    const Potential q0 = make_zero(a, n);
    const Potential q1 = make_bump(0.5, 0.5, 0.3, a, n);
    const Potential q2 = make_sine(0.5, 2, a, n);

    SUBCASE("K0 dresses the free exponential") {
        const KernelGrid K = solve_K0(q1);
        CHECK(transform_residual(q0, q1, K) <= 2e-4);
    }
    SUBCASE("K12 maps between the pair") {
        const KernelGrid K = solve_K12(q1, q2);
        CHECK(transform_residual(q1, q2, K) <= 2e-4);
    }
    SUBCASE("K10 undresses back to the free solution") {
        const KernelGrid K = inverse_kernel_K10(q1);
        CHECK(transform_residual(q1, q0, K) <= 2e-4);
    }
}

TEST_CASE("edge-data solve reproduces the forward solution from its boundary") {
    const double a = 1.0;
    const int n = 192;
    const Potential q1 = make_constant(0.4, a, n);
    const Potential q2 = make_bump(0.7, 0.45, 0.3, a, n);
    const KernelGrid K = solve_K12(q1, q2);
    GoursatInfo info;
    const KernelGrid G = goursat_from_boundary(K.edge_x0(), q1, q2, {}, &info);
    CHECK(info.converged);
    double worst = 0.0;
    for (int i = 0; i <= n; ++i)
        for (int j = i; j <= n; ++j) worst = std::max(worst, std::abs(K.at(i, j) - G.at(i, j)));
    CHECK(worst <= 1e-7);
}

TEST_CASE("a-priori kernel and H-derivative bounds hold on the solved grids") {
    const double a = 1.0;
    const int n = 128;
    const std::vector<std::pair<Potential, Potential>> pairs = {
        {make_zero(a, n), make_constant(0.9, a, n)},
        {make_zero(a, n), make_bump(0.8, 0.5, 0.4, a, n)},
        {make_constant(0.3, a, n), make_sine(0.5, 2, a, n)},
        {make_bump(0.5, 0.4, 0.3, a, n), make_bump(0.4, 0.6, 0.3, a, n)},
        {make_sine(0.6, 1, a, n), make_constant(-0.5, a, n)},
    };
    for (const auto& [qi, qj] : pairs) {
        const KernelGrid K = solve_kernel(qi, qj, {});
        const KernelBoundReport kb = verify_kernel_bounds(qi, qj, K);
        CHECK(kb.all_within());
        for (const auto& c : kb.checks) {
            CHECK(c.violations == 0);
            CHECK(c.samples > 0);
        }
        const KernelBoundReport hb = verify_H_derivative_bounds(qi, qj, K);
        CHECK(hb.all_within());
        for (const auto& c : hb.checks) {
            CHECK(c.violations == 0);
            CHECK(c.samples > 0);
        }
    }
}

TEST_CASE("Picard terms decay under the factorial envelope") {
    const double a = 1.0;
    const int n = 128;
    const Potential qi = make_sine(0.9, 2, a, n);
    const Potential qj = make_constant(0.8, a, n);
    GoursatInfo info;
    solve_kernel(qi, qj, {}, &info);
    REQUIRE(info.term_sup.size() >= 3);
    const double qm = std::max(norm_l1(qi), norm_l1(qj));
    const double free_sup = info.term_sup[0];
    double fact = 1.0;
    for (std::size_t k = 1; k < info.term_sup.size(); ++k) {
        fact *= 2.0 * a * qm / static_cast<double>(k);
        CHECK(info.term_sup[k] <= free_sup * fact * (1.0 + 1e-9) + 1e-300);
    }
    CHECK(info.converged);
    CHECK(info.tol_used > 0.0);
}

TEST_CASE("auto tolerance sentinel and explicit tolerance are both honored") {
    const Potential qi = make_zero(1.0, 64);
    const Potential qj = make_constant(0.5, 1.0, 64);
    GoursatInfo ia, ib;
    solve_kernel(qi, qj, {}, &ia);
    GoursatConfig cfg;
    cfg.tol = 1e-6;
    solve_kernel(qi, qj, cfg, &ib);
    CHECK(ia.tol_used > 0.0);
    CHECK(ib.tol_used == doctest::Approx(1e-6));
    CHECK(ib.iterations <= ia.iterations);
}
