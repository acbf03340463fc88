#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "resinv/jost.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include "oracle_helpers.hpp"

using namespace resinv;
using cd = std::complex<double>;

TEST_CASE("closed-form well agrees with a fine independent integration") {
    for (double c : {0.75, -2.0}) {
        auto q = [&](double) { return c; };
        for (cd z : {cd(3, 0), cd(0, 2), cd(-2, -1), cd(5, -3), cd(0.3, 0.1)}) {
            const cd ref = oracle::rk4_psi(q, 1.0, z, 20000);
            const cd got = oracle::well_psi(c, 1.0, z);
            CHECK(std::abs(got - ref) <= 1e-9 * (1.0 + std::abs(ref)));
        }
    }
}

TEST_CASE("evaluator reproduces the constant well on both routes") {
    const double c = 0.75;
    const JostEvaluator ev(make_constant(c, 1.0, 512));
    const std::vector<cd> pts = {cd(1, 0),  cd(4, 0),   cd(-3, 0), cd(0, 2),  cd(0, -2),
                                 cd(2, -3), cd(-5, -1), cd(7, 2),  cd(-6, 4), cd(0.2, 0.1)};
    for (cd z : pts) {
        const cd ref = oracle::well_psi(c, 1.0, z);
        const double scale = 1.0 + std::abs(ref);
        CHECK(std::abs(ev.psi(z, JostRoute::ode) - ref) <= 1e-7 * scale);
        CHECK(std::abs(ev.psi(z, JostRoute::kernel) - ref) <= 1e-7 * scale);
    }
}

TEST_CASE("the two evaluation routes agree on a generic potential") {
    const Potential q = make_family("bump(0.5,0.4,0.25)+sine(0.3,2)", 1.0, 512);
    const JostEvaluator ev(q);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        const double th = 2.0 * M_PI * k / 50.0;
        const cd z = 0.5 + 14.0 * (k + 1.0) / 50.0 * std::exp(cd(0, th));
        if (std::abs(z.imag()) > 10.0) continue;
        const cd a = ev.psi(z, JostRoute::ode);
        const cd b = ev.psi(z, JostRoute::kernel);
        worst = std::max(worst, std::abs(a - b) / (1.0 + std::abs(a)));
    }
    // Two independent discretizations (RK back-integration vs kernel quadrature)
    // drift apart by ~1.3e-6 near |Im z| = 10; gate with a 3x margin.
    CHECK(worst <= 4e-6);
}

TEST_CASE("conjugate symmetry psi(-conj z) = conj(psi(z))") {
    const Potential q = make_family("bump(0.6,0.5,0.3)", 1.0, 256);
    const JostEvaluator ev(q);
    for (cd z : {cd(3, 1), cd(2, -2), cd(-4, 3), cd(0.5, -0.25)}) {
        for (JostRoute route : {JostRoute::ode, JostRoute::kernel}) {
            const cd a = ev.psi(-std::conj(z), route);
            const cd b = std::conj(ev.psi(z, route));
            CHECK(std::abs(a - b) <= 1e-12 * (1.0 + std::abs(b)));
        }
    }
}

TEST_CASE("z-derivative matches central differences") {
    const Potential q = make_family("constant(0.4)+sine(0.2,1)", 1.0, 512);
    const JostEvaluator ev(q);
    for (cd z : {cd(2, 0), cd(1, -2), cd(-3, 1), cd(0, 3)}) {
        const double h = 1e-4 * (1.0 + std::abs(z));
        const cd fd = (ev.psi(z + h) - ev.psi(z - h)) / (2.0 * h);
        const cd an = ev.dpsi(z);
        CHECK(std::abs(fd - an) <= 1e-6 * (1.0 + std::abs(an)));
        const auto [p, dp] = ev.both(z);
        CHECK(std::abs(p - ev.psi(z)) == 0.0);
        CHECK(std::abs(dp - an) <= 1e-12 * (1.0 + std::abs(an)));
    }
}

TEST_CASE("jost_solution carries a consistent spatial derivative") {
    const Potential q = make_bump(0.7, 0.5, 0.3, 1.0, 256);
    const cd z(2.0, -1.0);
    const double x = 0.3, h = 1e-5;
    const auto [y, yp] = jost_solution(q, z, x);
    const auto [yp_, d2] = jost_solution(q, z, x); // same call, deterministic
    CHECK(std::abs(y - yp_) == 0.0);
    (void)d2;
    const auto [ya, da] = jost_solution(q, z, x + h);
    const auto [yb, db] = jost_solution(q, z, x - h);
    (void)da;
    (void)db;
    CHECK(std::abs((ya - yb) / (2.0 * h) - yp) <= 1e-5 * (1.0 + std::abs(yp)));
    // at x = 0 the value is the Jost function itself
    const auto [y0, y0p] = jost_solution(q, z, 0.0);
    (void)y0p;
    CHECK(std::abs(y0 - jost_function(q, z, JostRoute::ode)) <= 1e-12 * (1.0 + std::abs(y0)));
}

TEST_CASE("half-plane bounds hold on sample grids") {
    for (const char* spec : {"constant(0.8)", "bump(0.9,0.5,0.4)+sine(0.2,3)"}) {
        const Potential q = make_family(spec, 1.0, 256);
        std::vector<cd> samples;
        for (int k = 1; k <= 60; ++k) {
            const double r = 0.5 + 19.5 * k / 60.0;
            samples.push_back(r * std::exp(cd(0, M_PI * (k % 13) / 13.0)));
        }
        for (int k = 1; k <= 10; ++k) samples.push_back(cd(0, 0.7 * k));
        const JostBoundReport rep = verify_halfplane_bounds(q, samples);
        CHECK(rep.all_within());
        for (const auto& c : rep.checks) {
            CHECK(c.violations == 0);
            CHECK(c.samples > 0);
        }
    }
}

TEST_CASE("beyond the imaginary cutoff the default route is the ODE one") {
    const Potential q = make_constant(0.5, 1.0, 256);
    const JostEvaluator ev(q);
    const cd z(1.0, ev.im_cutoff() + 2.0);
    CHECK(std::abs(ev.psi(z) - ev.psi(z, JostRoute::ode)) == 0.0);
    CHECK(std::abs(ev.dpsi(z) - ev.dpsi(z, JostRoute::ode)) == 0.0);
}

TEST_CASE("free-function wrappers agree with the evaluator") {
    const Potential q = make_sine(0.4, 2, 1.0, 256);
    const JostEvaluator ev(q);
    const cd z(2.5, -0.5);
    CHECK(std::abs(jost_function(q, z, JostRoute::kernel) - ev.psi(z, JostRoute::kernel)) <=
          1e-12);
    CHECK(std::abs(jost_derivative(q, z) - ev.dpsi(z)) <= 1e-12 * (1.0 + std::abs(ev.dpsi(z))));
}
