#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "resinv/oscillatory.hpp"

#include <cmath>
#include <complex>
#include <vector>

using namespace resinv;
using cd = std::complex<double>;

namespace {

// int_0^h s^k e^{mu s} ds by 10k-point midpoint rule (slow, unambiguous)
cd moment_brute(cd mu, double h, int k) {
    cd acc = 0.0;
    const int m = 10000;
    for (int j = 0; j < m; ++j) {
        const double s = h * (j + 0.5) / m;
        acc += std::pow(s, k) * std::exp(mu * s) * (h / m);
    }
    return acc;
}

} // namespace

TEST_CASE("power_exp_moments against brute force, including near mu = 0") {
    for (cd mu : {cd(0.0, 0.0), cd(1e-9, 0.0), cd(0.0, 1e-8), cd(2.0, -3.0), cd(0.0, 40.0),
                  cd(-5.0, 25.0)}) {
        for (double h : {0.1, 0.015625}) {
            const auto m = power_exp_moments(mu, h);
            for (int k = 0; k <= 3; ++k) {
                const cd ref = moment_brute(mu, h, k);
                CHECK(std::abs(m[k] - ref) <= 1e-9 * (1.0 + std::abs(ref)));
            }
        }
    }
}

TEST_CASE("cubic rule integrates smooth functions against fast oscillators") {
    // f(s) = cos(3 s) e^{-s} on [0, 2], dense samples, exact transform by
    // direct fine quadrature; compare at several w including |w| h >> 1
    const int n = 257;
    const double s0 = 0.0, h = 2.0 / (n - 1);
    std::vector<cd> f(n);
    for (int i = 0; i < n; ++i) {
        const double s = s0 + i * h;
        f[i] = std::cos(3.0 * s) * std::exp(-s);
    }
    const SampledExpIntegrand g = prepare_exp_integrand(f, s0, h, 3);
    for (cd w : {cd(0.0, 0.0), cd(0.0, 5.0), cd(0.0, -90.0), cd(1.0, 30.0), cd(-0.5, -200.0)}) {
        cd ref = 0.0;
        const int m = 4000000;
        for (int j = 0; j < m; ++j) {
            const double s = s0 + 2.0 * (j + 0.5) / m;
            ref += std::cos(3.0 * s) * std::exp(-s) * std::exp(w * s) * (2.0 / m);
        }
        const cd got = evaluate_exp_integral(g, w);
        CHECK(std::abs(got - ref) <= 2e-8 * (1.0 + std::abs(ref)));
    }
}

TEST_CASE("order 1 converges at second order, order 3 at fourth") {
    auto err_at = [&](int n, int order) {
        const double h = 1.0 / (n - 1);
        std::vector<cd> f(n);
        for (int i = 0; i < n; ++i) f[i] = std::exp(-2.0 * i * h);
        // exact: int_0^1 e^{-2s} e^{iws} ds with w = 7
        const cd w(0.0, 7.0);
        const cd mu = w - 2.0;
        const cd ref = (std::exp(mu) - 1.0) / mu;
        return std::abs(sampled_exp_integral(f, 0.0, h, w, order) - ref);
    };
    const double r1 = err_at(33, 1) / err_at(65, 1);
    const double r3 = err_at(33, 3) / err_at(65, 3);
    CHECK(r1 > 3.0);  // ~4 for O(h^2)
    CHECK(r1 < 5.5);
    CHECK(r3 > 11.0); // ~16 for O(h^4)
}

TEST_CASE("real overload matches the complex one") {
    std::vector<double> fr{0.0, 0.5, 1.0, 0.25, -0.5, 0.0, 1.5, 2.0, 1.0};
    std::vector<cd> fc(fr.begin(), fr.end());
    const cd w(0.3, -11.0);
    const cd a = sampled_exp_integral(fr, -1.0, 0.25, w);
    const cd b = sampled_exp_integral(fc, -1.0, 0.25, w);
    CHECK(std::abs(a - b) == 0.0);
}

TEST_CASE("polynomials up to the stencil order are integrated exactly") {
    // f(s) = s^3 is reproduced exactly by the cubic stencil: any w gives the
    // exact transform up to roundoff
    const int n = 9;
    const double h = 0.5;
    std::vector<cd> f(n);
    for (int i = 0; i < n; ++i) {
        const double s = i * h;
        f[i] = s * s * s;
    }
    const cd w(0.0, 2.0);
    cd ref = 0.0;
    const int m = 2000000;
    for (int j = 0; j < m; ++j) {
        const double s = 4.0 * (j + 0.5) / m;
        ref += s * s * s * std::exp(w * s) * (4.0 / m);
    }
    CHECK(std::abs(sampled_exp_integral(f, 0.0, h, w) - ref) <= 1e-7);
}
