#include "resinv/oscillatory.hpp"

#include <cmath>
#include <stdexcept>

namespace resinv {

using cd = std::complex<double>;

std::array<cd, 4> power_exp_moments(cd mu, double h) {
    std::array<cd, 4> m;
    if (std::abs(mu) * h < 0.5) {
        // M_k = sum_{j>=0} mu^j h^{k+j+1} / (j! (k+j+1)); terms fall at least
        // geometrically with ratio 1/2, so 40 terms reach full precision
        for (int k = 0; k < 4; ++k) {
            cd term = std::pow(h, k + 1); // mu^j h^{k+j+1} / j!
            cd sum = term / double(k + 1);
            for (int j = 1; j <= 40; ++j) {
                term *= mu * h / double(j);
                cd add = term / double(k + j + 1);
                sum += add;
                if (std::abs(add) < 1e-18 * std::abs(sum)) break;
            }
            m[k] = sum;
        }
        return m;
    }
    const cd e = std::exp(mu * h);
    m[0] = (e - 1.0) / mu;
    double hk = 1.0;
    for (int k = 1; k < 4; ++k) {
        hk *= h;
        m[k] = (hk * e - double(k) * m[k - 1]) / mu;
    }
    return m;
}

namespace {

// Monomial coefficients (in x units) of the cubic through values at
// x = shift, shift+1, shift+2, shift+3: forward Newton form, then recentering.
std::array<cd, 4> cubic_coeffs(const cd& f0, const cd& f1, const cd& f2, const cd& f3,
                               int shift) {
    cd d1 = f1 - f0;
    cd d2 = f2 - 2.0 * f1 + f0;
    cd d3 = f3 - 3.0 * f2 + 3.0 * f1 - f0;
    cd b0 = f0;
    cd b1 = d1 - 0.5 * d2 + d3 / 3.0;
    cd b2 = 0.5 * (d2 - d3);
    cd b3 = d3 / 6.0;
    double s = shift;
    return {b0 - s * b1 + s * s * b2 - s * s * s * b3, b1 - 2.0 * s * b2 + 3.0 * s * s * b3,
            b2 - 3.0 * s * b3, b3};
}

} // namespace

SampledExpIntegrand prepare_exp_integrand(const std::vector<cd>& f, double s0, double h,
                                          int order) {
    if (!(h > 0.0) || !std::isfinite(h) || !std::isfinite(s0))
        throw std::invalid_argument("prepare_exp_integrand: bad grid");
    if (order != 1 && order != 3) throw std::invalid_argument("prepare_exp_integrand: order");
    const int n = static_cast<int>(f.size()) - 1;
    if (n < 1 || (order == 3 && n < 3))
        throw std::invalid_argument("prepare_exp_integrand: too few samples");

    SampledExpIntegrand g;
    g.s0 = s0;
    g.h = h;
    g.cells.resize(n);
    for (int j = 0; j < n; ++j) {
        if (order == 1) {
            g.cells[j] = {f[j], f[j + 1] - f[j], cd(0.0), cd(0.0)};
        } else {
            int b = std::min(std::max(j - 1, 0), n - 3);
            g.cells[j] = cubic_coeffs(f[b], f[b + 1], f[b + 2], f[b + 3], b - j);
        }
    }
    return g;
}

cd evaluate_exp_integral(const SampledExpIntegrand& g, cd w) {
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
        throw std::invalid_argument("evaluate_exp_integral: non-finite exponent");
    const double h = g.h;
    // moments scaled to x units: m_k = M_k / h^k, shared by every cell
    std::array<cd, 4> m = power_exp_moments(w, h);
    double hk = 1.0;
    for (int k = 1; k < 4; ++k) {
        hk *= h;
        m[k] /= hk;
    }
    const cd step = std::exp(w * h);
    cd phase = 1.0; // e^{w * (s_j - s0)}, resynced periodically against drift
    cd total = 0.0;
    for (std::size_t j = 0; j < g.cells.size(); ++j) {
        if (j % 256 == 0) phase = std::exp(w * (double(j) * h));
        const auto& c = g.cells[j];
        total += phase * (c[0] * m[0] + c[1] * m[1] + c[2] * m[2] + c[3] * m[3]);
        phase *= step;
    }
    return total * std::exp(w * g.s0);
}

cd sampled_exp_integral(const std::vector<cd>& f, double s0, double h, cd w, int order) {
    return evaluate_exp_integral(prepare_exp_integrand(f, s0, h, order), w);
}

cd sampled_exp_integral(const std::vector<double>& f, double s0, double h, cd w, int order) {
    std::vector<cd> fc(f.begin(), f.end());
    return evaluate_exp_integral(prepare_exp_integrand(fc, s0, h, order), w);
}

} // namespace resinv
