#include "resinv/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace resinv {

namespace {

// Exact integral of |f0 + (f1-f0) s/L| * (w0 + (w1-w0) s/L) over s in [0, L].
// Both factors linear; splits at the sign crossing of the first.
double abs_linear_times_linear(double f0, double f1, double w0, double w1, double L) {
    if (L <= 0.0) return 0.0;
    auto piece = [](double g0, double g1, double u0, double u1, double len) {
        // signed integral of (g0 + cs)(u0 + ds), s in [0, len]
        if (len <= 0.0) return 0.0;
        double c = (g1 - g0) / len;
        double d = (u1 - u0) / len;
        return g0 * u0 * len + (g0 * d + c * u0) * len * len / 2.0
             + c * d * len * len * len / 3.0;
    };
    if ((f0 >= 0.0 && f1 >= 0.0) || (f0 <= 0.0 && f1 <= 0.0)) {
        double s = (f0 + f1 >= 0.0) ? 1.0 : -1.0;
        if (f0 == 0.0 && f1 == 0.0) return 0.0;
        return s * piece(f0, f1, w0, w1, L);
    }
    double sc = L * f0 / (f0 - f1); // crossing point
    double wc = w0 + (w1 - w0) * (sc / L);
    double s0 = (f0 >= 0.0) ? 1.0 : -1.0;
    return s0 * piece(f0, 0.0, w0, wc, sc) - s0 * piece(0.0, f1, wc, w1, L - sc);
}

} // namespace

double pwl_eval(double a, const std::vector<double>& v, double x) {
    const int n = static_cast<int>(v.size()) - 1;
    if (n < 1 || x < 0.0 || x > a) return 0.0;
    if (x == a) return v[static_cast<std::size_t>(n)];
    double h = a / n;
    int i = std::min(static_cast<int>(x / h), n - 1);
    double s = x / h - i;
    return v[i] * (1.0 - s) + v[i + 1] * s;
}

// Walks the mesh cells intersecting [x0, x1] and hands each (possibly partial)
// cell with its endpoint values to fn(t0, t1, f0, f1).
template <typename Fn>
static void for_each_subcell(double a, const std::vector<double>& v, double x0, double x1, Fn&& fn) {
    const int n = static_cast<int>(v.size()) - 1;
    if (n < 1) return;
    x0 = std::max(x0, 0.0);
    x1 = std::min(x1, a);
    if (x1 <= x0) return;
    double h = a / n;
    int i0 = std::min(static_cast<int>(x0 / h), n - 1);
    int i1 = std::min(static_cast<int>(x1 / h), n - 1);
    for (int i = i0; i <= i1; ++i) {
        double t0 = std::max(x0, i * h);
        double t1 = std::min(x1, (i + 1) * h);
        if (t1 <= t0) continue;
        double s0 = t0 / h - i, s1 = t1 / h - i;
        double f0 = v[i] * (1.0 - s0) + v[i + 1] * s0;
        double f1 = v[i] * (1.0 - s1) + v[i + 1] * s1;
        fn(t0, t1, f0, f1);
    }
}

double pwl_integral(double a, const std::vector<double>& v, double x0, double x1) {
    double acc = 0.0;
    for_each_subcell(a, v, x0, x1, [&](double t0, double t1, double f0, double f1) {
        acc += 0.5 * (f0 + f1) * (t1 - t0);
    });
    return acc;
}

double pwl_abs_integral(double a, const std::vector<double>& v, double x0, double x1) {
    double acc = 0.0;
    for_each_subcell(a, v, x0, x1, [&](double t0, double t1, double f0, double f1) {
        acc += abs_linear_times_linear(f0, f1, 1.0, 1.0, t1 - t0);
    });
    return acc;
}

double pwl_abs_weighted_tail(double a, const std::vector<double>& v, double x) {
    if (x >= a) return 0.0;
    double acc = 0.0;
    for_each_subcell(a, v, std::max(x, 0.0), a, [&](double t0, double t1, double f0, double f1) {
        acc += abs_linear_times_linear(f0, f1, t0 - x, t1 - x, t1 - t0);
    });
    return acc;
}

double pwl_abs_pow_integral(double a, const std::vector<double>& v, double p) {
    if (p < 1.0) throw std::invalid_argument("pwl_abs_pow_integral: p < 1");
    // Gauss-Legendre 4 on each cell.
    static const double gx[4] = {-0.8611363115940526, -0.3399810435848563,
                                 0.3399810435848563, 0.8611363115940526};
    static const double gw[4] = {0.3478548451374538, 0.6521451548625461,
                                 0.6521451548625461, 0.3478548451374538};
    const int n = static_cast<int>(v.size()) - 1;
    double h = a / n, acc = 0.0;
    for (int i = 0; i < n; ++i) {
        double cacc = 0.0;
        for (int g = 0; g < 4; ++g) {
            double s = 0.5 * (gx[g] + 1.0); // in [0,1]
            double f = v[i] * (1.0 - s) + v[i + 1] * s;
            cacc += gw[g] * std::pow(std::abs(f), p);
        }
        acc += cacc * 0.5 * h;
    }
    return acc;
}

double trapezoid(const std::vector<double>& f, int i0, int i1, double h) {
    if (i1 <= i0) return 0.0;
    double s = 0.0;
    for (int i = i0; i <= i1; ++i) s += f[i];
    return h * (s - 0.5 * (f[i0] + f[i1]));
}

} // namespace resinv
