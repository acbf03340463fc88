#pragma once

#include <optional>
#include <string>
#include <vector>

namespace resinv {

/// Lebesgue exponent that is either finite (>= 1) or infinity.  Infinity is a
/// distinct state of the type, never a sentinel value of the stored float.
class Lp {
public:
    static Lp finite(double p);
    static Lp infinity() { return Lp(true, 0.0); }

    bool is_inf() const { return inf_; }
    double value() const;              // throws when infinite
    double inv() const { return inf_ ? 0.0 : 1.0 / p_; }          // 1/p
    double conj_frac() const { return inf_ ? 1.0 : (p_ - 1.0) / p_; } // (p-1)/p
    bool operator==(const Lp&) const = default;

private:
    Lp(bool inf, double p) : inf_(inf), p_(p) {}
    bool inf_ = false;
    double p_ = 2.0;
};

/// Compactly supported potential sampled on the uniform mesh over [0, a].
/// The function it represents is the piecewise-linear interpolant of the
/// samples inside [0, a] and identically zero outside; every integral in the
/// library is exact for that function class.
struct Potential {
    double a = 1.0;
    int n_grid = 512;                 // cells; values holds n_grid + 1 samples
    std::vector<double> values;

    double h() const { return a / n_grid; }
    double operator()(double x) const;
    void validate() const;            // a > 0, n_grid >= 2, size, finiteness
    bool same_grid(const Potential& o) const;
};

Potential make_zero(double a, int n_grid);
Potential make_constant(double c, double a, int n_grid);
/// Smooth bump c * exp(1 - 1/(1-s^2)), s = (x-center)/width; peak value c.
/// Support [center-width, center+width] must sit inside [0, a].
Potential make_bump(double c, double center, double width, double a, int n_grid);
/// c * sin(k pi x / a) on [0, a].
Potential make_sine(double c, int k, double a, int n_grid);
/// Parses "zero", "constant(c)", "bump(c,center,width)", "sine(c,k)" and
/// top-level sums of those joined by '+'.
Potential make_family(const std::string& spec, double a, int n_grid);
Potential add(const Potential& p, const Potential& q);   // shared grid
Potential sub(const Potential& p, const Potential& q);

/// Tail mass sigma(x) = integral_x^a |q|; zero for x >= a.
double sigma(const Potential& q, double x);
/// First moment of the tail: integral_x^a (t - x) |q(t)| dt, which equals
/// integral_x^a sigma(s) ds.
double sigma_bar(const Potential& q, double x);
double norm_l1(const Potential& q);
double norm_lp(const Potential& q, const Lp& p);
/// Central-difference derivative samples (one-sided at the endpoints).
Potential fd_derivative(const Potential& q);

/// A-priori data the stability estimates are phrased in.
struct AprioriParams {
    double a = 1.0;
    double Q1 = 1.0;                  // L1 bound on each potential
    Lp p = Lp::finite(2.0);           // difference-norm exponent, > 1
    double Dp = 1.0;                  // ||q2 - q1||_p <= Dp
    double delta = 0.1;               // window-shrink parameter in (0, 1)
    std::optional<Lp> r;              // derivative exponent (> 1), pointwise bounds
    std::optional<double> Dr_prime;   // ||(q2 - q1)'||_r <= Dr_prime
    std::optional<double> A_inf;      // ||f||_inf <= A_inf (||f||_p + ||f'||_r)
    double R1 = 0.0;                  // external thresholds; 0 = max(R3, 10)
    double R2 = 0.0;

    double A_contour() const;         // 1 + Q1 e^{a Q1}
    bool has_derivative_data() const { return r && Dr_prime && A_inf; }
    void validate() const;
};

struct CheckItem {
    std::string name;
    bool pass = true;
    double measured = 0.0;
    double allowed = 0.0;
};

struct ValidationReport {
    std::vector<CheckItem> checks;
    bool all_pass() const;
};

/// Checks the pair against the a-priori data: support, L1 bounds, difference
/// norm, and (when r is present) the derivative norm and equal means.
ValidationReport validate_apriori(const Potential& q1, const Potential& q2,
                                  const AprioriParams& ap);

} // namespace resinv
