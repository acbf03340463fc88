#include "resinv/potential.hpp"

#include "resinv/grid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace resinv {

Lp Lp::finite(double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("Lp::finite: exponent must be >= 1");
    return Lp(false, p);
}

double Lp::value() const {
    if (inf_) throw std::logic_error("Lp::value called on the infinite exponent");
    return p_;
}

double Potential::operator()(double x) const { return pwl_eval(a, values, x); }

void Potential::validate() const {
    if (!(a > 0.0)) throw std::invalid_argument("Potential: a must be positive");
    if (n_grid < 2) throw std::invalid_argument("Potential: n_grid must be >= 2");
    if (values.size() != static_cast<std::size_t>(n_grid) + 1)
        throw std::invalid_argument("Potential: values must hold n_grid + 1 samples");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("Potential: non-finite sample");
}

bool Potential::same_grid(const Potential& o) const {
    return a == o.a && n_grid == o.n_grid;
}

Potential make_zero(double a, int n_grid) {
    Potential q{a, n_grid, std::vector<double>(n_grid + 1, 0.0)};
    q.validate();
    return q;
}

Potential make_constant(double c, double a, int n_grid) {
    Potential q{a, n_grid, std::vector<double>(n_grid + 1, c)};
    q.validate();
    return q;
}

Potential make_bump(double c, double center, double width, double a, int n_grid) {
    if (!(width > 0.0)) throw std::invalid_argument("bump: width must be positive");
    if (center - width < -1e-12 || center + width > a + 1e-12)
        throw std::invalid_argument("bump: support must sit inside [0, a]");
    Potential q = make_zero(a, n_grid);
    for (int i = 0; i <= n_grid; ++i) {
        double s = (i * q.h() - center) / width;
        if (std::abs(s) < 1.0) q.values[i] = c * std::exp(1.0 - 1.0 / (1.0 - s * s));
    }
    return q;
}

Potential make_sine(double c, int k, double a, int n_grid) {
    Potential q = make_zero(a, n_grid);
    for (int i = 0; i <= n_grid; ++i)
        q.values[i] = c * std::sin(k * std::numbers::pi * i / n_grid);
    return q;
}

namespace {

std::vector<double> parse_args(const std::string& s, std::size_t open, std::size_t close) {
    std::vector<double> out;
    std::string body = s.substr(open + 1, close - open - 1);
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        out.push_back(v);
    }
    return out;
}

Potential make_single(const std::string& spec, double a, int n_grid) {
    auto fail = [&]() -> Potential {
        throw std::invalid_argument("unknown potential family: '" + spec + "'");
    };
    if (spec == "zero") return make_zero(a, n_grid);
    std::size_t open = spec.find('(');
    std::size_t close = spec.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open) return fail();
    std::string name = spec.substr(0, open);
    std::vector<double> args = parse_args(spec, open, close);
    if (name == "constant" && args.size() == 1) return make_constant(args[0], a, n_grid);
    if (name == "bump" && args.size() == 3) return make_bump(args[0], args[1], args[2], a, n_grid);
    if (name == "sine" && args.size() == 2)
        return make_sine(args[0], static_cast<int>(std::lround(args[1])), a, n_grid);
    return fail();
}

} // namespace

Potential make_family(const std::string& spec, double a, int n_grid) {
    // split on top-level '+' (no nesting in the grammar beyond parentheses)
    std::vector<std::string> parts;
    int depth = 0;
    std::string cur;
    for (char ch : spec) {
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (ch == '+' && depth == 0) { parts.push_back(cur); cur.clear(); continue; }
        if (!std::isspace(static_cast<unsigned char>(ch))) cur.push_back(ch);
    }
    parts.push_back(cur);
    Potential q = make_single(parts[0], a, n_grid);
    for (std::size_t i = 1; i < parts.size(); ++i) q = add(q, make_single(parts[i], a, n_grid));
    return q;
}

Potential add(const Potential& p, const Potential& q) {
    if (!p.same_grid(q)) throw std::invalid_argument("add: grids differ");
    Potential out = p;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += q.values[i];
    return out;
}

Potential sub(const Potential& p, const Potential& q) {
    if (!p.same_grid(q)) throw std::invalid_argument("sub: grids differ");
    Potential out = p;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] -= q.values[i];
    return out;
}

double sigma(const Potential& q, double x) {
    if (x >= q.a) return 0.0;
    return pwl_abs_integral(q.a, q.values, std::max(x, 0.0), q.a);
}

double sigma_bar(const Potential& q, double x) {
    return pwl_abs_weighted_tail(q.a, q.values, std::max(x, 0.0));
}

double norm_l1(const Potential& q) { return sigma(q, 0.0); }

double norm_lp(const Potential& q, const Lp& p) {
    if (p.is_inf()) {
        double m = 0.0;
        for (double v : q.values) m = std::max(m, std::abs(v));
        return m;
    }
    double pv = p.value();
    if (pv == 1.0) return norm_l1(q);
    return std::pow(pwl_abs_pow_integral(q.a, q.values, pv), 1.0 / pv);
}

Potential fd_derivative(const Potential& q) {
    Potential d = q;
    const int n = q.n_grid;
    const double h = q.h();
    d.values[0] = (q.values[1] - q.values[0]) / h;
    for (int i = 1; i < n; ++i) d.values[i] = (q.values[i + 1] - q.values[i - 1]) / (2.0 * h);
    d.values[n] = (q.values[n] - q.values[n - 1]) / h;
    return d;
}

double AprioriParams::A_contour() const { return 1.0 + Q1 * std::exp(a * Q1); }

void AprioriParams::validate() const {
    if (!(a > 0.0)) throw std::invalid_argument("AprioriParams: a must be positive");
    if (!(Q1 >= 0.0)) throw std::invalid_argument("AprioriParams: Q1 must be nonnegative");
    if (!p.is_inf() && !(p.value() > 1.0))
        throw std::invalid_argument("AprioriParams: p must be > 1 or infinity");
    if (!(Dp >= 0.0)) throw std::invalid_argument("AprioriParams: Dp must be nonnegative");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("AprioriParams: delta must lie in (0, 1)");
    if (r && !r->is_inf() && !(r->value() > 1.0))
        throw std::invalid_argument("AprioriParams: r must be > 1 or infinity");
    if ((r.has_value() != Dr_prime.has_value()))
        throw std::invalid_argument("AprioriParams: r and Dr_prime come together");
    if (Dr_prime && !(*Dr_prime >= 0.0))
        throw std::invalid_argument("AprioriParams: Dr_prime must be nonnegative");
    if (A_inf && !(*A_inf > 0.0))
        throw std::invalid_argument("AprioriParams: A_inf must be positive");
}

bool ValidationReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

ValidationReport validate_apriori(const Potential& q1, const Potential& q2,
                                  const AprioriParams& ap) {
    q1.validate();
    q2.validate();
    ap.validate();
    if (!q1.same_grid(q2)) throw std::invalid_argument("validate_apriori: grids differ");
    if (q1.a != ap.a) throw std::invalid_argument("validate_apriori: interval length mismatch");

    ValidationReport rep;
    auto push = [&](std::string name, double measured, double allowed) {
        rep.checks.push_back({std::move(name), measured <= allowed, measured, allowed});
    };
    push("support_q1", q1.a, ap.a);
    push("support_q2", q2.a, ap.a);
    push("l1_q1", norm_l1(q1), ap.Q1);
    push("l1_q2", norm_l1(q2), ap.Q1);
    Potential diff = sub(q2, q1);
    push("diff_lp", norm_lp(diff, ap.p), ap.Dp);
    if (ap.r) {
        push("diff_deriv_lr", norm_lp(fd_derivative(diff), *ap.r),
             ap.Dr_prime.value_or(0.0));
        double m1 = pwl_integral(q1.a, q1.values, 0.0, q1.a);
        double m2 = pwl_integral(q2.a, q2.values, 0.0, q2.a);
        push("equal_means", std::abs(m2 - m1), 1e-8 * (1.0 + ap.Q1));
    }
    return rep;
}

} // namespace resinv
