#include "resinv/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace resinv {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;
const double kInf = std::numeric_limits<double>::infinity();

// Below threshold the log arguments can dip under 1; flooring the log there
// keeps every entry finite, and the in_force flag marks the regime anyway.
double lnc(double x) { return x > 1.0 ? std::log(x) : 0.0; }

// Exponent fractions with their explicit p = infinity limits.
double frac_p_2p1(const Lp& p) { return p.is_inf() ? 0.5 : p.value() / (2.0 * p.value() - 1.0); }
double frac_p1_2p1(const Lp& p) {
    return p.is_inf() ? 0.5 : (p.value() - 1.0) / (2.0 * p.value() - 1.0);
}
double frac_2p1_3p2(const Lp& p) {
    return p.is_inf() ? 2.0 / 3.0 : (2.0 * p.value() - 1.0) / (3.0 * p.value() - 2.0);
}
double frac_p1_3p2(const Lp& p) {
    return p.is_inf() ? 1.0 / 3.0 : (p.value() - 1.0) / (3.0 * p.value() - 2.0);
}
double frac_p_3p2(const Lp& p) {
    return p.is_inf() ? 1.0 / 3.0 : p.value() / (3.0 * p.value() - 2.0);
}
double frac_p1sq_p3p2(const Lp& p) {
    if (p.is_inf()) return 1.0 / 3.0;
    double pv = p.value();
    return (pv - 1.0) * (pv - 1.0) / (pv * (3.0 * pv - 2.0));
}
double ratio_p_p1(const Lp& p) { return p.is_inf() ? 1.0 : p.value() / (p.value() - 1.0); }
double ratio_2p1_p1(const Lp& p) {
    return p.is_inf() ? 2.0 : (2.0 * p.value() - 1.0) / (p.value() - 1.0);
}
double ratio_2p1_p(const Lp& p) {
    return p.is_inf() ? 2.0 : (2.0 * p.value() - 1.0) / p.value();
}

struct ThresholdSet {
    double R1, R2, R3, R4, R0;
    bool r1_cfg, r2_cfg;
};

ThresholdSet eval_thresholds_impl(const AprioriParams& ap, double alpha) {
    const double a = ap.a, Q1 = ap.Q1;
    const double eaq = std::exp(a * Q1);
    ThresholdSet th;
    th.R3 = (a * Q1 * (1.0 + 2.0 * eaq * (kE + 1.0)) + std::log(2.0 * (a * Q1 + 1.0))) / (a * kE);
    th.r1_cfg = ap.R1 > 0.0;
    th.r2_cfg = ap.R2 > 0.0;
    th.R1 = th.r1_cfg ? ap.R1 : std::max(th.R3, 10.0);
    th.R2 = th.r2_cfg ? ap.R2 : std::max(th.R3, 10.0);
    th.R4 = std::max({th.R1, th.R3, std::pow(ap.A_contour(), 1.0 / alpha),
                      std::pow(3.0 / (kPi * a), 1.0 / alpha),
                      std::exp(std::numbers::ln2 / (1.0 - ap.delta - alpha))});
    const double lead = 2.0 * Q1 * eaq / kPi;
    double e2, e3;
    if (ap.Dp > 0.0 && lead > 0.0) {
        // the two sides of the window the minimizer theta0 must land in
        e2 = std::pow(lead / ap.Dp * ratio_p_p1(ap.p), 1.0 / alpha) *
             std::pow(a, -ratio_2p1_p(ap.p) / alpha);
        e3 = std::pow(1.0 / ratio_p_p1(ap.p), ratio_p_p1(ap.p) / alpha) *
             std::pow(2.0 / kPi, ratio_2p1_p1(ap.p) / alpha) *
             std::pow(ap.Dp / lead, ratio_p_p1(ap.p) / alpha);
    } else if (ap.Dp == 0.0) {
        e2 = kInf;
        e3 = 0.0;
    } else {
        e2 = 0.0;
        e3 = kInf;
    }
    th.R0 = std::max({th.R4, e2, e3});
    return th;
}

std::string provenance(const ThresholdSet& th) {
    std::string s = "R1 ";
    s += th.r1_cfg ? "configured" : "defaulted to max(R3, 10)";
    s += ", R2 ";
    s += th.r2_cfg ? "configured" : "defaulted to max(R3, 10)";
    return s;
}

struct PhiParts {
    double Phi, Phi_eps, tail_unnorm, phi;
};

PhiParts eval_phi_parts(double R, double eps, double alpha, const AprioriParams& ap) {
    const double a = ap.a, Q1 = ap.Q1;
    const double eaq = std::exp(a * Q1);
    const double Acon = 1.0 + Q1 * eaq;
    const double cf = ap.p.conj_frac();
    const double base = ap.Dp + 4.0 * std::pow(a, ap.p.inv()) * Q1 * Q1 * eaq;
    const double L3 = lnc(kPi * a * kE / 3.0 * std::pow(R, alpha));
    PhiParts out;
    const double t1 = 3.0 / kPi * base * std::pow(R, -alpha * cf) * std::pow(L3, cf);
    const double t2 = std::pow(R, alpha - 1.0 + ap.delta);
    const double t3 =
        2.0 * Acon * Q1 / kPi * std::exp(a * Q1 + 2.0 * a * Acon) * std::pow(R, -alpha);
    out.Phi = t1 + t2 + t3;
    out.phi = phi_alpha(R, eps, alpha, a);
    out.Phi_eps = 2.0 / kPi * std::exp(2.0 * a * Acon) * std::pow(R, alpha) * out.phi;
    out.tail_unnorm = 8.0 * kPi * t1; // same tail before the contour normalization
    return out;
}

struct Core2 {
    double alpha_star;
    ThresholdSet th;
    PhiParts ph;
    double Psi, Psi_eps, Omega, Omega_eps;
    double theta0, C0, C0_chi, chi, C0_term, psi_eps, total;
};

Core2 eval_core2(double R, double eps, const AprioriParams& ap) {
    const double a = ap.a, Q1 = ap.Q1;
    const double eaq = std::exp(a * Q1);
    const double Acon = 1.0 + Q1 * eaq;
    const double one_aq = 1.0 + a * Q1 * eaq;
    Core2 c;
    c.alpha_star = (1.0 - ap.delta) * frac_2p1_3p2(ap.p);
    c.th = eval_thresholds_impl(ap, c.alpha_star);
    c.ph = eval_phi_parts(R, eps, c.alpha_star, ap);
    const double Ralpha = std::pow(R, c.alpha_star);
    const double L2 = lnc(kPi * a * kE / 2.0 * Ralpha);
    c.Psi = Q1 * Q1 * std::exp(2.0 * a * Q1) / (kPi * Ralpha) * L2 + one_aq * c.ph.Phi;
    c.Psi_eps = one_aq * c.ph.Phi_eps;
    c.Omega = std::exp(2.0 * a * Q1) * (c.Psi + 2.0 * Q1 * Q1 * eaq / (kPi * Ralpha) * L2);
    c.Omega_eps = std::exp(2.0 * a * Q1) * c.Psi_eps;
    const double Dlead = 2.0 * Q1 * eaq / kPi / Ralpha;
    c.theta0 =
        ap.Dp > 0.0 ? std::pow(ratio_p_p1(ap.p) * Dlead / ap.Dp, frac_p_2p1(ap.p)) : kInf;
    c.C0 = 2.0 * (std::pow(ap.Dp, frac_p_2p1(ap.p)) *
                      std::pow(2.0 * Q1 * eaq / kPi, frac_p1_2p1(ap.p)) +
                  std::exp(2.0 * a * Q1) * one_aq);
    const double cf = ap.p.conj_frac();
    const double base = ap.Dp + 4.0 * std::pow(a, ap.p.inv()) * Q1 * Q1 * eaq;
    const double L3 = lnc(kPi * a * kE / 3.0 * Ralpha);
    const double c1 = 6.0 / kPi * std::exp(2.0 * a * Q1) * one_aq * base *
                      std::pow(R, -(1.0 - ap.delta) * frac_p1sq_p3p2(ap.p)) * std::pow(L3, cf);
    const double c2 = 4.0 / kPi * std::exp(3.0 * a * Q1 + 2.0 * a * Acon) * Q1 * one_aq * Acon *
                      std::pow(R, -(1.0 - ap.delta) * frac_p_3p2(ap.p));
    const double c3 = 2.0 / kPi * Q1 * Q1 * std::exp(3.0 * a * Q1) * (2.0 + eaq) * L2 *
                      std::pow(R, -(1.0 - ap.delta) * frac_p_3p2(ap.p));
    c.C0_chi = c1 + c2 + c3;
    c.chi = c.C0_chi / c.C0; // C0 >= 2 always
    c.C0_term = c.C0 * std::pow(R, -(1.0 - ap.delta) * frac_p1_3p2(ap.p));
    c.psi_eps =
        4.0 * std::exp(2.0 * a * Q1) * one_aq / kPi * std::exp(2.0 * a * Acon) * Ralpha * c.ph.phi;
    c.total = c.psi_eps + c.C0_term * (1.0 + c.chi);
    return c;
}

void fill_core2(BoundBreakdown& b, double R, double eps, const AprioriParams& ap,
                const Core2& c) {
    b.set("R", R);
    b.set("eps", eps);
    b.set("A_contour", ap.A_contour());
    b.set("alpha_star", c.alpha_star);
    b.set("R1", c.th.R1);
    b.set("R2", c.th.R2);
    b.set("R3", c.th.R3);
    b.set("R4", c.th.R4);
    b.set("R0", c.th.R0);
    b.set("phi_alpha", c.ph.phi);
    b.set("Phi", c.ph.Phi);
    b.set("Phi_eps", c.ph.Phi_eps);
    b.set("Phi_hat", c.ph.Phi + c.ph.Phi_eps);
    b.set("Phi_tail_unnormalized", c.ph.tail_unnorm);
    b.set("Psi", c.Psi);
    b.set("Psi_eps", c.Psi_eps);
    b.set("Psi_hat", c.Psi + c.Psi_eps);
    b.set("Omega", c.Omega);
    b.set("Omega_eps", c.Omega_eps);
    b.set("Omega_hat", c.Omega + c.Omega_eps);
    b.set("theta0", c.theta0);
    b.set("C0", c.C0);
    b.set("C0_chi", c.C0_chi);
    b.set("chi_R", c.chi);
    b.set("C0_term", c.C0_term);
    b.set("psi_R_eps", c.psi_eps);
}

void check_inputs(const char* who, double R, double eps) {
    if (!(R > 0.0) || !std::isfinite(R))
        throw std::invalid_argument(std::string(who) + ": R must be positive and finite");
    if (!(eps >= 0.0) || !std::isfinite(eps))
        throw std::invalid_argument(std::string(who) + ": eps must be >= 0 and finite");
}

} // namespace

bool BoundBreakdown::has(const std::string& name) const {
    for (const auto& e : entries)
        if (e.first == name) return true;
    return false;
}

double BoundBreakdown::at(const std::string& name) const {
    for (const auto& e : entries)
        if (e.first == name) return e.second;
    throw std::out_of_range("BoundBreakdown: no entry named " + name);
}

void BoundBreakdown::set(const std::string& name, double value) {
    for (auto& e : entries)
        if (e.first == name) {
            e.second = value;
            return;
        }
    entries.emplace_back(name, value);
}

double sinc_tail_bound(double rho, double u, bool truncated) {
    if (!(rho > 0.0)) throw std::invalid_argument("sinc_tail_bound: rho must be positive");
    const double base = truncated ? 2.0 * kPi : kPi;
    const double c = (truncated ? 3.0 : 4.0) / kPi;
    const double au = std::abs(u);
    if (au == 0.0) return base;
    return base * std::min(1.0, c / (rho * au));
}

double phi_alpha(double R, double eps, double alpha, double a) {
    if (!(R > 0.0) || !std::isfinite(R))
        throw std::invalid_argument("phi_alpha: R must be positive and finite");
    if (!(eps >= 0.0) || !std::isfinite(eps))
        throw std::invalid_argument("phi_alpha: eps must be >= 0 and finite");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("phi_alpha: alpha must lie in (0, 1)");
    if (!(a > 0.0)) throw std::invalid_argument("phi_alpha: a must be positive");
    if (eps == 0.0) return 0.0;
    const double N = std::ceil(3.0 * a * kE * R);
    const double y = 2.0 * std::pow(R, 1.0 + alpha) * eps;
    const double s = 6.0 * a * kE * std::pow(R, 1.0 + alpha) * eps;
    const double t = N * std::log1p(y); // ln((1+y)^N)
    if (t > 700.0 || s > 700.0 || t + s > 700.0) return kInf;
    return (std::expm1(t) + s) * std::exp(s);
}

double double_int_bound(double norm_f_s, const Lp& s, double rho, double a) {
    if (!(a > 0.0)) throw std::invalid_argument("double_int_bound: a must be positive");
    if (!(norm_f_s >= 0.0))
        throw std::invalid_argument("double_int_bound: norm_f_s must be >= 0");
    if (!s.is_inf() && !(s.value() > 1.0))
        throw std::invalid_argument("double_int_bound: s must exceed 1");
    if (!(rho > 3.0 / (kPi * a)))
        throw std::invalid_argument("double_int_bound: rho must exceed 3/(pi a)");
    const double ex = s.conj_frac();
    return 12.0 * norm_f_s * std::pow(rho, -ex) *
           std::pow(std::log(kPi * a * kE / 3.0 * rho), ex);
}

double kd_envelope(double t, double R, double eps, double alpha, const AprioriParams& params) {
    params.validate();
    check_inputs("kd_envelope", R, eps);
    if (!(t > 0.0 && t < 2.0 * params.a))
        throw std::invalid_argument("kd_envelope: t must lie in (0, 2a)");
    if (!(alpha > 0.0 && alpha < 1.0 - params.delta))
        throw std::invalid_argument("kd_envelope: alpha must lie in (0, 1 - delta)");
    const PhiParts ph = eval_phi_parts(R, eps, alpha, params);
    const double head = 0.5 * params.Q1 * std::exp(params.a * params.Q1) *
                        std::min(1.0, 4.0 / (kPi * std::pow(R, alpha) * t));
    return head + ph.Phi + ph.Phi_eps;
}

double optimal_split_exponent(const AprioriParams& params) {
    params.validate();
    return (1.0 - params.delta) * frac_2p1_3p2(params.p);
}

BoundBreakdown thresholds(const AprioriParams& params, double alpha) {
    params.validate();
    if (!(alpha > 0.0 && alpha < 1.0 - params.delta))
        throw std::invalid_argument("thresholds: alpha must lie in (0, 1 - delta)");
    const ThresholdSet th = eval_thresholds_impl(params, alpha);
    BoundBreakdown b;
    b.set("alpha", alpha);
    b.set("R1", th.R1);
    b.set("R2", th.R2);
    b.set("R3", th.R3);
    b.set("R4", th.R4);
    b.set("R0", th.R0);
    if (params.has_derivative_data()) {
        const double beta =
            (1.0 - params.delta) * frac_p_2p1(*params.r) * frac_p1_3p2(params.p);
        b.set("beta_star", beta);
        b.set("R5", std::max({std::pow(params.a, -1.0 / beta), th.R0, th.R2}));
    }
    b.in_force = true;
    b.note = provenance(th);
    return b;
}

BoundBreakdown primitive_stability_bound(double R, double eps, const AprioriParams& params) {
    params.validate();
    check_inputs("primitive_stability_bound", R, eps);
    const Core2 c = eval_core2(R, eps, params);
    BoundBreakdown b;
    fill_core2(b, R, eps, params, c);
    b.set("total", c.total);
    b.in_force = R > c.th.R0;
    b.note = (b.in_force ? "in force (R > R0); " : "not in force (R <= R0); ") +
             provenance(c.th);
    return b;
}

BoundBreakdown pointwise_stability_bound(double R, double eps, const AprioriParams& params) {
    params.validate();
    check_inputs("pointwise_stability_bound", R, eps);
    if (!params.has_derivative_data())
        throw std::invalid_argument(
            "pointwise_stability_bound: derivative a-priori data (r, Dr_prime, A_inf) required");
    const Core2 c = eval_core2(R, eps, params);
    const double a = params.a, Q1 = params.Q1;
    const double eaq = std::exp(a * Q1);
    const double Acon = 1.0 + Q1 * eaq;
    const Lp& r = *params.r;
    const double Drp = *params.Dr_prime;
    const double beta = (1.0 - params.delta) * frac_p_2p1(r) * frac_p1_3p2(params.p);
    const double D = *params.A_inf * (params.Dp + Drp);
    const double F = 0.25 * (2.0 * D + 8.0 * Q1 * Q1 * eaq + std::pow(a, r.conj_frac()) * Drp +
                             4.0 * Q1 * Q1 + 8.0 * a * (Q1 * Q1 * Q1 * eaq + 0.625 * Q1 * D));
    const double E0 = (D + 4.0 * Q1 * Q1 * eaq) / 8.0;
    const double E1 = 1.5 / kPi * Drp;
    const double E2 = 6.0 / kPi * (Q1 * Q1 * Q1 * eaq + 0.375 * Q1 * D);
    const double E3 = 5.0 * a / kPi * Q1 * c.C0;
    const double E4 = F * Acon * std::exp(2.0 * a * Acon) / kPi;
    const double R5 = std::max({std::pow(a, -1.0 / beta), c.th.R0, c.th.R2});

    const double Rbeta = std::pow(R, beta);
    const double L3b = lnc(kPi * a * kE / 3.0 * Rbeta);
    const double rcf = r.conj_frac();
    const double Theta = E1 * std::pow(R, -beta * rcf) * std::pow(L3b, rcf) +
                         E2 * std::pow(R, -beta) * L3b +
                         E3 * (1.0 + c.chi) *
                             std::pow(R, beta - (1.0 - params.delta) * frac_p1_3p2(params.p)) +
                         E4 * std::pow(R, -beta) +
                         std::pow(R, 2.0 * beta - 2.0 * (1.0 - params.delta));
    const double phi_beta = phi_alpha(R, eps, beta, a);

    struct Pieces {
        double Theta_eps, Kd_mid, dKd_mid, dKd_int, K12_env, pd, total;
    };
    // assembled at the interior point x = a/2 (kernel offsets x + t >= a)
    auto assemble = [&](bool with_eps) -> Pieces {
        Pieces p;
        p.Theta_eps = with_eps ? 2.0 / kPi * std::exp(2.0 * a * Acon) * Rbeta * phi_beta +
                                     5.0 * a / kPi * Q1 * Rbeta * c.psi_eps
                               : 0.0;
        const double Th_hat = Theta + p.Theta_eps;
        const double Phi_hat = c.ph.Phi + (with_eps ? c.ph.Phi_eps : 0.0);
        const double Om_hat = c.Omega + (with_eps ? c.Omega_eps : 0.0);
        const double mina = std::min(1.0, 4.0 / (kPi * std::pow(R, c.alpha_star) * a));
        const double cc = 3.0 / (kPi * Rbeta);
        p.Kd_mid = 0.5 * Q1 * eaq * mina + Phi_hat;
        p.dKd_mid = 2.0 * E0 * std::min(1.0, cc / a) + Th_hat;
        const double logint = cc >= 2.0 * a ? 2.0 * a : cc * std::log(2.0 * a * kE / cc);
        p.dKd_int = 2.0 * E0 * logint + 2.0 * a * Th_hat;
        p.K12_env = 0.5 * Q1 * eaq * mina + Om_hat;
        p.pd = p.dKd_mid + Q1 * p.Kd_mid + 0.5 * Q1 * p.dKd_int;
        p.total = 8.0 * Q1 * p.K12_env + 4.0 * p.pd;
        return p;
    };
    const Pieces pe = assemble(true);
    const Pieces p0 = eps == 0.0 ? pe : assemble(false);

    const double C0p = 4.0 * (1.0 + a * Q1) * (E1 + E3);
    const double lead = C0p * std::pow(R, -beta * rcf);
    const double chi_p = C0p > 0.0 ? p0.total / lead - 1.0 : 0.0;
    const double psi_p = pe.total - p0.total;

    BoundBreakdown b;
    fill_core2(b, R, eps, params, c);
    b.set("total_primitive", c.total);
    b.set("beta_star", beta);
    b.set("R5", R5);
    b.set("D", D);
    b.set("F", F);
    b.set("E0", E0);
    b.set("E1", E1);
    b.set("E2", E2);
    b.set("E3", E3);
    b.set("E4", E4);
    b.set("phi_beta", phi_beta);
    b.set("Theta", Theta);
    b.set("Theta_eps", pe.Theta_eps);
    b.set("Theta_hat", Theta + pe.Theta_eps);
    b.set("Kd_env_mid", pe.Kd_mid);
    b.set("dKd_env_mid", pe.dKd_mid);
    b.set("dKd_int", pe.dKd_int);
    b.set("K12_env", pe.K12_env);
    b.set("pd_env", pe.pd);
    b.set("C0_prime", C0p);
    b.set("chi_prime_R", chi_p);
    b.set("psi_prime_R_eps", psi_p);
    b.set("total", pe.total);
    b.in_force = R > R5;
    b.note = (b.in_force ? "in force (R > R5); " : "not in force (R <= R5); ") +
             provenance(c.th);
    return b;
}

} // namespace resinv
