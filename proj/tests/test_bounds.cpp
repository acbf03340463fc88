#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "resinv/bounds.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "oracle_bounds.hpp"
#include "oracle_helpers.hpp"

using namespace resinv;

namespace {

struct ParamCase {
    double a, Q1, p, Dp, delta, r, Drp, Ainf, R, eps;
};

// p or r <= 0 encodes the essential-sup exponent
const std::vector<ParamCase> kCases = {
    {1.0, 1.0, 2.0, 1.0, 0.10, 2.0, 1.0, 2.0, 20.0, 1e-6},
    {0.7, 2.0, 3.0, 0.5, 0.20, 4.0, 0.6, 1.5, 35.0, 1e-5},
    {1.5, 0.8, 1.5, 2.0, 0.05, 2.2, 1.1, 3.0, 50.0, 0.0},
    {1.0, 1.2, -1.0, 0.9, 0.15, -1.0, 0.8, 2.2, 25.0, 1e-7},
    {0.5, 3.0, 2.5, 1.3, 0.10, 3.0, 2.0, 1.8, 15.0, 1e-4},
};

AprioriParams to_params(const ParamCase& c, bool with_derivative) {
    AprioriParams ap;
    ap.a = c.a;
    ap.Q1 = c.Q1;
    ap.p = c.p > 0.0 ? Lp::finite(c.p) : Lp::infinity();
    ap.Dp = c.Dp;
    ap.delta = c.delta;
    if (with_derivative) {
        ap.r = c.r > 0.0 ? Lp::finite(c.r) : Lp::infinity();
        ap.Dr_prime = c.Drp;
        ap.A_inf = c.Ainf;
    }
    return ap;
}

} // namespace

TEST_CASE("growth factor matches the 700-bit literal product on a grid") {
    for (double alpha : {0.675, 0.3}) {
        int points = 0;
        for (double R : {1.5, 8.0, 10.0, 20.0, 40.0}) {
            for (double eps : {1e-9, 1e-7, 1e-5, 1e-3}) {
                const double got = phi_alpha(R, eps, alpha, 1.0);
                const double ref = oracle::mpfr_phi(R, eps, alpha, 1.0);
                REQUIRE(std::isfinite(ref));
                CHECK(std::abs(got - ref) <= 1e-12 * std::abs(ref));
                ++points;
            }
        }
        CHECK(points == 20);
    }
}

TEST_CASE("growth factor edge behavior") {
    CHECK(phi_alpha(10.0, 0.0, 0.5, 1.0) == 0.0);
    CHECK(std::isinf(phi_alpha(40.0, 1.0, 0.675, 1.0)));
    CHECK(phi_alpha(10.0, 1e-300, 0.5, 1.0) >= 0.0);
    CHECK_THROWS_AS(phi_alpha(-1.0, 0.0, 0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(phi_alpha(1.0, -1e-9, 0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(phi_alpha(1.0, 0.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(phi_alpha(1.0, 0.0, 0.5, 0.0), std::invalid_argument);
}

TEST_CASE("unit-data radius threshold has the expected closed form") {
    AprioriParams ap; // a = Q1 = 1
    const BoundBreakdown th = thresholds(ap, 0.5);
    const double ref =
        (1.0 + 2.0 * std::exp(1.0) * (std::exp(1.0) + 1.0) + std::log(4.0)) / std::exp(1.0);
    CHECK(th.at("R3") == doctest::Approx(ref).epsilon(1e-14));
    CHECK(th.at("R3") == doctest::Approx(8.3141).epsilon(1e-4));
    CHECK(th.at("R4") >= th.at("R3"));
    CHECK(th.at("R0") >= th.at("R4"));
    CHECK(th.at("R1") == 10.0); // defaulted to max(R3, 10)
    CHECK_FALSE(th.has("R5"));  // no derivative data supplied
    CHECK(!th.note.empty());
}

TEST_CASE("split exponent closed forms") {
    AprioriParams ap;
    CHECK(optimal_split_exponent(ap) == doctest::Approx(0.675).epsilon(1e-15));
    ap.p = Lp::infinity();
    CHECK(optimal_split_exponent(ap) == doctest::Approx(0.6).epsilon(1e-15));
    ap.p = Lp::finite(3.0);
    ap.delta = 0.2;
    CHECK(optimal_split_exponent(ap) == doctest::Approx(0.8 * 5.0 / 7.0).epsilon(1e-15));
}

TEST_CASE("primitive total agrees with a flat independent transcription") {
    for (const auto& c : kCases) {
        const AprioriParams ap = to_params(c, false);
        const BoundBreakdown b = primitive_stability_bound(c.R, c.eps, ap);
        const double ref = oracle::flat_total2(c.R, c.eps, c.a, c.Q1, c.p, c.Dp, c.delta);
        CHECK(std::abs(b.total() - ref) <= 1e-12 * std::abs(ref));
    }
}

TEST_CASE("pointwise total agrees with a flat independent transcription") {
    for (const auto& c : kCases) {
        const AprioriParams ap = to_params(c, true);
        const BoundBreakdown b = pointwise_stability_bound(c.R, c.eps, ap);
        const double ref = oracle::flat_total3(c.R, c.eps, c.a, c.Q1, c.p, c.Dp, c.delta, c.r,
                                               c.Drp, c.Ainf);
        CHECK(std::abs(b.total() - ref) <= 1e-12 * std::abs(ref));
        CHECK(b.at("total_primitive") ==
              doctest::Approx(primitive_stability_bound(c.R, c.eps, ap).total())
                  .epsilon(1e-15));
    }
}

TEST_CASE("the total splits into the leading power plus twice the tail envelope") {
    for (const auto& c : kCases) {
        const AprioriParams ap = to_params(c, false);
        const BoundBreakdown b = primitive_stability_bound(c.R, c.eps, ap);
        const double pv = c.p > 0.0 ? c.p : std::numeric_limits<double>::infinity();
        const double e1 = std::isinf(pv) ? 0.5 : pv / (2.0 * pv - 1.0);
        const double e2 = std::isinf(pv) ? 0.5 : (pv - 1.0) / (2.0 * pv - 1.0);
        const double as = b.at("alpha_star");
        const double lead = 2.0 * std::pow(c.Dp, e1) *
                            std::pow(2.0 * c.Q1 * std::exp(c.a * c.Q1) / oracle::kPi, e2) *
                            std::pow(c.R, -as * e2);
        const double ref = lead + 2.0 * b.at("Omega_hat");
        CHECK(std::abs(b.total() - ref) <= 1e-13 * std::abs(ref));
        CHECK(std::abs(b.at("psi_R_eps") - 2.0 * b.at("Omega_eps")) <=
              1e-14 * (1.0 + std::abs(b.at("psi_R_eps"))));
    }
}

TEST_CASE("pointwise envelope pieces recombine as documented") {
    const ParamCase c = kCases[0];
    const AprioriParams ap = to_params(c, true);
    const BoundBreakdown b = pointwise_stability_bound(c.R, c.eps, ap);
    const double total = 8.0 * c.Q1 * b.at("K12_env") + 4.0 * b.at("pd_env");
    CHECK(b.total() == doctest::Approx(total).epsilon(1e-14));
    const double pd = b.at("dKd_env_mid") + c.Q1 * b.at("Kd_env_mid") +
                      0.5 * c.Q1 * b.at("dKd_int");
    CHECK(b.at("pd_env") == doctest::Approx(pd).epsilon(1e-14));
}

TEST_CASE("boundary-kernel envelope recombines head and tail") {
    AprioriParams ap;
    const double R = 20.0, eps = 1e-6;
    const BoundBreakdown b = primitive_stability_bound(R, eps, ap);
    const double as = b.at("alpha_star");
    for (double t : {0.2, 0.7, 1.3, 1.9}) {
        const double head = 0.5 * ap.Q1 * std::exp(ap.a * ap.Q1) *
                            std::min(1.0, 4.0 / (oracle::kPi * std::pow(R, as) * t));
        const double ref = head + b.at("Phi_hat");
        CHECK(kd_envelope(t, R, eps, as, ap) == doctest::Approx(ref).epsilon(1e-14));
    }
    // nonincreasing in the offset
    double prev = kd_envelope(0.05, R, eps, as, ap);
    for (double t = 0.1; t < 2.0; t += 0.05) {
        const double cur = kd_envelope(t, R, eps, as, ap);
        CHECK(cur <= prev * (1.0 + 1e-15));
        prev = cur;
    }
    CHECK_THROWS_AS(kd_envelope(2.5, R, eps, as, ap), std::invalid_argument);
    CHECK_THROWS_AS(kd_envelope(0.5, R, eps, 0.95, ap), std::invalid_argument);
}

TEST_CASE("principal-value tail envelopes") {
    CHECK(sinc_tail_bound(2.0, 0.0, true) == doctest::Approx(2.0 * oracle::kPi));
    CHECK(sinc_tail_bound(2.0, 0.0, false) == doctest::Approx(oracle::kPi));
    CHECK(sinc_tail_bound(3.0, 5.0, true) ==
          doctest::Approx(2.0 * oracle::kPi * std::min(1.0, 3.0 / oracle::kPi / 15.0)));
    CHECK(sinc_tail_bound(3.0, -5.0, false) ==
          doctest::Approx(oracle::kPi * std::min(1.0, 4.0 / oracle::kPi / 15.0)));
    CHECK_THROWS_AS(sinc_tail_bound(0.0, 1.0, true), std::invalid_argument);
}

TEST_CASE("double oscillatory tail envelope transcription and domain") {
    const double ref = 12.0 * 0.8 * std::pow(5.0, -0.5) *
                       std::pow(std::log(oracle::kPi * 1.0 * std::exp(1.0) / 3.0 * 5.0), 0.5);
    CHECK(double_int_bound(0.8, Lp::finite(2.0), 5.0, 1.0) == doctest::Approx(ref).epsilon(1e-14));
    CHECK_THROWS_AS(double_int_bound(0.8, Lp::finite(2.0), 0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(double_int_bound(0.8, Lp::finite(1.0), 5.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(double_int_bound(-0.1, Lp::finite(2.0), 5.0, 1.0), std::invalid_argument);
}

TEST_CASE("totals decay once the radius clears the thresholds") {
    AprioriParams ap;
    const BoundBreakdown b0 = primitive_stability_bound(10.0, 0.0, ap);
    const double R0 = b0.at("R0");
    double prev = std::numeric_limits<double>::infinity();
    for (double f : {10.0, 15.0, 20.0, 40.0, 80.0}) {
        const double cur = primitive_stability_bound(f * R0, 0.0, ap).total();
        CHECK(cur < prev);
        prev = cur;
    }
    AprioriParams apd = ap;
    apd.r = Lp::finite(2.0);
    apd.Dr_prime = 1.0;
    apd.A_inf = 2.0;
    const double R5 = pointwise_stability_bound(10.0, 0.0, apd).at("R5");
    prev = std::numeric_limits<double>::infinity();
    for (double f : {10.0, 20.0, 40.0, 80.0}) {
        const double cur = pointwise_stability_bound(f * R5, 0.0, apd).total();
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("in-force flags follow the thresholds") {
    AprioriParams ap;
    const double R0 = primitive_stability_bound(10.0, 0.0, ap).at("R0");
    CHECK(primitive_stability_bound(1.01 * R0, 0.0, ap).in_force);
    CHECK_FALSE(primitive_stability_bound(0.5 * R0, 0.0, ap).in_force);
    AprioriParams apd = ap;
    apd.r = Lp::finite(2.0);
    apd.Dr_prime = 1.0;
    apd.A_inf = 2.0;
    const double R5 = pointwise_stability_bound(10.0, 0.0, apd).at("R5");
    CHECK(pointwise_stability_bound(1.01 * R5, 0.0, apd).in_force);
    CHECK_FALSE(pointwise_stability_bound(0.99 * R5, 0.0, apd).in_force);
    CHECK_THROWS_AS(pointwise_stability_bound(10.0, 0.0, ap), std::invalid_argument);
}

TEST_CASE("no entry is ever NaN across a parameter sweep") {
    for (double p : {1.5, 2.0, 4.0, -1.0}) {
        for (double delta : {0.05, 0.3}) {
            for (double a : {0.5, 2.0}) {
                for (double Q1 : {0.5, 3.0}) {
                    ParamCase c{a, Q1, p, 1.0, delta, 2.0, 1.0, 2.0, 0.0, 0.0};
                    const AprioriParams ap = to_params(c, true);
                    for (double R : {5.0, 50.0}) {
                        for (double eps : {0.0, 1e-6}) {
                            for (const auto& [name, value] :
                                 pointwise_stability_bound(R, eps, ap).entries) {
                                INFO(name);
                                CHECK_FALSE(std::isnan(value));
                            }
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("breakdown container semantics") {
    BoundBreakdown b;
    b.set("x", 1.0);
    b.set("y", 2.0);
    b.set("x", 3.0);
    CHECK(b.entries.size() == 2);
    CHECK(b.at("x") == 3.0);
    CHECK(b.has("y"));
    CHECK_FALSE(b.has("z"));
    CHECK_THROWS_AS(b.at("z"), std::out_of_range);
}
