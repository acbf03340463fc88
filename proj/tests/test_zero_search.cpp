#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "resinv/zero_search.hpp"

#include <cmath>
#include <complex>
#include <vector>

using namespace resinv;
using cd = std::complex<double>;

namespace {

AnalyticFn poly_fn(std::vector<cd> roots) {
    return AnalyticFn{[roots = std::move(roots)](cd z) {
        cd f = 1.0, df = 0.0;
        for (const cd& r : roots) {
            df = df * (z - r) + f;
            f *= z - r;
        }
        return std::make_pair(f, df);
    }};
}

} // namespace

TEST_CASE("winding numbers of simple polynomials") {
    const AnalyticFn f = poly_fn({cd(0, 1), cd(0, -1)}); // z^2 + 1
    CHECK(winding_number_circle(f, cd(0, 0), 2.0) == 2);
    CHECK(winding_number_circle(f, cd(0, 0), 0.5) == 0);
    CHECK(winding_number_circle(f, cd(0, 1), 0.5) == 1);
    CHECK(winding_number_circle(f, cd(5, 5), 1.0) == 0);
}

TEST_CASE("winding handles high multiplicity and entire nonvanishing functions") {
    const AnalyticFn f = poly_fn({cd(0.5, 0), cd(0.5, 0), cd(0.5, 0)});
    CHECK(winding_number_circle(f, cd(0, 0), 1.0) == 3);
    const AnalyticFn g{[](cd z) { return std::make_pair(std::exp(z), std::exp(z)); }};
    CHECK(winding_number_circle(g, cd(0, 0), 3.0) == 0);
}

TEST_CASE("first moment locates the centroid of enclosed zeros") {
    const cd r1(0.4, 0.3), r2(-0.2, -0.6);
    const auto [m, centroid] = winding_moment_circle(poly_fn({r1, r2}), cd(0, 0), 1.5);
    CHECK(m == 2);
    CHECK(std::abs(centroid - (r1 + r2) / 2.0) <= 1e-8);
}

TEST_CASE("zero on the contour raises the dedicated error") {
    const AnalyticFn f = poly_fn({cd(1, 0)});
    CHECK_THROWS_AS(winding_number_circle(f, cd(0, 0), 1.0), ZeroOnContourError);
}

TEST_CASE("locate_zeros finds roots with multiplicities") {
    const AnalyticFn f = poly_fn({cd(1, 0), cd(1, 0), cd(-1, 0.5), cd(0, 0.3)});
    const auto zs = locate_zeros(f, cd(0, 0), 2.0);
    REQUIRE(zs.size() == 3);
    // sorted by (Re, Im)
    CHECK(std::abs(zs[0].z - cd(-1, 0.5)) <= 1e-8);
    CHECK(zs[0].multiplicity == 1);
    CHECK(std::abs(zs[1].z - cd(0, 0.3)) <= 1e-8);
    CHECK(zs[1].multiplicity == 1);
    CHECK(std::abs(zs[2].z - cd(1, 0)) <= 1e-6);
    CHECK(zs[2].multiplicity == 2);
}

TEST_CASE("locate_zeros on a transcendental function") {
    const AnalyticFn f{[](cd z) {
        return std::make_pair(std::sin(M_PI * z), M_PI * std::cos(M_PI * z));
    }};
    const auto zs = locate_zeros(f, cd(0, 0), 3.2);
    REQUIRE(zs.size() == 7);
    for (int k = -3; k <= 3; ++k) {
        CHECK(std::abs(zs[k + 3].z - cd(k, 0)) <= 1e-9);
        CHECK(zs[k + 3].multiplicity == 1);
    }
}

TEST_CASE("near-coincident zeros are reported with total multiplicity") {
    const cd c(0.3, -0.4);
    const AnalyticFn f = poly_fn({c, c + cd(1e-10, 0)});
    const auto zs = locate_zeros(f, cd(0, 0), 1.0);
    int total = 0;
    for (const auto& z : zs) {
        total += z.multiplicity;
        CHECK(std::abs(z.z - c) <= 1e-6);
    }
    CHECK(total == 2);
}

TEST_CASE("empty disks come back empty") {
    const AnalyticFn f = poly_fn({cd(10, 10)});
    CHECK(locate_zeros(f, cd(0, 0), 2.0).empty());
}

TEST_CASE("option validation") {
    WindingOptions w;
    w.min_samples = 1;
    CHECK_THROWS_AS(w.validate(), std::invalid_argument);
    ZeroSearchOptions o;
    o.newton_iters = 0;
    CHECK_THROWS_AS(o.validate(), std::invalid_argument);
}
