#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "resinv/serialize.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <string>

using namespace resinv;

TEST_CASE("format_double round-trips bit patterns") {
    for (double x : {0.0, -0.0, 1.0, -1.5, 0.1, 1e-300, 1e300, M_PI,
                     0x1.fffffffffffffp+1023, 5e-324}) {
        const std::string s = format_double(x);
        const double back = std::strtod(s.c_str(), nullptr);
        CHECK(std::memcmp(&back, &x, sizeof x) == 0);
    }
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("potential round-trip is exact and byte-stable") {
    const Potential q = make_family("bump(0.5,0.5,0.3)+sine(0.25,3)", 1.0, 64);
    const std::string j1 = to_json(q);
    const Potential back = potential_from_json(j1);
    CHECK(back.a == q.a);
    CHECK(back.n_grid == q.n_grid);
    REQUIRE(back.values.size() == q.values.size());
    for (std::size_t i = 0; i < q.values.size(); ++i) CHECK(back.values[i] == q.values[i]);
    CHECK(to_json(back) == j1);
}

TEST_CASE("kernel grid round-trip") {
    const Potential qi = make_zero(1.0, 32);
    const Potential qj = make_constant(0.7, 1.0, 32);
    const KernelGrid K = solve_kernel(qi, qj);
    const KernelGrid back = kernel_from_json(to_json(K));
    CHECK(back.a == K.a);
    CHECK(back.n_grid == K.n_grid);
    REQUIRE(back.values.size() == K.values.size());
    for (std::size_t i = 0; i < K.values.size(); ++i) CHECK(back.values[i] == K.values[i]);
}

TEST_CASE("resonance set round-trip keeps multiplicities and origin count") {
    ResonanceSet s;
    s.R = 5.0;
    s.n_origin = 2;
    s.zeros = {{{-2.0, -1.0}, 1}, {{0.0, 1.5}, 3}, {{2.0, -1.0}, 1}};
    const std::string j = to_json(s);
    const ResonanceSet back = resonances_from_json(j);
    CHECK(back.R == s.R);
    CHECK(back.n_origin == 2);
    REQUIRE(back.zeros.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(back.zeros[i].z == s.zeros[i].z);
        CHECK(back.zeros[i].multiplicity == s.zeros[i].multiplicity);
    }
    CHECK(to_json(back) == j);
}

TEST_CASE("breakdown serialization carries non-finite entries as quoted strings") {
    BoundBreakdown b;
    b.set("finite", 1.5);
    b.set("top", std::numeric_limits<double>::infinity());
    b.in_force = true;
    b.note = "test";
    const std::string j = to_json(b);
    CHECK(j.find("\"inf\"") != std::string::npos);
    CHECK(j.find("\"top\"") != std::string::npos);
    CHECK(j.find("true") != std::string::npos);
}

TEST_CASE("grid function round-trip") {
    GridFunction g;
    g.a = 2.0;
    g.n_grid = 4;
    g.values = {0.0, 0.25, -1.0, 3.5, 0.0};
    const GridFunction back = grid_function_from_json(to_json(g));
    CHECK(back.a == g.a);
    CHECK(back.n_grid == g.n_grid);
    REQUIRE(back.values.size() == g.values.size());
    for (std::size_t i = 0; i < g.values.size(); ++i) CHECK(back.values[i] == g.values[i]);
}

TEST_CASE("reconstruction result serializes with stable shape") {
    ReconstructionResult rr;
    rr.primitive_estimate.a = 1.0;
    rr.primitive_estimate.n_grid = 2;
    rr.primitive_estimate.values = {1.0, 0.5, 0.0};
    rr.diagnostics.pairing_epsilon = 1e-8;
    rr.diagnostics.outer_residuals = {0.1, 0.01};
    rr.bound.set("total", 2.0);
    const std::string j1 = to_json(rr);
    const std::string j2 = to_json(rr);
    CHECK(j1 == j2);
    CHECK(j1.find("\"pointwise_estimate\":null") != std::string::npos);
    CHECK(j1.find("\"outer_residuals\"") != std::string::npos);
    rr.pointwise_estimate = rr.primitive_estimate;
    CHECK(to_json(rr).find("\"pointwise_estimate\":null") == std::string::npos);
}

TEST_CASE("malformed payloads are rejected") {
    CHECK_THROWS(potential_from_json("{"));
    CHECK_THROWS(potential_from_json("{\"a\":1.0}"));
    CHECK_THROWS(resonances_from_json("{\"R\":-1,\"n_origin\":0,\"zeros\":[]}"));
}

TEST_CASE("file writes land atomically under the final name") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "resinv_serialize_test";
    fs::create_directories(dir);
    const std::string path = (dir / "out.json").string();
    write_text_file(path, "first");
    CHECK(read_text_file(path) == "first");
    write_text_file(path, "second");
    CHECK(read_text_file(path) == "second");
    CHECK_FALSE(fs::exists(path + ".tmp"));
    fs::remove_all(dir);
    CHECK_THROWS(read_text_file((dir / "missing.json").string()));
}
