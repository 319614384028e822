#include <doctest.h>

#include <numbers>

#include "qpol/polarization.hpp"
#include "qpol/statefile.hpp"
#include "test_helpers.hpp"

using namespace qpol;
using nlohmann::json;

TEST_CASE("parsing the four state kinds") {
    SUBCASE("pure") {
        const json j = {{"nmax", 2},
                        {"kind", "pure"},
                        {"amplitudes",
                         {{{"m", 1}, {"n", 0}, {"re", 0.7071067811865476}, {"im", 0.0}},
                          {{"m", 0}, {"n", 1}, {"re", 0.0}, {"im", 0.7071067811865476}}}}};
        const LoadedState loaded = parse_state_json(j);
        REQUIRE(loaded.is_pure());
        CHECK(loaded.kind == "pure");
        CHECK(std::abs(loaded.pure().amplitude(0, 1) - Complex(0, 1) / std::sqrt(2.0)) < 1e-12);
    }

    SUBCASE("mixed") {
        const json j = {{"nmax", 1},
                        {"kind", "mixed"},
                        {"entries",
                         {{{"row", {1, 0}}, {"col", {1, 0}}, {"re", 0.75}, {"im", 0.0}},
                          {{"row", {0, 1}}, {"col", {0, 1}}, {"re", 0.25}, {"im", 0.0}}}}};
        const LoadedState loaded = parse_state_json(j);
        REQUIRE_FALSE(loaded.is_pure());
        CHECK(*degree_of_polarization(loaded.density()) == doctest::Approx(0.5));
    }

    SUBCASE("su2-coherent") {
        const json j = {
            {"nmax", 4}, {"kind", "su2-coherent"}, {"n", 2}, {"theta", 1.1}, {"phi", 0.4}};
        const LoadedState loaded = parse_state_json(j);
        CHECK(testing::fidelity(loaded.pure(), su2_coherent(2, 1.1, 0.4, TwoModeBasis(4))) >
              1.0 - 1e-12);
    }

    SUBCASE("perfect-spec") {
        const json j = {{"nmax", 3},
                        {"kind", "perfect-spec"},
                        {"theta", 0.0},
                        {"phi", 0.0},
                        {"weights",
                         {{{"n", 1}, {"q", 0.5}, {"varphi", 0.0}}, {{"n", 2}, {"q", 0.5}}}}};
        const LoadedState loaded = parse_state_json(j);
        CHECK(*degree_of_polarization(loaded.pure()) == doctest::Approx(1.0));
    }
}

TEST_CASE("parse failures carry validation errors") {
    CHECK_THROWS_AS(parse_state_json(json::array()), ValidationError);
    CHECK_THROWS_AS(parse_state_json({{"nmax", 2}, {"kind", "nope"}}), ValidationError);
    CHECK_THROWS_AS(parse_state_json({{"kind", "pure"}}), ValidationError);

    SUBCASE("out-of-cutoff kets") {
        const json j = {{"nmax", 1},
                        {"kind", "pure"},
                        {"amplitudes", {{{"m", 1}, {"n", 1}, {"re", 1.0}, {"im", 0.0}}}}};
        CHECK_THROWS_AS(parse_state_json(j), CutoffError);
    }

    SUBCASE("duplicate entries") {
        const json j = {{"nmax", 1},
                        {"kind", "pure"},
                        {"amplitudes",
                         {{{"m", 1}, {"n", 0}, {"re", 1.0}, {"im", 0.0}},
                          {{"m", 1}, {"n", 0}, {"re", 1.0}, {"im", 0.0}}}}};
        CHECK_THROWS_AS(parse_state_json(j), ValidationError);
    }

    SUBCASE("non-positive mixed states are rejected") {
        const json j = {{"nmax", 1},
                        {"kind", "mixed"},
                        {"entries",
                         {{{"row", {1, 0}}, {"col", {1, 0}}, {"re", 1.5}, {"im", 0.0}},
                          {{"row", {0, 1}}, {"col", {0, 1}}, {"re", -0.5}, {"im", 0.0}}}}};
        CHECK_THROWS_AS(parse_state_json(j), ValidationError);
    }

    CHECK_THROWS_AS(load_state_file("/nonexistent/state.json"), ValidationError);
}

TEST_CASE("write then re-parse round-trips") {
    const TwoModeBasis basis(4);
    std::mt19937 rng(271);

    SUBCASE("pure state") {
        const PureState psi = testing::random_pure(basis, rng);
        const LoadedState back = parse_state_json(json::parse(render_json(state_to_json(psi))));
        CHECK(testing::fidelity(psi, back.pure()) > 1.0 - 1e-12);
    }

    SUBCASE("density matrix") {
        const DensityMatrix rho = testing::random_density(basis, rng, 3);
        const LoadedState back = parse_state_json(json::parse(render_json(state_to_json(rho))));
        CHECK(testing::trace_distance(rho, back.density()) < 1e-12);
    }
}

TEST_CASE("rendered output is reproducible and pins float formatting") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
    CHECK(format_double(2.0) == "2");

    nlohmann::ordered_json j;
    j["value"] = 1.0 / 3.0;
    j["list"] = {1.5, 2, std::numbers::pi};
    j["nested"] = {{"s", "text"}, {"flag", true}};
    const std::string once = render_json(j);
    const std::string twice = render_json(j);
    CHECK(once == twice);
    CHECK(once.find("0.33333333333333331") != std::string::npos);
    CHECK(once.find("3.1415926535897931") != std::string::npos);
}
