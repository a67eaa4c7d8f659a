#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hbtamp/errors.hpp"
#include "hbtamp/opa_model.hpp"
#include "property.hpp"

using namespace hbtamp;

TEST_CASE("Bogoliubov coefficients") {
    const auto id = coeffs({0.0, 0.0});
    CHECK(id.mu == 1.0);
    CHECK(id.nu == 0.0);
    const auto c2 = coeffs({2.0, 0.0});
    CHECK(c2.mu == doctest::Approx(3.7621957).epsilon(1e-8));
    CHECK(c2.nu == doctest::Approx(3.6268604).epsilon(1e-8));
    CHECK(c2.mu2() == doctest::Approx(14.1541164).epsilon(1e-8));
    CHECK(c2.nu2() == doctest::Approx(13.1541164).epsilon(1e-8));
    const auto c05 = coeffs({0.5, 0.0});
    CHECK(c05.mu2() == doctest::Approx(1.2715403174).epsilon(1e-10));
    CHECK(c05.nu2() == doctest::Approx(0.2715403174).epsilon(1e-9));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(OpaParams({-0.1, 0.0}).validate(), DomainError);
    CHECK_THROWS_AS(OpaParams({std::nan(""), 0.0}).validate(), DomainError);
    CHECK_THROWS_AS(OpaParams({1.0, 2.0 * std::numbers::pi}).validate(), DomainError);
    CHECK_THROWS_AS(OpaParams({1.0, -0.1}).validate(), DomainError);
    CHECK_NOTHROW(OpaParams({1.0, 1.0}).validate());
    CHECK_THROWS_AS(require_zero_pump_phase({1.0, 0.3}), UnsupportedConfiguration);
    CHECK_THROWS_AS(propagate_moments({1, 3, 13, 75}, {1.0, 0.3}), UnsupportedConfiguration);
}

TEST_CASE("zero gain is the identity") {
    const MomentVector in{0.7, 2.1, 9.0, 50.0};
    CHECK(propagate_moments(in, {0.0, 0.0}) == in);
}

TEST_CASE("vacuum and thermal inputs at g = 2") {
    const OpaParams p{2.0, 0.0};
    CHECK(propagate_moments({0, 0, 0, 0}, p).m1 == doctest::Approx(13.1541164).epsilon(1e-8));
    const auto out = propagate_moments(thermal_moments(ThermalSource(1.0)), p);
    CHECK(out.m1 == doctest::Approx(27.3082328).epsilon(1e-8));
    CHECK(max_relative_difference(out, thermal_moments(ThermalSource(27.3082328))) < 1e-7);
}

TEST_CASE("equivalent thermal and idler means") {
    CHECK(equivalent_thermal_mean(0.0, {0.0, 0.0}) == 0.0);
    CHECK(equivalent_thermal_mean(1.0, {2.0, 0.0}) == doctest::Approx(27.3082328).epsilon(1e-8));
    CHECK(equivalent_thermal_mean(10.0, {2.0, 0.0}) == doctest::Approx(154.6952806).epsilon(1e-8));
    CHECK(idler_output_mean(0.0, {0.5, 0.0}) == doctest::Approx(0.2715403174).epsilon(1e-9));
    CHECK(idler_output_mean(1.0, {2.0, 0.0}) == doctest::Approx(2 * 13.1541164).epsilon(1e-8));
}

TEST_CASE("property: mu^2 - nu^2 = 1") {
    testing::Draw draw(21);
    for (int i = 0; i < testing::kPropertyCases; ++i) {
        const auto c = coeffs({draw.uniform(0.0, 5.0), 0.0});
        CHECK(c.mu2() - c.nu2() == doctest::Approx(1.0).epsilon(1e-12 * c.mu2()));
    }
}

TEST_CASE("property: thermal closure") {
    testing::Draw draw(22);
    for (int i = 0; i < testing::kPropertyCases; ++i) {
        const double n = draw.uniform(0.0, 20.0);
        const OpaParams p{draw.uniform(0.0, 3.0), 0.0};
        CAPTURE(n);
        CAPTURE(p.gain);
        const auto out = propagate_moments(thermal_moments(ThermalSource(n)), p);
        const auto closed = thermal_moments(ThermalSource(equivalent_thermal_mean(n, p)));
        CHECK(max_relative_difference(out, closed) < 1e-9);
    }
}

TEST_CASE("property: propagated moments stay valid and the mean is never reduced") {
    testing::Draw draw(23);
    for (int i = 0; i < testing::kPropertyCases; ++i) {
        const double n = draw.uniform(0.0, 10.0);
        const OpaParams p{draw.uniform(0.0, 3.0), 0.0};
        const auto in = thermal_moments(ThermalSource(n));
        const auto out = propagate_moments(in, p);
        CHECK(out.is_valid(1e-10));
        CHECK(out.m1 >= in.m1);
    }
}

TEST_CASE("property: amplifying thermal light twice stays thermal") {
    testing::Draw draw(24);
    for (int i = 0; i < 50; ++i) {
        const double n = draw.uniform(0.0, 5.0);
        const OpaParams a{draw.uniform(0.0, 1.5), 0.0}, b{draw.uniform(0.0, 1.5), 0.0};
        const auto twice = propagate_moments(propagate_moments(thermal_moments(ThermalSource(n)), a), b);
        const double mean = equivalent_thermal_mean(equivalent_thermal_mean(n, a), b);
        CHECK(max_relative_difference(twice, thermal_moments(ThermalSource(mean))) < 1e-9);
    }
}
