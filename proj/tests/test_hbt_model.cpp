#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hbtamp/errors.hpp"
#include "hbtamp/hbt_model.hpp"
#include "property.hpp"

using namespace hbtamp;
using std::numbers::pi;

namespace {

MomentVector thermal(double n) { return thermal_moments(ThermalSource(n)); }

const OpaParams kG2{2.0, 0.0};

}  // namespace

TEST_CASE("geometry") {
    CHECK(Geometry(1.42e7, 40.0, 1e-8).phase() == doctest::Approx(5.68));
    CHECK(Geometry::with_phase(0.3).phase() == doctest::Approx(0.3));
    CHECK_THROWS_AS(Geometry(-1.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(Geometry(1.0, std::nan(""), 1.0), DomainError);
}

TEST_CASE("plain correlator") {
    CHECK(correlation_full(thermal(0), thermal(0), Geometry::with_phase(0)) == 0.0);
    CHECK(correlation_full(thermal(1), thermal(1), Geometry::with_phase(0)) == 10.0);
    CHECK(correlation_full(thermal(1), thermal(1), Geometry::with_phase(pi)) == doctest::Approx(6.0));
    CHECK(correlation_dc(thermal(1), thermal(1)) == 8.0);
    CHECK(correlation_ac(1, 1, Geometry::with_phase(0)) == 2.0);
    CHECK(std::abs(correlation_ac(3, 7, Geometry::with_phase(pi / 2))) < 1e-14);
    CHECK(correlation_ac(2, 3, Geometry::with_phase(pi)) == doctest::Approx(-12.0));
}

TEST_CASE("full noise") {
    const MomentVector zero{0, 0, 0, 0};
    CHECK(noise_full(zero, zero, Geometry::with_phase(1.0)) == 0.0);
    for (double d : {0.0, 1.0, pi}) {
        CHECK(noise_full(thermal(1), zero, Geometry::with_phase(d)) == doctest::Approx(66.0));
    }
    // At cos 2 delta = 0 only the constant and cos delta parts are left.
    const double c = noise_avg_substitution(thermal(1), thermal(1));
    const double d = noise_full(thermal(1), thermal(1), Geometry::with_phase(pi / 2));
    CHECK(d == doctest::Approx(c + 2.0 * (3 * 3 - 2 * 1) * std::cos(pi)));
}

TEST_CASE("phase-averaged noise: substitution vs printed polynomial") {
    CHECK(noise_avg_printed(0, 0) == 0.0);
    CHECK(noise_avg_printed(1, 1) == 466.0);
    CHECK(noise_avg_printed(1, 0) == 66.0);
    CHECK(noise_avg_substitution(thermal(1), thermal(0)) == 66.0);
    // Corrected moments give 454: the printed n^2 m^2 coefficient is 12 too large.
    CHECK(noise_avg_substitution(thermal(1), thermal(1)) == doctest::Approx(454.0));
}

TEST_CASE("property: printed thermal noise exceeds substitution by 12 n^2 m^2") {
    testing::Draw draw(31);
    for (int i = 0; i < testing::kPropertyCases; ++i) {
        const double n = draw.uniform(0.0, 20.0), m = draw.uniform(0.0, 20.0);
        const double lhs = noise_avg_printed(n, m) - noise_avg_substitution(thermal(n), thermal(m));
        CHECK(lhs == doctest::Approx(12.0 * n * n * m * m).epsilon(1e-9).scale(noise_avg_printed(n, m)));
    }
}

TEST_CASE("property: averaging the full noise over the phase drops every cosine term") {
    testing::Draw draw(32);
    for (int i = 0; i < 50; ++i) {
        const auto nm = thermal(draw.uniform(0.0, 5.0)), mm = thermal(draw.uniform(0.0, 5.0));
        const int steps = 64;
        double avg = 0.0;
        for (int s = 0; s < steps; ++s) avg += noise_full(nm, mm, Geometry::with_phase(2 * pi * s / steps));
        avg /= steps;
        CHECK(avg == doctest::Approx(noise_avg_substitution(nm, mm)).epsilon(1e-12));
    }
}

TEST_CASE("property: symmetry under exchanging the two sources") {
    testing::Draw draw(33);
    for (int i = 0; i < testing::kPropertyCases; ++i) {
        const double n = draw.uniform(0.0, 10.0), m = draw.uniform(0.0, 10.0);
        const Geometry geom = Geometry::with_phase(draw.uniform(0.0, 2 * pi));
        CHECK(correlation_full(thermal(n), thermal(m), geom) ==
              doctest::Approx(correlation_full(thermal(m), thermal(n), geom)));
        CHECK(noise_full(thermal(n), thermal(m), geom) == doctest::Approx(noise_full(thermal(m), thermal(n), geom)));
        CHECK(noise_avg_printed(n, m) == doctest::Approx(noise_avg_printed(m, n)));
        const OpaParams p{draw.uniform(0.0, 3.0), 0.0};
        CHECK(signal_ratio(n + 0.1, m + 0.1, p) == doctest::Approx(signal_ratio(m + 0.1, n + 0.1, p)));
    }
}

TEST_CASE("printed amplified noise is not symmetric in the sources") {
    CHECK(opa_noise_avg_printed(1, 2, kG2) != doctest::Approx(opa_noise_avg_printed(2, 1, kG2)));
    CHECK(opa_noise_avg_printed(1, 2, {0.0, 0.0}) == doctest::Approx(opa_noise_avg_printed(2, 1, {0.0, 0.0})));
}

TEST_CASE("amplified correlator") {
    for (double d : {0.0, 0.7, pi}) {
        CHECK(opa_correlation_ac(2, 3, {0.0, 0.0}, Geometry::with_phase(d)) ==
              doctest::Approx(correlation_ac(2, 3, Geometry::with_phase(d))));
    }
    CHECK(opa_correlation_ac(1, 1, kG2, Geometry::with_phase(0)) == doctest::Approx(1491.479).epsilon(1e-6));
    CHECK(opa_correlation_ac(10, 10, kG2, Geometry::with_phase(0)) == doctest::Approx(47861.26).epsilon(1e-6));
}

TEST_CASE("printed amplified noise polynomial") {
    CHECK(opa_noise_avg_printed(1, 1, {0.0, 0.0}) == doctest::Approx(418.0));
    CHECK(opa_noise_avg_printed(1, 1, kG2) == doctest::Approx(93985337.33).epsilon(1e-9));
    CHECK(std::sqrt(opa_noise_avg_printed(1, 1, kG2)) == doctest::Approx(9694.6).epsilon(1e-5));
    const auto c = coeffs(kG2);
    const double mu2 = c.mu2(), nu2 = c.nu2();
    const double vacuum = 2 * mu2 * mu2 * mu2 * nu2 + 46 * mu2 * mu2 * nu2 * nu2 + 93 * mu2 * nu2 * nu2 * nu2 +
                          14 * nu2 * nu2 * nu2 * nu2;
    CHECK(opa_noise_avg_printed(0, 0, kG2) == doctest::Approx(vacuum).epsilon(1e-12));
    CHECK(opa_noise_avg_printed(0, 0, kG2) == doctest::Approx(5084398.5).epsilon(1e-8));
}

TEST_CASE("snr") {
    CHECK(snr(2.0, std::sqrt(466.0)).value == doctest::Approx(0.092648).epsilon(1e-5));
    CHECK(snr(1491.479, 9694.6).value == doctest::Approx(0.153846).epsilon(1e-5));
    const auto zero = snr(0.0, 0.0);
    CHECK(zero.value == 0.0);
    CHECK(zero.indeterminate);
    CHECK_FALSE(snr(0.0, 3.0).indeterminate);
    CHECK_THROWS_AS(snr(1.0, 0.0), DivisionError);
    CHECK_THROWS_AS(snr(1.0, -1.0), DomainError);
}

TEST_CASE("ratios") {
    CHECK(signal_ratio(10, 10, kG2) == doctest::Approx(239.3063).epsilon(1e-6));
    CHECK(signal_ratio(3, 5, {0.0, 0.0}) == 1.0);
    CHECK_THROWS_AS(signal_ratio(0, 1, kG2), DomainError);
    CHECK(snr_ratio(1, 1, kG2) == doctest::Approx(1.660543).epsilon(1e-6));
    CHECK(snr_ratio(1, 1, kG2) == doctest::Approx(1.660).epsilon(0.005 / 1.66));
    const double asymptote = std::sqrt(190.0 / 162.0);
    for (double g : {1.0, 2.0, 3.0}) {
        CHECK(std::abs(snr_ratio(1e6, 1e6, {g, 0.0}) - asymptote) < 1e-5);
    }
}

TEST_CASE("property: snr ratio decreases along the n sweep") {
    testing::Draw draw(34);
    for (int i = 0; i < 20; ++i) {
        const OpaParams p{draw.uniform(0.2, 3.0), 0.0};
        double prev = snr_ratio(0.01, 0.01, p);
        for (double n = 0.02; n < 1e4; n *= 1.2) {
            const double r = snr_ratio(n, n, p);
            CHECK(r < prev);
            prev = r;
        }
    }
}

TEST_CASE("property: signal ratio decreases toward cosh^4 g") {
    testing::Draw draw(35);
    for (int i = 0; i < 20; ++i) {
        const OpaParams p{draw.uniform(0.1, 3.0), 0.0};
        const double floor = std::pow(std::cosh(p.gain), 4);
        double prev = signal_ratio(0.01, 0.01, p);
        for (double n = 0.02; n < 1e6; n *= 1.5) {
            const double r = signal_ratio(n, n, p);
            CHECK(r < prev);
            CHECK(r > floor);
            prev = r;
        }
    }
}

TEST_CASE("readings") {
    const auto plain = plain_reading({1, 1}, Geometry::with_phase(0));
    CHECK(plain.ac_signal == 2.0);
    CHECK(plain.dc_offset == 8.0);
    CHECK(plain.noise == doctest::Approx(std::sqrt(466.0)));
    CHECK(plain.snr == doctest::Approx(0.092648).epsilon(1e-5));
    const auto amp = opa_reading({1, 1}, kG2, Geometry::with_phase(0));
    CHECK(amp.snr / plain.snr == doctest::Approx(snr_ratio(1, 1, kG2)));
    const auto vac = plain_reading({0, 0}, Geometry::with_phase(0));
    CHECK(vac.snr == 0.0);
    CHECK(vac.snr_indeterminate);
    CHECK_THROWS_AS(plain_reading({-1, 1}, Geometry::with_phase(0)), DomainError);
}

TEST_CASE("consistency report") {
    CHECK_THROWS_AS(consistency_report(kG2, {}), DomainError);
    const auto g0 = consistency_report({0.0, 0.0}, {{1, 1}});
    const auto& p = g0.points.front();
    CHECK(p.thermal_printed == 466.0);
    CHECK(p.thermal_substituted == doctest::Approx(454.0));
    CHECK(p.thermal_residual_per_n2m2 == doctest::Approx(12.0));
    CHECK(p.opa_printed_g0 == doctest::Approx(418.0));
    CHECK(p.g0_rel_deviation == doctest::Approx(48.0 / 466.0));
    CHECK(p.opa_substituted == doctest::Approx(454.0));

    const auto amp = consistency_report(kG2, {{0, 0}, {1, 1}, {2, 0.5}});
    CHECK(amp.points.size() == 3);
    CHECK(amp.opa.max > 1e-3);
    CHECK(std::isnan(amp.points.front().thermal_residual_per_n2m2));
    // The propagated vacuum is thermal with mean nu^2 in each arm.
    const double nu2 = coeffs(kG2).nu2();
    CHECK(amp.points.front().opa_substituted == doctest::Approx(noise_avg_substitution(thermal(nu2), thermal(nu2))));
}
