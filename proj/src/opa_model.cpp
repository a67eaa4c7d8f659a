#include "hbtamp/opa_model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hbtamp/errors.hpp"

namespace hbtamp {

void OpaParams::validate() const {
    if (!std::isfinite(gain) || gain < 0.0) {
        throw DomainError("OPA gain must be finite and >= 0, got " + std::to_string(gain));
    }
    if (!std::isfinite(pump_phase) || pump_phase < 0.0 || pump_phase >= 2.0 * std::numbers::pi) {
        throw DomainError("OPA pump phase must lie in [0, 2pi), got " +
                          std::to_string(pump_phase));
    }
}

BogoliubovCoeffs coeffs(const OpaParams& params) {
    params.validate();
    return {std::cosh(params.gain), std::sinh(params.gain)};
}

void require_zero_pump_phase(const OpaParams& params) {
    params.validate();
    if (params.pump_phase != 0.0) {
        throw UnsupportedConfiguration("only pump phase theta = 0 is modelled, got theta = " +
                                       std::to_string(params.pump_phase));
    }
}

MomentVector propagate_moments(const MomentVector& input, const OpaParams& params) {
    require_zero_pump_phase(params);
    if (!input.is_valid()) {
        throw DomainError("input moment vector violates the photon-number moment inequalities");
    }
    const auto c = coeffs(params);
    const double u2 = c.mu2();
    const double v2 = c.nu2();
    const double u4 = u2 * u2, u6 = u4 * u2, u8 = u4 * u4;
    const double v4 = v2 * v2, v6 = v4 * v2, v8 = v4 * v4;
    const auto [n1, n2, n3, n4] = input.as_array();

    MomentVector out;
    out.m1 = u2 * n1 + v2;
    out.m2 = u4 * n2 + 3.0 * u2 * v2 * n1 + u2 * v2 + v4;
    out.m3 = u6 * n3 + 6.0 * u4 * v2 * n2 + 4.0 * u4 * v2 * n1 + 7.0 * u2 * v4 * n1 + u4 * v2 +
             4.0 * u2 * v4 + v6;
    out.m4 = u8 * n4 + 10.0 * u6 * v2 * n3 + 10.0 * u6 * v2 * n2 + 25.0 * u4 * v4 * n2 +
             11.0 * u4 * v4 + u6 * v2 + 11.0 * u2 * v6 + v8 +
             (30.0 * u4 * v4 + 5.0 * u6 * v2 + 15.0 * u2 * v6) * n1;
    return out;
}

double equivalent_thermal_mean(double n_bar, const OpaParams& params) {
    ThermalSource source(n_bar);
    const auto c = coeffs(params);
    return c.mu2() * source.mean_photon_number() + c.nu2();
}

double idler_output_mean(double n_bar, const OpaParams& params) {
    ThermalSource source(n_bar);
    const auto c = coeffs(params);
    return c.nu2() * (source.mean_photon_number() + 1.0);
}

}  // namespace hbtamp
