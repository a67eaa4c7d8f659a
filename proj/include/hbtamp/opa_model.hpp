#pragma once

// Optical parametric amplifier with a vacuum idler: Bogoliubov coefficients and
// propagation of signal-mode photon-number moments.

#include "hbtamp/photon_stats.hpp"

namespace hbtamp {

/// Parametric gain g and pump phase theta (radians, [0, 2pi)).
struct OpaParams {
    double gain = 0.0;
    double pump_phase = 0.0;

    /// Throws DomainError for a negative/non-finite gain or a phase outside [0, 2pi).
    void validate() const;
};

/// mu = cosh g, nu = sinh g. The pump phase only enters v = e^{i theta} nu.
struct BogoliubovCoeffs {
    double mu = 1.0;
    double nu = 0.0;

    double mu2() const noexcept { return mu * mu; }
    double nu2() const noexcept { return nu * nu; }
};

BogoliubovCoeffs coeffs(const OpaParams& params);

/// Moment propagation and everything downstream only exists for theta = 0;
/// throws UnsupportedConfiguration otherwise.
void require_zero_pump_phase(const OpaParams& params);

/// Output signal-mode moments for signal input `input` and vacuum idler, using
/// the four propagation polynomials in (mu, nu) term for term.
MomentVector propagate_moments(const MomentVector& input, const OpaParams& params);

/// mu^2 n̄ + nu^2: mean photon number leaving the signal port.
double equivalent_thermal_mean(double n_bar, const OpaParams& params);

/// nu^2 (n̄ + 1): mean photon number leaving the idler port.
double idler_output_mean(double n_bar, const OpaParams& params);

}  // namespace hbtamp
