#pragma once

// Correlation, noise and SNR algebra of the plain and the OPA-amplified
// intensity interferometer.
//
// Squared-noise functions return (Delta C)^2; snr() takes Delta C itself.

#include <cstddef>
#include <vector>

#include "hbtamp/opa_model.hpp"
#include "hbtamp/photon_stats.hpp"

namespace hbtamp {

/// Wavenumber k, detector baseline r0 = |r1 - r2| and angular separation phi.
class Geometry {
public:
    Geometry() = default;
    /// Throws DomainError unless all three are finite and >= 0.
    Geometry(double wavenumber, double baseline, double angular_size);

    /// Geometry whose interference phase k r0 phi equals `delta`.
    static Geometry with_phase(double delta);

    double wavenumber() const noexcept { return k_; }
    double baseline() const noexcept { return r0_; }
    double angular_size() const noexcept { return phi_; }
    double phase() const noexcept { return k_ * r0_ * phi_; }

private:
    double k_ = 0.0;
    double r0_ = 0.0;
    double phi_ = 0.0;
};

/// Mean photon numbers of the two source modes.
struct SourcePair {
    double n_bar = 0.0;
    double m_bar = 0.0;

    void validate() const;
};

struct CorrelationReading {
    double ac_signal = 0.0;
    double dc_offset = 0.0;
    double noise = 0.0;  // phase-averaged Delta C'
    double snr = 0.0;
    bool snr_indeterminate = false;  // 0/0
};

// --- plain interferometer ---------------------------------------------------

/// <n^2> + <m^2> + 2 <n><m> (1 + cos Delta).
double correlation_full(const MomentVector& nm, const MomentVector& mm, const Geometry& geom);

/// Phase-independent part of correlation_full, removed by DC subtraction.
double correlation_dc(const MomentVector& nm, const MomentVector& mm);

/// 2 n̄ m̄ cos Delta.
double correlation_ac(double n_bar, double m_bar, const Geometry& geom);

/// Full squared correlator noise including the cos Delta and cos 2Delta terms,
/// as a polynomial in the eight moments, exactly as typeset.
double noise_full(const MomentVector& nm, const MomentVector& mm, const Geometry& geom);

/// noise_full with every phase-dependent term dropped. Generic in the moments,
/// so it can be fed thermal or OPA-propagated moments.
double noise_avg_substitution(const MomentVector& nm, const MomentVector& mm);

/// The printed closed-form polynomial for the thermal phase-averaged noise.
double noise_avg_printed(double n_bar, double m_bar);

// --- OPA-amplified interferometer --------------------------------------------

/// 2 (mu^2 n̄ + nu^2)(mu^2 m̄ + nu^2) cos Delta.
double opa_correlation_ac(double n_bar, double m_bar, const OpaParams& params,
                          const Geometry& geom);

/// The printed closed-form OPA noise polynomial, grouped by mu^8, mu^6 nu^2,
/// mu^4 nu^4, mu^2 nu^6 and nu^8 with the printed coefficients. Note that it is
/// not symmetric under n̄ <-> m̄ (73/77 and 199/195 in two groups).
double opa_noise_avg_printed(double n_bar, double m_bar, const OpaParams& params);

// --- signal-to-noise ----------------------------------------------------------

struct SnrValue {
    double value = 0.0;
    bool indeterminate = false;  // signal == noise == 0, reported as 0
};

/// signal / noise. Throws DivisionError for zero noise with nonzero signal and
/// DomainError for negative or non-finite noise.
SnrValue snr(double ac_signal, double noise);

/// (mu^2 n̄ + nu^2)(mu^2 m̄ + nu^2) / (n̄ m̄). Throws DomainError for n̄ or m̄ == 0.
double signal_ratio(double n_bar, double m_bar, const OpaParams& params);

/// SNR of the amplified scheme over SNR of the plain scheme at cos Delta = 1,
/// using the printed noise polynomials for both.
double snr_ratio(double n_bar, double m_bar, const OpaParams& params);

CorrelationReading plain_reading(const SourcePair& sources, const Geometry& geom);
CorrelationReading opa_reading(const SourcePair& sources, const OpaParams& params,
                               const Geometry& geom);

// --- internal-consistency diagnostics ----------------------------------------

struct ConsistencyPoint {
    double n_bar = 0.0;
    double m_bar = 0.0;
    /// (a) printed thermal noise vs substitution of corrected thermal moments.
    double thermal_printed = 0.0;
    double thermal_substituted = 0.0;
    double thermal_rel_deviation = 0.0;
    /// (printed - substituted) / (n̄^2 m̄^2); NaN where n̄ m̄ == 0.
    double thermal_residual_per_n2m2 = 0.0;
    /// (b) printed OPA noise vs substitution of propagated moments.
    double opa_printed = 0.0;
    double opa_substituted = 0.0;
    double opa_rel_deviation = 0.0;
    /// (c) printed OPA noise at g = 0 vs printed thermal noise.
    double opa_printed_g0 = 0.0;
    double g0_rel_deviation = 0.0;
};

struct DeviationSummary {
    double max = 0.0;
    double mean = 0.0;
};

struct ConsistencyReport {
    OpaParams params;
    std::vector<ConsistencyPoint> points;  // in grid order
    DeviationSummary thermal;
    DeviationSummary opa;
    DeviationSummary g0;
};

/// |x - ref| / |ref|, with 0/0 defined as 0.
double relative_deviation(double x, double ref);

/// Throws DomainError on an empty grid.
ConsistencyReport consistency_report(const OpaParams& params,
                                     const std::vector<SourcePair>& grid);

}  // namespace hbtamp
