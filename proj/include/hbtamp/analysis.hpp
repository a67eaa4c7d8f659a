#pragma once

// Ratio sweeps, the A + B / n̄ fit, fringe fitting for the angular size and a
// semiclassical Monte Carlo of the correlator.

#include <cstdint>
#include <optional>
#include <vector>

#include "hbtamp/hbt_model.hpp"

namespace hbtamp {

enum class Spacing { Linear, Log };

const char* to_string(Spacing spacing);

struct SweepSpec {
    double g = 2.0;
    double n_min = 0.15;
    double n_max = 20.0;
    int points = 200;
    Spacing spacing = Spacing::Log;
    bool equal_sources = true;
    double fixed_m_bar = 1.0;  // used when !equal_sources

    /// Requires 0 < n_min <= n_max and points >= 2, or points == 1 with
    /// n_min == n_max.
    void validate() const;
    std::vector<double> grid() const;
};

/// Default window for the inverse-law fit (n̄ in [0.5, 20], 200 log points, g = 2).
SweepSpec default_fit_spec();

struct RatioRow {
    double n_bar = 0.0;
    double m_bar = 0.0;
    double signal_ratio = 0.0;
    double snr_ratio = 0.0;
};

std::vector<RatioRow> sweep_ratios(const SweepSpec& spec);

struct FitResult {
    double A = 0.0;
    double B = 0.0;
    double rss = 0.0;
    SweepSpec grid_used;
};

/// Least squares of snr_ratio against {1, 1/n̄}. Needs >= 3 rows; throws
/// DegenerateFitError when the normal equations are singular.
FitResult fit_inverse_law(const std::vector<RatioRow>& table, const SweepSpec& grid_used);
FitResult fit_inverse_law(const SweepSpec& spec);

/// n̄ = B / (target - A). Throws UnreachableTargetError for target <= A.
double target_ratio_operating_point(const FitResult& fit, double target);

/// Fits over each window in turn (same g, points and spacing as `base`).
std::vector<FitResult> fit_sensitivity(const SweepSpec& base,
                                       const std::vector<std::pair<double, double>>& windows);

// --- angular size from a baseline scan ----------------------------------------

struct ScanPoint {
    double baseline = 0.0;     // r0
    double correlation = 0.0;  // measured C'
};

struct PhiEstimate {
    double phi = 0.0;
    double stderr_phi = 0.0;
    double amplitude = 0.0;
    double stderr_amplitude = 0.0;
    int iterations = 0;
    bool converged = false;
    double rss = 0.0;
};

inline constexpr int kGaussNewtonIterationCap = 200;

/// Fits C'(r0) = S cos(k r0 phi). The angular frequency k phi starts at the
/// minimum of a cosine periodogram and is refined by damped Gauss-Newton (step
/// halved until the residual drops). With `amplitude_known`, S is held fixed.
/// Throws DomainError for fewer than 4 points, non-finite data, or a fitted
/// fringe coverage below a quarter period.
PhiEstimate estimate_phi(const std::vector<ScanPoint>& scan, double wavenumber,
                         std::optional<double> amplitude_known = std::nullopt);

struct ScanSpec {
    double phi = 1e-8;
    double wavenumber = 1.42e7;
    double r_min = 0.0;
    double r_max = 40.0;
    int points = 64;
    double amplitude = 1.0;
    double noise_fraction = 0.0;  // Gaussian sigma as a fraction of amplitude
    std::uint64_t seed = 0;
};

/// Evenly spaced synthetic scan with optional additive Gaussian noise.
std::vector<ScanPoint> synthetic_scan(const ScanSpec& spec);

// --- semiclassical Monte Carlo -------------------------------------------------

struct MonteCarloResult {
    double mean = 0.0;
    double variance = 0.0;
    double stderr_mean = 0.0;
    double stderr_variance = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    /// Closed-form classical Gaussian-field values.
    double classical_mean = 0.0;
    double classical_variance = 0.0;
    /// Photon-number correlator with corrected thermal moments and the
    /// diagonal shot terms it adds over the classical mean (n̄ + m̄).
    double quantum_mean = 0.0;
    double diagonal_gap = 0.0;
};

inline constexpr std::uint64_t kMonteCarloBlockSize = 65'536;

/// Draws E_k, E_k' as independent circular complex Gaussians with
/// <|E|^2> = n̄, m̄, forms I_1 = |E_k + E_k'|^2 and I_2 = |E_k e^{i delta} + E_k'|^2
/// and accumulates C = I_1 I_2. Sample block b uses a generator seeded from
/// (seed, b), so results do not depend on the thread count.
MonteCarloResult monte_carlo_semiclassical(double n_bar, double m_bar, double delta,
                                           std::uint64_t samples, std::uint64_t seed,
                                           unsigned threads = 0);

/// Classical (Gaussian-field) correlator mean and variance.
double classical_correlation_mean(double n_bar, double m_bar, double delta);
double classical_correlation_variance(double n_bar, double m_bar, double delta);

}  // namespace hbtamp
