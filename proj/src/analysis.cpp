#include "hbtamp/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <string>
#include <thread>

#include "hbtamp/errors.hpp"

namespace hbtamp {

const char* to_string(Spacing spacing) { return spacing == Spacing::Log ? "log" : "linear"; }

void SweepSpec::validate() const {
    if (!std::isfinite(g) || g < 0.0) throw DomainError("sweep gain must be finite and >= 0");
    if (!(std::isfinite(n_min) && std::isfinite(n_max) && n_min > 0.0 && n_min <= n_max)) {
        throw DomainError("sweep bounds must satisfy 0 < n_min <= n_max");
    }
    if (points < 1) throw DomainError("sweep needs at least one point");
    if (points == 1 && n_min != n_max) {
        throw DomainError("a single-point sweep needs n_min == n_max");
    }
    if (!equal_sources && !(std::isfinite(fixed_m_bar) && fixed_m_bar > 0.0)) {
        throw DomainError("fixed m_bar must be finite and > 0");
    }
}

std::vector<double> SweepSpec::grid() const {
    validate();
    std::vector<double> out(static_cast<std::size_t>(points));
    if (points == 1) {
        out[0] = n_min;
        return out;
    }
    const double last = static_cast<double>(points - 1);
    for (int i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / last;
        out[static_cast<std::size_t>(i)] =
            spacing == Spacing::Log ? n_min * std::pow(n_max / n_min, t) : n_min + (n_max - n_min) * t;
    }
    out.front() = n_min;
    out.back() = n_max;
    return out;
}

SweepSpec default_fit_spec() {
    SweepSpec s;
    s.n_min = 0.5;
    s.n_max = 20.0;
    return s;
}

std::vector<RatioRow> sweep_ratios(const SweepSpec& spec) {
    const auto grid = spec.grid();
    const OpaParams params{spec.g, 0.0};
    std::vector<RatioRow> rows;
    rows.reserve(grid.size());
    for (double n : grid) {
        const double m = spec.equal_sources ? n : spec.fixed_m_bar;
        rows.push_back({n, m, signal_ratio(n, m, params), snr_ratio(n, m, params)});
    }
    return rows;
}

FitResult fit_inverse_law(const std::vector<RatioRow>& table, const SweepSpec& grid_used) {
    if (table.size() < 3) throw DomainError("inverse-law fit needs at least 3 points");
    // Normal equations for y = A + B x with x = 1/n.
    double sx = 0.0, sxx = 0.0, sy = 0.0, sxy = 0.0;
    for (const auto& row : table) {
        const double x = 1.0 / row.n_bar;
        sx += x;
        sxx += x * x;
        sy += row.snr_ratio;
        sxy += x * row.snr_ratio;
    }
    const double n = static_cast<double>(table.size());
    const double det = n * sxx - sx * sx;
    if (!(std::abs(det) > 1e-12 * n * sxx)) {
        throw DegenerateFitError("singular normal equations: the n_bar values do not vary");
    }
    FitResult fit;
    fit.A = (sxx * sy - sx * sxy) / det;
    fit.B = (n * sxy - sx * sy) / det;
    for (const auto& row : table) {
        const double r = row.snr_ratio - (fit.A + fit.B / row.n_bar);
        fit.rss += r * r;
    }
    fit.grid_used = grid_used;
    return fit;
}

FitResult fit_inverse_law(const SweepSpec& spec) { return fit_inverse_law(sweep_ratios(spec), spec); }

double target_ratio_operating_point(const FitResult& fit, double target) {
    if (!std::isfinite(target) || target <= fit.A) {
        throw UnreachableTargetError("target ratio " + std::to_string(target) +
                                     " is not above the fitted asymptote A = " +
                                     std::to_string(fit.A));
    }
    return fit.B / (target - fit.A);
}

std::vector<FitResult> fit_sensitivity(const SweepSpec& base,
                                       const std::vector<std::pair<double, double>>& windows) {
    std::vector<FitResult> out;
    out.reserve(windows.size());
    for (const auto& [lo, hi] : windows) {
        SweepSpec s = base;
        s.n_min = lo;
        s.n_max = hi;
        out.push_back(fit_inverse_law(s));
    }
    return out;
}

// --- fringe fitting -----------------------------------------------------------

namespace {

struct CosineFit {
    double amplitude;
    double rss;
};

CosineFit best_amplitude(const std::vector<ScanPoint>& scan, double omega,
                         std::optional<double> known) {
    double syc = 0.0, scc = 0.0, syy = 0.0;
    for (const auto& p : scan) {
        const double c = std::cos(omega * p.baseline);
        syc += p.correlation * c;
        scc += c * c;
        syy += p.correlation * p.correlation;
    }
    if (known) {
        const double s = *known;
        return {s, std::max(0.0, syy - 2.0 * s * syc + s * s * scc)};
    }
    if (scc == 0.0) return {0.0, syy};
    return {syc / scc, std::max(0.0, syy - syc * syc / scc)};
}

double residual_sum(const std::vector<ScanPoint>& scan, double s, double omega) {
    double rss = 0.0;
    for (const auto& p : scan) {
        const double r = p.correlation - s * std::cos(omega * p.baseline);
        rss += r * r;
    }
    return rss;
}

}  // namespace

PhiEstimate estimate_phi(const std::vector<ScanPoint>& scan, double wavenumber,
                         std::optional<double> amplitude_known) {
    if (scan.size() < 4) throw DomainError("baseline scan needs at least 4 points");
    if (!std::isfinite(wavenumber) || wavenumber <= 0.0) {
        throw DomainError("wavenumber must be finite and > 0");
    }
    std::vector<double> r;
    r.reserve(scan.size());
    double syy = 0.0;
    for (const auto& p : scan) {
        if (!std::isfinite(p.baseline) || !std::isfinite(p.correlation) || p.baseline < 0.0) {
            throw DomainError("scan contains a non-finite value or negative baseline");
        }
        r.push_back(p.baseline);
        syy += p.correlation * p.correlation;
    }
    std::sort(r.begin(), r.end());
    const double span = r.back() - r.front();
    double min_step = span;
    for (std::size_t i = 1; i < r.size(); ++i) {
        const double d = r[i] - r[i - 1];
        if (d > 0.0) min_step = std::min(min_step, d);
    }
    if (!(span > 0.0)) throw DomainError("scan baselines do not vary");
    if (amplitude_known && !std::isfinite(*amplitude_known)) {
        throw DomainError("known amplitude must be finite");
    }

    // Periodogram over (0, Nyquist].
    const double omega_max = std::numbers::pi / min_step;
    const int candidates = std::max(4000, 32 * static_cast<int>(scan.size()));
    double omega = omega_max / candidates;
    CosineFit best = best_amplitude(scan, omega, amplitude_known);
    for (int i = 2; i <= candidates; ++i) {
        const double w = omega_max * static_cast<double>(i) / candidates;
        const auto f = best_amplitude(scan, w, amplitude_known);
        if (f.rss < best.rss) {
            best = f;
            omega = w;
        }
    }

    PhiEstimate est;
    double s = best.amplitude;
    double rss = residual_sum(scan, s, omega);
    const bool fit_amplitude = !amplitude_known.has_value();
    const int params = fit_amplitude ? 2 : 1;

    const auto normal_matrix = [&](double amp, double w, Eigen::Vector2d* gradient) {
        Eigen::Matrix2d jtj = Eigen::Matrix2d::Zero();
        Eigen::Vector2d jtr = Eigen::Vector2d::Zero();
        for (const auto& p : scan) {
            const double c = std::cos(w * p.baseline);
            const double sn = std::sin(w * p.baseline);
            const Eigen::Vector2d j(c, -amp * p.baseline * sn);
            const double res = p.correlation - amp * c;
            jtj += j * j.transpose();
            jtr += j * res;
        }
        if (gradient) *gradient = jtr;
        return jtj;
    };

    for (est.iterations = 1; est.iterations <= kGaussNewtonIterationCap; ++est.iterations) {
        Eigen::Vector2d jtr;
        const Eigen::Matrix2d jtj = normal_matrix(s, omega, &jtr);
        Eigen::Vector2d step = Eigen::Vector2d::Zero();
        if (fit_amplitude) {
            step = jtj.ldlt().solve(jtr);
        } else if (jtj(1, 1) > 0.0) {
            step(1) = jtr(1) / jtj(1, 1);
        }
        if (!step.allFinite()) break;

        const bool tiny = std::abs(step(1)) <= 1e-12 * std::abs(omega) &&
                          std::abs(step(0)) <= 1e-12 * std::max(std::abs(s), 1e-300);
        if (tiny || rss <= 1e-28 * syy) {
            est.converged = true;
            break;
        }
        double lambda = 1.0;
        bool accepted = false;
        for (int halving = 0; halving < 40; ++halving, lambda *= 0.5) {
            const double s_try = s + lambda * step(0);
            const double w_try = omega + lambda * step(1);
            if (!(w_try > 0.0)) continue;
            const double rss_try = residual_sum(scan, s_try, w_try);
            if (rss_try < rss) {
                s = s_try;
                omega = w_try;
                rss = rss_try;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            // No descent along the Gauss-Newton direction: at the minimum to
            // within rounding.
            est.converged = std::abs(step(1)) <= 1e-6 * std::abs(omega);
            break;
        }
    }
    if (est.iterations > kGaussNewtonIterationCap) est.iterations = kGaussNewtonIterationCap;

    if (omega * span < std::numbers::pi / 2.0) {
        throw DomainError("scan covers less than a quarter fringe (phase span " +
                          std::to_string(omega * span) + " rad); angular size not identifiable");
    }

    const Eigen::Matrix2d jtj = normal_matrix(s, omega, nullptr);
    const double dof = static_cast<double>(scan.size()) - params;
    const double sigma2 = rss / dof;
    double var_omega = 0.0, var_s = 0.0;
    if (fit_amplitude) {
        const Eigen::Matrix2d cov = sigma2 * jtj.inverse();
        var_s = cov(0, 0);
        var_omega = cov(1, 1);
    } else {
        var_omega = sigma2 / jtj(1, 1);
    }
    est.phi = omega / wavenumber;
    est.stderr_phi = std::sqrt(std::max(0.0, var_omega)) / wavenumber;
    est.amplitude = s;
    est.stderr_amplitude = std::sqrt(std::max(0.0, var_s));
    est.rss = rss;
    if (est.converged && !std::isfinite(est.stderr_phi)) est.converged = false;
    return est;
}

std::vector<ScanPoint> synthetic_scan(const ScanSpec& spec) {
    if (spec.points < 2) throw DomainError("synthetic scan needs at least 2 points");
    if (!(spec.r_max > spec.r_min) || spec.r_min < 0.0) throw DomainError("need 0 <= r_min < r_max");
    if (!(spec.noise_fraction >= 0.0)) throw DomainError("noise fraction must be >= 0");
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> noise(0.0, spec.noise_fraction * std::abs(spec.amplitude));
    std::vector<ScanPoint> scan;
    scan.reserve(static_cast<std::size_t>(spec.points));
    for (int i = 0; i < spec.points; ++i) {
        const double r0 = spec.r_min + (spec.r_max - spec.r_min) * i / (spec.points - 1);
        double c = spec.amplitude * std::cos(spec.wavenumber * r0 * spec.phi);
        if (spec.noise_fraction > 0.0) c += noise(rng);
        scan.push_back({r0, c});
    }
    return scan;
}

// --- Monte Carlo --------------------------------------------------------------

double classical_correlation_mean(double n, double m, double delta) {
    // <|E|^4> = 2 <|E|^2>^2 for a circular Gaussian field.
    return 2.0 * n * n + 2.0 * m * m + 2.0 * n * m * (1.0 + std::cos(delta));
}

double classical_correlation_variance(double n, double m, double delta) {
    const double n1 = n, n2 = 2 * n * n, n3 = 6 * n * n * n, n4 = 24 * n * n * n * n;
    const double m1 = m, m2 = 2 * m * m, m3 = 6 * m * m * m, m4 = 24 * m * m * m * m;
    const double constant = n4 - n2 * n2 + 8 * n3 * m1 - 4 * n2 * n1 * m1 + 8 * n1 * m3 -
                            4 * n1 * m1 * m2 + 16 * n2 * m2 + m4 - m2 * m2 -
                            6 * n1 * n1 * m1 * m1;
    const double first = 4 * (2 * (n3 * m1 + 2 * n2 * m2 + n1 * m3) - n2 * n1 * m1 -
                              2 * n1 * n1 * m1 * m1 - n1 * m1 * m2);
    const double second = 2 * (n2 * m2 - n1 * n1 * m1 * m1);
    return constant + first * std::cos(delta) + second * std::cos(2 * delta);
}

namespace {

struct BlockSums {
    long double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    std::uint64_t count = 0;
};

BlockSums run_block(double n, double m, double delta, std::uint64_t count, std::uint64_t seed,
                    std::uint64_t block, double shift) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> gn(0.0, std::sqrt(n / 2.0));
    std::normal_distribution<double> gm(0.0, std::sqrt(m / 2.0));
    const std::complex<double> phase = std::polar(1.0, delta);
    BlockSums b;
    for (std::uint64_t i = 0; i < count; ++i) {
        std::complex<double> ek, ekp;
        if (n > 0.0) {
            const double re = gn(rng);
            ek = {re, gn(rng)};
        }
        if (m > 0.0) {
            const double re = gm(rng);
            ekp = {re, gm(rng)};
        }
        const double i1 = std::norm(ek + ekp);
        const double i2 = std::norm(ek * phase + ekp);
        const long double x = static_cast<long double>(i1 * i2) - shift;
        const long double x2 = x * x;
        b.s1 += x;
        b.s2 += x2;
        b.s3 += x2 * x;
        b.s4 += x2 * x2;
    }
    b.count = count;
    return b;
}

}  // namespace

MonteCarloResult monte_carlo_semiclassical(double n_bar, double m_bar, double delta,
                                           std::uint64_t samples, std::uint64_t seed,
                                           unsigned threads) {
    if (!std::isfinite(n_bar) || n_bar < 0.0 || !std::isfinite(m_bar) || m_bar < 0.0) {
        throw DomainError("mean photon numbers must be finite and >= 0");
    }
    if (!std::isfinite(delta)) throw DomainError("phase must be finite");
    if (samples < 1) throw DomainError("Monte Carlo needs at least one sample");

    MonteCarloResult out;
    out.samples = samples;
    out.seed = seed;
    out.classical_mean = classical_correlation_mean(n_bar, m_bar, delta);
    out.classical_variance = classical_correlation_variance(n_bar, m_bar, delta);
    out.quantum_mean = correlation_full(thermal_moments(ThermalSource(n_bar)),
                                        thermal_moments(ThermalSource(m_bar)),
                                        Geometry::with_phase(delta));
    out.diagonal_gap = out.quantum_mean - out.classical_mean;

    const std::uint64_t blocks = (samples + kMonteCarloBlockSize - 1) / kMonteCarloBlockSize;
    std::vector<BlockSums> sums(blocks);
    const double shift = out.classical_mean;
    std::atomic<std::uint64_t> next{0};
    const auto worker = [&] {
        for (std::uint64_t b = next++; b < blocks; b = next++) {
            const std::uint64_t begin = b * kMonteCarloBlockSize;
            const std::uint64_t count = std::min(kMonteCarloBlockSize, samples - begin);
            sums[b] = run_block(n_bar, m_bar, delta, count, seed, b, shift);
        }
    };
    unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, blocks));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    BlockSums total;
    for (const auto& b : sums) {  // block order keeps the result thread-count independent
        total.s1 += b.s1;
        total.s2 += b.s2;
        total.s3 += b.s3;
        total.s4 += b.s4;
        total.count += b.count;
    }
    const long double nn = static_cast<long double>(total.count);
    const long double r1 = total.s1 / nn, r2 = total.s2 / nn, r3 = total.s3 / nn,
                      r4 = total.s4 / nn;
    const long double mu2 = r2 - r1 * r1;
    const long double mu4 = r4 - 4 * r3 * r1 + 6 * r2 * r1 * r1 - 3 * r1 * r1 * r1 * r1;
    out.mean = static_cast<double>(shift + r1);
    out.variance = total.count > 1 ? static_cast<double>(mu2 * nn / (nn - 1)) : 0.0;
    out.stderr_mean = std::sqrt(std::max(0.0, out.variance) / static_cast<double>(total.count));
    out.stderr_variance = static_cast<double>(std::sqrt(std::max(0.0L, mu4 - mu2 * mu2) / nn));
    return out;
}

}  // namespace hbtamp
