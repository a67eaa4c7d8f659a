#include "hbtamp/hbt_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hbtamp/errors.hpp"

namespace hbtamp {

namespace {

void require_mean(double value, const char* name) {
    if (!std::isfinite(value) || value < 0.0) {
        throw DomainError(std::string(name) + " must be finite and >= 0, got " +
                          std::to_string(value));
    }
}

void require_moments(const MomentVector& m, const char* name) {
    if (!m.is_valid()) {
        throw DomainError(std::string(name) + " violates the photon-number moment inequalities");
    }
}

}  // namespace

Geometry::Geometry(double wavenumber, double baseline, double angular_size)
    : k_(wavenumber), r0_(baseline), phi_(angular_size) {
    for (double v : {wavenumber, baseline, angular_size}) {
        if (!std::isfinite(v) || v < 0.0) {
            throw DomainError("geometry parameters must be finite and >= 0");
        }
    }
}

Geometry Geometry::with_phase(double delta) { return Geometry(1.0, 1.0, delta); }

void SourcePair::validate() const {
    require_mean(n_bar, "n_bar");
    require_mean(m_bar, "m_bar");
}

double correlation_dc(const MomentVector& nm, const MomentVector& mm) {
    require_moments(nm, "n moments");
    require_moments(mm, "m moments");
    return nm.m2 + mm.m2 + 2.0 * nm.m1 * mm.m1;
}

double correlation_full(const MomentVector& nm, const MomentVector& mm, const Geometry& geom) {
    return correlation_dc(nm, mm) + 2.0 * nm.m1 * mm.m1 * std::cos(geom.phase());
}

double correlation_ac(double n_bar, double m_bar, const Geometry& geom) {
    require_mean(n_bar, "n_bar");
    require_mean(m_bar, "m_bar");
    return 2.0 * n_bar * m_bar * std::cos(geom.phase());
}

double noise_avg_substitution(const MomentVector& nm, const MomentVector& mm) {
    require_moments(nm, "n moments");
    require_moments(mm, "m moments");
    const auto [n1, n2, n3, n4] = nm.as_array();
    const auto [m1, m2, m3, m4] = mm.as_array();
    return n4 - n2 * n2 + 8.0 * n3 * m1 - 4.0 * n2 * n1 * m1 + 8.0 * n1 * m3 -
           4.0 * n1 * m1 * m2 + 16.0 * n2 * m2 + m4 - m2 * m2 - 6.0 * n1 * n1 * m1 * m1;
}

double noise_full(const MomentVector& nm, const MomentVector& mm, const Geometry& geom) {
    const double constant = noise_avg_substitution(nm, mm);
    const auto [n1, n2, n3, n4] = nm.as_array();
    const auto [m1, m2, m3, m4] = mm.as_array();
    (void)n4;
    (void)m4;
    const double delta = geom.phase();
    const double first = 4.0 * (2.0 * (n3 * m1 + 2.0 * n2 * m2 + n1 * m3) - n2 * n1 * m1 -
                                2.0 * n1 * n1 * m1 * m1 - n1 * m1 * m2);
    const double second = 2.0 * (n2 * m2 - 2.0 * n1 * n1 * m1 * m1);
    return constant + first * std::cos(delta) + second * std::cos(2.0 * delta);
}

double noise_avg_printed(double n, double m) {
    require_mean(n, "n_bar");
    require_mean(m, "m_bar");
    const double n2 = n * n, n3 = n2 * n, n4 = n2 * n2;
    const double m2 = m * m, m3 = m2 * m, m4 = m2 * m2;
    return n + 13.0 * n2 + 32.0 * n3 + 20.0 * n4 + m + 13.0 * m2 + 32.0 * m3 + 20.0 * m4 +
           32.0 * n * m + 76.0 * n2 * m + 76.0 * n * m2 + 40.0 * n3 * m + 40.0 * n * m3 +
           70.0 * n2 * m2;
}

double opa_correlation_ac(double n_bar, double m_bar, const OpaParams& params,
                          const Geometry& geom) {
    require_zero_pump_phase(params);
    return correlation_ac(equivalent_thermal_mean(n_bar, params),
                          equivalent_thermal_mean(m_bar, params), geom);
}

double opa_noise_avg_printed(double n, double m, const OpaParams& params) {
    require_zero_pump_phase(params);
    require_mean(n, "n_bar");
    require_mean(m, "m_bar");
    const auto c = coeffs(params);
    const double u2 = c.mu2(), v2 = c.nu2();
    const double n2 = n * n, n3 = n2 * n, n4 = n2 * n2;
    const double m2 = m * m, m3 = m2 * m, m4 = m2 * m2;

    const double g80 = n + 13.0 * n2 + 32.0 * n3 + 20.0 * n4 + m + 13.0 * m2 + 32.0 * m3 +
                       20.0 * m4 + 28.0 * n * m + 68.0 * n2 * m + 68.0 * n * m2 +
                       42.0 * n2 * m2 + 40.0 * n * m3 + 40.0 * n3 * m;
    const double g62 = 2.0 + 51.0 * n + 138.0 * n2 + 88.0 * n3 + 51.0 * m + 138.0 * m2 +
                       88.0 * m3 + 216.0 * n * m + 136.0 * n2 * m + 136.0 * n * m2;
    const double g44 = 46.0 + 199.0 * n + 131.0 * n2 + 195.0 * m + 164.0 * n * m + 131.0 * m2;
    const double g26 = 93.0 + 73.0 * n + 77.0 * m;
    const double g08 = 14.0;

    return u2 * u2 * u2 * u2 * g80 + u2 * u2 * u2 * v2 * g62 + u2 * u2 * v2 * v2 * g44 +
           u2 * v2 * v2 * v2 * g26 + v2 * v2 * v2 * v2 * g08;
}

SnrValue snr(double ac_signal, double noise) {
    if (!std::isfinite(noise) || noise < 0.0) {
        throw DomainError("noise must be finite and >= 0");
    }
    if (noise == 0.0) {
        if (ac_signal == 0.0) return {0.0, true};
        throw DivisionError("SNR undefined: nonzero signal with zero noise");
    }
    return {ac_signal / noise, false};
}

double signal_ratio(double n_bar, double m_bar, const OpaParams& params) {
    require_mean(n_bar, "n_bar");
    require_mean(m_bar, "m_bar");
    if (n_bar == 0.0 || m_bar == 0.0) {
        throw DomainError("signal ratio undefined when the plain signal vanishes (n_bar or m_bar = 0)");
    }
    require_zero_pump_phase(params);
    return equivalent_thermal_mean(n_bar, params) * equivalent_thermal_mean(m_bar, params) /
           (n_bar * m_bar);
}

double snr_ratio(double n_bar, double m_bar, const OpaParams& params) {
    const double gain = signal_ratio(n_bar, m_bar, params);
    const double noise_plain = noise_avg_printed(n_bar, m_bar);
    const double noise_opa = opa_noise_avg_printed(n_bar, m_bar, params);
    return gain * std::sqrt(noise_plain / noise_opa);
}

CorrelationReading plain_reading(const SourcePair& sources, const Geometry& geom) {
    sources.validate();
    const auto nm = thermal_moments(ThermalSource(sources.n_bar));
    const auto mm = thermal_moments(ThermalSource(sources.m_bar));
    CorrelationReading r;
    r.ac_signal = correlation_ac(sources.n_bar, sources.m_bar, geom);
    r.dc_offset = correlation_dc(nm, mm);
    r.noise = std::sqrt(noise_avg_printed(sources.n_bar, sources.m_bar));
    const auto s = snr(r.ac_signal, r.noise);
    r.snr = s.value;
    r.snr_indeterminate = s.indeterminate;
    return r;
}

CorrelationReading opa_reading(const SourcePair& sources, const OpaParams& params,
                               const Geometry& geom) {
    sources.validate();
    const auto nm = thermal_moments(ThermalSource(equivalent_thermal_mean(sources.n_bar, params)));
    const auto mm = thermal_moments(ThermalSource(equivalent_thermal_mean(sources.m_bar, params)));
    CorrelationReading r;
    r.ac_signal = opa_correlation_ac(sources.n_bar, sources.m_bar, params, geom);
    r.dc_offset = correlation_dc(nm, mm);
    r.noise = std::sqrt(opa_noise_avg_printed(sources.n_bar, sources.m_bar, params));
    const auto s = snr(r.ac_signal, r.noise);
    r.snr = s.value;
    r.snr_indeterminate = s.indeterminate;
    return r;
}

double relative_deviation(double x, double ref) {
    const double diff = std::abs(x - ref);
    if (diff == 0.0) return 0.0;
    if (ref == 0.0) return std::numeric_limits<double>::infinity();
    return diff / std::abs(ref);
}

ConsistencyReport consistency_report(const OpaParams& params,
                                     const std::vector<SourcePair>& grid) {
    if (grid.empty()) throw DomainError("consistency report needs a nonempty grid");
    require_zero_pump_phase(params);

    ConsistencyReport report;
    report.params = params;
    report.points.reserve(grid.size());
    const OpaParams identity{0.0, 0.0};
    for (const auto& sp : grid) {
        sp.validate();
        ConsistencyPoint p;
        p.n_bar = sp.n_bar;
        p.m_bar = sp.m_bar;

        const auto tn = thermal_moments(ThermalSource(sp.n_bar));
        const auto tm = thermal_moments(ThermalSource(sp.m_bar));
        p.thermal_printed = noise_avg_printed(sp.n_bar, sp.m_bar);
        p.thermal_substituted = noise_avg_substitution(tn, tm);
        p.thermal_rel_deviation = relative_deviation(p.thermal_substituted, p.thermal_printed);
        const double n2m2 = sp.n_bar * sp.n_bar * sp.m_bar * sp.m_bar;
        p.thermal_residual_per_n2m2 = n2m2 > 0.0
                                          ? (p.thermal_printed - p.thermal_substituted) / n2m2
                                          : std::numeric_limits<double>::quiet_NaN();

        p.opa_printed = opa_noise_avg_printed(sp.n_bar, sp.m_bar, params);
        p.opa_substituted =
            noise_avg_substitution(propagate_moments(tn, params), propagate_moments(tm, params));
        p.opa_rel_deviation = relative_deviation(p.opa_printed, p.opa_substituted);

        p.opa_printed_g0 = opa_noise_avg_printed(sp.n_bar, sp.m_bar, identity);
        p.g0_rel_deviation = relative_deviation(p.opa_printed_g0, p.thermal_printed);
        report.points.push_back(p);
    }

    const auto summarize = [&](auto field) {
        DeviationSummary s;
        for (const auto& p : report.points) {
            const double v = p.*field;
            s.max = std::max(s.max, v);
            s.mean += v;
        }
        s.mean /= static_cast<double>(report.points.size());
        return s;
    };
    report.thermal = summarize(&ConsistencyPoint::thermal_rel_deviation);
    report.opa = summarize(&ConsistencyPoint::opa_rel_deviation);
    report.g0 = summarize(&ConsistencyPoint::g0_rel_deviation);
    return report;
}

}  // namespace hbtamp
