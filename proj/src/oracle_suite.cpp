#include "hbtamp/oracle_suite.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hbtamp/analysis.hpp"
#include "hbtamp/errors.hpp"
#include "hbtamp/fock_oracle.hpp"
#include "hbtamp/opa_model.hpp"

namespace hbtamp {

const char* to_string(Expectation expectation) {
    return expectation == Expectation::Pass ? "EXPECTED-PASS" : "EXPECTED-FAIL";
}

void OracleSuiteConfig::validate() const {
    if (n_values.empty() || g_values.empty()) throw DomainError("oracle grid lists must be non-empty");
    for (double n : n_values) {
        if (!std::isfinite(n) || n < 0.0) throw DomainError("photon numbers must be finite and >= 0");
    }
    for (double g : g_values) {
        if (!std::isfinite(g) || g < 0.0) throw DomainError("gains must be finite and >= 0");
    }
    for (double d : delta_values) {
        if (!std::isfinite(d)) throw DomainError("phases must be finite");
    }
    if (!(tail_bound > 0.0 && tail_bound < 1.0)) throw DomainError("tail bound must lie in (0, 1)");
    if (max_dim < 2 || max_dim > fock::kMaxDimension) {
        throw DomainError("max_dim must lie in [2, " + std::to_string(fock::kMaxDimension) + "]");
    }
    if (!(moment_rel_tol > 0.0 && moment_rel_tol < 1.0)) {
        throw DomainError("moment tolerance must lie in (0, 1)");
    }
}

bool expected_passes_hold(const std::vector<OracleCheck>& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const OracleCheck& c) {
        return c.expectation == Expectation::Fail || c.passed;
    });
}

int oracle_dimension(double n_mean, double gain, const OracleSuiteConfig& config) {
    const OpaParams p{gain, 0.0};
    const double widest = std::max(equivalent_thermal_mean(n_mean, p), idler_output_mean(n_mean, p));
    return fock::moment_truncation_dimension(widest, 4, config.moment_rel_tol, config.tail_bound,
                                             config.max_dim);
}

namespace {

OracleCheck make_check(std::string name, Expectation e, double dev, double tol, std::string note) {
    OracleCheck c;
    c.name = std::move(name);
    c.expectation = e;
    c.max_rel_deviation = dev;
    c.tolerance = tol;
    c.passed = dev <= tol;
    c.note = std::move(note);
    return c;
}

double rel(double x, double ref) { return relative_deviation(x, ref); }

}  // namespace

std::vector<OracleCheck> run_oracle_suite(const OracleSuiteConfig& config) {
    config.validate();
    std::vector<double> deltas = config.delta_values;
    if (deltas.empty()) {
        deltas = {0.0, std::numbers::pi / 4, std::numbers::pi / 2, std::numbers::pi};
    }
    std::vector<OracleCheck> out;

    // Thermal moments against direct Bose-Einstein summation.
    {
        double dev = 0.0, dev_printed = 0.0, per_n3 = 0.0;
        for (double n : config.n_values) {
            const ThermalSource src(n);
            const auto sum = geometric_summation_moments(src, 1e-15);
            dev = std::max(dev, max_relative_difference(thermal_moments(src), sum, 1e-300));
            const auto printed = thermal_moments(src, MomentConvention::Printed);
            dev_printed = std::max(dev_printed, max_relative_difference(printed, sum, 1e-300));
            if (n > 0.0) per_n3 = std::max(per_n3, (sum.m3 - printed.m3) / (n * n * n));
        }
        out.push_back(make_check("thermal_moments_vs_summation", Expectation::Pass, dev, 1e-9,
                                 "corrected closed forms <n^1..4> vs direct summation"));
        const auto one = geometric_summation_moments(ThermalSource(1.0), 1e-15);
        auto c = make_check("printed_third_moment_vs_summation", Expectation::Fail, dev_printed, 1e-9,
                            "typeset <n^3> = N^3 + 6N^2 + N drops 5N^3 (misprint); at N = 1 "
                            "summation gives 13, printed form 8");
        c.details = {{"summation_m3_at_1", one.m3},
                     {"printed_m3_at_1", thermal_moments(ThermalSource(1.0), MomentConvention::Printed).m3},
                     {"deficit_per_N3", per_n3}};
        out.push_back(std::move(c));
    }

    // Moment propagation through the amplifier: Fock oracle, Wick oracle, closure.
    if (config.include_fock) {
        double dev_signal = 0.0, dev_idler = 0.0, dev_wick = 0.0, dev_closure = 0.0;
        double max_deficit = 0.0;
        int max_dim = 0;
        for (double n : config.n_values) {
            const auto in = thermal_moments(ThermalSource(n));
            for (double g : config.g_values) {
                const OpaParams p{g, 0.0};
                const auto predicted = propagate_moments(in, p);
                const auto idler = thermal_moments(ThermalSource(idler_output_mean(n, p)));

                const int dim = oracle_dimension(n, g, config);
                const fock::FockSpace space(dim, config.tail_bound);
                const auto state = fock::two_mode_squeeze(
                    fock::tensor_product(fock::thermal_state(n, space), fock::vacuum_state(space)), g,
                    space);
                const auto rs = fock::reduced_moments(state, 0);
                const auto ri = fock::reduced_moments(state, 1);
                dev_signal = std::max(dev_signal, max_relative_difference(rs.moments, predicted, 1e-300));
                dev_idler = std::max(dev_idler, max_relative_difference(ri.moments, idler, 1e-300));
                max_deficit = std::max(max_deficit, state.trace_deficit());
                max_dim = std::max(max_dim, dim);

                const auto gm = fock::GaussianSecondMoments::opa_output(n, p);
                double wm[4];
                fock::Word word;
                for (int k = 0; k < 4; ++k) {
                    word.push_back(fock::number(0));
                    wm[k] = fock::gaussian_expectation(gm, fock::OperatorPolynomial::monomial(1.0, word)).real();
                }
                const MomentVector w{wm[0], wm[1], wm[2], wm[3]};
                dev_wick = std::max(dev_wick, max_relative_difference(w, predicted, 1e-300));

                const auto closed = thermal_moments(ThermalSource(equivalent_thermal_mean(n, p)));
                dev_closure = std::max(dev_closure, max_relative_difference(predicted, closed, 1e-300));
            }
        }
        auto c = make_check("moment_propagation_fock", Expectation::Pass, dev_signal, 1e-6,
                            "signal <n^1..4> after two-mode squeezing of thermal (x) vacuum vs "
                            "propagated moments");
        c.details = {{"max_trace_deficit", max_deficit},
                     {"tail_bound", config.tail_bound},
                     {"max_dim", static_cast<double>(max_dim)}};
        if (max_deficit >= config.tail_bound) c.passed = false;
        out.push_back(std::move(c));
        out.push_back(make_check("idler_moments_fock", Expectation::Pass, dev_idler, 1e-6,
                                 "idler <n^1..4> vs thermal moments of mean nu^2 (N + 1)"));
        out.push_back(make_check("moment_propagation_wick", Expectation::Pass, dev_wick, 1e-9,
                                 "signal <n^1..4> by Gaussian Wick contraction vs propagated moments"));
        out.push_back(make_check("thermal_closure", Expectation::Pass, dev_closure, 1e-9,
                                 "propagated thermal(N) vs thermal(mu^2 N + nu^2)"));
    }

    // Two-mode correlator and its noise.
    if (config.include_fock) {
        double dev_subst = 0.0, dev_normal = 0.0, dev_normal_cl = 0.0, dev_noise_cl = 0.0;
        double dev_noise_full = 0.0, dev_noise_fixed = 0.0, gap = 0.0;
        for (double n : config.n_values) {
            for (double m : config.n_values) {
                const int dim = fock::moment_truncation_dimension(std::max(n, m), 4, config.moment_rel_tol,
                                                                  config.tail_bound, config.max_dim);
                const fock::FockSpace space(dim, config.tail_bound);
                const auto tn = thermal_moments(ThermalSource(n));
                const auto tm = thermal_moments(ThermalSource(m));
                for (double d : deltas) {
                    const auto geom = Geometry::with_phase(d);
                    const double closed = correlation_full(tn, tm, geom);
                    const auto no = fock::hbt_two_mode_correlation(
                        n, m, d, space, fock::OrderingConvention::NormalOrdered);
                    const auto ns = fock::hbt_two_mode_correlation(
                        n, m, d, space, fock::OrderingConvention::NumberSubstituted);
                    dev_subst = std::max(dev_subst, rel(ns.correlation, closed));
                    dev_normal = std::max(dev_normal, rel(no.correlation, closed));
                    dev_normal_cl = std::max(dev_normal_cl, rel(no.correlation, classical_correlation_mean(n, m, d)));
                    dev_noise_cl = std::max(dev_noise_cl,
                                            rel(no.noise_squared, classical_correlation_variance(n, m, d)));
                    const double full = noise_full(tn, tm, geom);
                    dev_noise_full = std::max(dev_noise_full, rel(ns.noise_squared, full));
                    const double fixed = full + 2.0 * n * n * m * m * std::cos(2.0 * d);
                    dev_noise_fixed = std::max(dev_noise_fixed, rel(ns.noise_squared, fixed));
                    gap = std::max(gap, std::abs(closed - no.correlation - (n + m)));
                }
            }
        }
        out.push_back(make_check("correlation_number_substituted_vs_closed_form", Expectation::Pass,
                                 dev_subst, 1e-6,
                                 "n^p substitution of the intensity product reproduces the closed-form "
                                 "correlator"));
        auto c = make_check("correlation_normal_ordered_vs_closed_form", Expectation::Fail, dev_normal, 1e-6,
                            "the closed form keeps the diagonal shot terms <n^2> = 2N^2 + N; normal "
                            "ordering gives 2N^2, so the two differ by N + M");
        c.details = {{"max_abs_gap_minus_N_plus_M", gap}};
        out.push_back(std::move(c));
        out.push_back(make_check("correlation_normal_ordered_vs_classical", Expectation::Pass, dev_normal_cl,
                                 1e-6, "normal-ordered mean vs Gaussian-field 2N^2 + 2M^2 + 2NM(1 + cos delta)"));
        out.push_back(make_check("noise_normal_ordered_vs_classical", Expectation::Pass, dev_noise_cl, 1e-6,
                                 "normal-ordered variance vs closed-form Gaussian-field variance"));
        out.push_back(make_check("noise_number_substituted_vs_printed_full", Expectation::Fail, dev_noise_full,
                                 1e-6,
                                 "printed cos 2 delta coefficient 2(n2 m2 - 2 n1^2 m1^2) should read "
                                 "2(n2 m2 - n1^2 m1^2); agreement only where cos 2 delta = 0"));
        out.push_back(make_check("noise_number_substituted_vs_corrected_full", Expectation::Pass,
                                 dev_noise_fixed, 1e-6,
                                 "same, with the cos 2 delta coefficient corrected"));
    }

    // Closed-form noise polynomials against substitution.
    {
        std::vector<SourcePair> grid;
        for (double n : config.n_values) {
            for (double m : config.n_values) grid.push_back({n, m});
        }
        if (std::none_of(grid.begin(), grid.end(), [](const SourcePair& s) { return s.n_bar == 1.0 && s.m_bar == 1.0; })) {
            grid.push_back({1.0, 1.0});
        }
        double residual = 0.0, fixed = 0.0, g0_at_11 = 0.0, sub_opa = 0.0;
        const auto base = consistency_report({0.0, 0.0}, grid);
        for (const auto& p : base.points) {
            if (std::isfinite(p.thermal_residual_per_n2m2)) residual = std::max(residual, p.thermal_residual_per_n2m2);
            fixed = std::max(fixed, rel(p.thermal_printed - 12.0 * p.n_bar * p.n_bar * p.m_bar * p.m_bar,
                                        p.thermal_substituted));
            if (p.n_bar == 1.0 && p.m_bar == 1.0) g0_at_11 = p.g0_rel_deviation;
        }
        for (double g : config.g_values) {
            const auto r = consistency_report({g, 0.0}, grid);
            if (g > 0.0) sub_opa = std::max(sub_opa, r.opa.max);
        }
        auto c = make_check("thermal_noise_substitution_vs_printed", Expectation::Fail, base.thermal.max, 1e-9,
                            "phase-averaged noise from corrected moments is the printed polynomial "
                            "minus 12 n^2 m^2 (n^2 m^2 coefficient 58, printed 70)");
        c.details = {{"residual_per_n2m2", residual}, {"rel_deviation_with_coefficient_58", fixed}};
        out.push_back(std::move(c));
        auto c0 = make_check("opa_noise_printed_g0_vs_thermal_printed", Expectation::Fail, base.g0.max, 1e-9,
                             "amplified noise polynomial at g = 0 should reduce to the thermal one; "
                             "418 vs 466 at n = m = 1");
        c0.details = {{"rel_deviation_at_1_1", g0_at_11},
                      {"opa_printed_g0_at_1_1", opa_noise_avg_printed(1.0, 1.0, {0.0, 0.0})},
                      {"thermal_printed_at_1_1", noise_avg_printed(1.0, 1.0)}};
        out.push_back(std::move(c0));
        out.push_back(make_check("opa_noise_substitution_vs_printed", Expectation::Fail, sub_opa, 1e-9,
                                 "propagated moments substituted into the averaged noise do not "
                                 "reproduce the printed amplified noise polynomial (g > 0)"));
    }
    return out;
}

}  // namespace hbtamp
