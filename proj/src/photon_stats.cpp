#include "hbtamp/photon_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hbtamp/errors.hpp"

namespace hbtamp {

double MomentVector::operator[](std::size_t order) const {
    switch (order) {
        case 1: return m1;
        case 2: return m2;
        case 3: return m3;
        case 4: return m4;
        default: throw DomainError("moment order must be 1..4, got " + std::to_string(order));
    }
}

bool MomentVector::is_valid(double rel_tol) const {
    const auto ge = [rel_tol](double lhs, double rhs) {
        return lhs >= rhs - rel_tol * std::max(std::abs(lhs), std::abs(rhs));
    };
    for (double v : as_array()) {
        if (!std::isfinite(v)) return false;
    }
    return m1 >= 0.0 && ge(m2, m1 * m1) && ge(m4, m2 * m2) && ge(m2, m1) && ge(m3, m2) &&
           ge(m4, m3);
}

double max_relative_difference(const MomentVector& a, const MomentVector& b, double floor) {
    double worst = 0.0;
    const auto av = a.as_array();
    const auto bv = b.as_array();
    for (std::size_t j = 0; j < av.size(); ++j) {
        const double diff = std::abs(av[j] - bv[j]);
        if (diff == 0.0) continue;
        worst = std::max(worst, diff / std::max(std::abs(bv[j]), floor));
    }
    return worst;
}

ThermalSource::ThermalSource(double mean_photon_number) : mean_(mean_photon_number) {
    if (!std::isfinite(mean_photon_number) || mean_photon_number < 0.0) {
        throw DomainError("thermal mean photon number must be finite and >= 0, got " +
                          std::to_string(mean_photon_number));
    }
}

const char* to_string(MomentConvention convention) {
    return convention == MomentConvention::Corrected ? "corrected" : "printed";
}

MomentVector thermal_moments(const ThermalSource& source, MomentConvention convention) {
    const double n = source.mean_photon_number();
    MomentVector out;
    out.m1 = n;
    out.m2 = n * (1.0 + 2.0 * n);
    out.m3 = convention == MomentConvention::Corrected ? n * (1.0 + 6.0 * n + 6.0 * n * n)
                                                       : n * (1.0 + 6.0 * n + n * n);
    out.m4 = n * (1.0 + 14.0 * n + 36.0 * n * n + 24.0 * n * n * n);
    return out;
}

MomentVector geometric_summation_moments(const ThermalSource& source, double tail_bound,
                                         std::size_t iteration_cap) {
    if (!(tail_bound > 0.0 && tail_bound < 1.0)) {
        throw DomainError("tail_bound must lie in (0, 1)");
    }
    const double mean = source.mean_photon_number();
    if (mean == 0.0) return {};

    const double q = mean / (1.0 + mean);
    std::array<double, 4> acc{};
    double weight = 1.0 / (1.0 + mean);  // p_0
    double worst_tail = 1.0;

    for (std::size_t n = 1; n <= iteration_cap; ++n) {
        weight *= q;  // p_n
        const double x = static_cast<double>(n);
        double power = 1.0;
        for (double& a : acc) {
            power *= x;
            a += weight * power;
        }
        // Terms t_k = p_k k^j for k > n fall off at least as fast as a geometric
        // series of ratio r_j = q ((n+2)/(n+1))^j once r_j < 1.
        const double grow = (x + 2.0) / (x + 1.0);
        double next_power = 1.0;
        double ratio_growth = 1.0;
        worst_tail = 0.0;
        bool bounded = true;
        for (std::size_t j = 0; j < acc.size(); ++j) {
            next_power *= (x + 1.0);
            ratio_growth *= grow;
            const double r = q * ratio_growth;
            if (r >= 1.0) {
                bounded = false;
                worst_tail = std::numeric_limits<double>::infinity();
                break;
            }
            const double tail = weight * q * next_power / (1.0 - r);
            worst_tail = std::max(worst_tail, tail / acc[j]);
        }
        if (bounded && worst_tail < tail_bound) {
            return {acc[0], acc[1], acc[2], acc[3]};
        }
    }
    throw ResourceError("geometric summation did not reach tail bound " + short_number(tail_bound) + " within " +
                            std::to_string(iteration_cap) + " terms",
                        worst_tail);
}

}  // namespace hbtamp
