#include "hbtamp/hbt_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "hbtamp/errors.hpp"

namespace hbtamp::fock {

const char* to_string(OrderingConvention ordering) {
    switch (ordering) {
        case OrderingConvention::NormalOrdered: return "normal-ordered";
        case OrderingConvention::AsWritten: return "as-written";
        case OrderingConvention::NumberSubstituted: return "number-substituted";
    }
    return "unknown";
}

OperatorPolynomial detector_intensity(double phase) {
    const std::complex<double> e = std::polar(1.0, phase);
    return OperatorPolynomial({
               Term{1.0, {create(0), annihilate(0)}},
               Term{std::conj(e), {create(0), annihilate(1)}},
               Term{e, {create(1), annihilate(0)}},
               Term{1.0, {create(1), annihilate(1)}},
           })
        .simplified();
}

CorrelatorOperators correlator_operators(double delta, OrderingConvention ordering) {
    const auto i1 = detector_intensity(delta);
    const auto i2 = detector_intensity(0.0);
    const auto product = i1 * i2;
    switch (ordering) {
        case OrderingConvention::NormalOrdered:
            return {product.normal_ordered(), (product * product).normal_ordered()};
        case OrderingConvention::AsWritten: {
            const auto sym = (product + i2 * i1).scaled(0.5);
            return {sym, sym * sym};
        }
        case OrderingConvention::NumberSubstituted:
            return {product.number_substituted(), (product * product).number_substituted()};
    }
    throw DomainError("unknown ordering convention");
}

HbtCorrelation hbt_two_mode_correlation(double n_mean, double m_mean, double delta,
                                        const FockSpace& space, OrderingConvention ordering) {
    if (!std::isfinite(delta)) throw DomainError("phase must be finite");
    const auto state = tensor_product(thermal_state(n_mean, space), thermal_state(m_mean, space));
    if (state.trace_deficit() > space.tail_bound()) {
        const int suggested = truncation_dimension(std::max(n_mean, m_mean), space.tail_bound(),
                                                   kMaxDimension + 1'000'000);
        throw TruncationError("thermal product state deficit " +
                                  short_number(state.trace_deficit()) + " exceeds bound " +
                                  short_number(space.tail_bound()) + " at dim " +
                                  std::to_string(space.dim()),
                              state.trace_deficit(), suggested);
    }
    const auto ops = correlator_operators(delta, ordering);
    const auto c1 = expectation(state, ops.correlator);
    const auto c2 = expectation(state, ops.correlator_squared);

    HbtCorrelation r;
    r.correlation = c1.real();
    r.noise_squared = c2.real() - c1.real() * c1.real();
    r.imaginary_residual = std::max(std::abs(c1.imag()), std::abs(c2.imag()));
    r.trace_deficit = state.trace_deficit();
    r.dim = space.dim();
    return r;
}

}  // namespace hbtamp::fock
