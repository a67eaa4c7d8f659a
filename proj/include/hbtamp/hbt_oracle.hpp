#pragma once

// Two-mode quantum model of the intensity correlator: modes a, b carry the two
// source rays, detector j sees I_j = (a^dag e^{-i d_j} + b^dag)(a e^{i d_j} + b)
// with d_1 - d_2 = delta.

#include "hbtamp/fock_space.hpp"
#include "hbtamp/operator_algebra.hpp"

namespace hbtamp::fock {

/// How the operator product I_1 I_2 is turned into an expectation value.
///   NormalOrdered      :I_1 I_2: and :(I_1 I_2)^2: (Glauber ordering; equals the
///                      classical Gaussian-field average for thermal light)
///   AsWritten          the Hermitian product (I_1 I_2 + I_2 I_1) / 2, literally
///   NumberSubstituted  every phase-balanced single-mode factor replaced by n^p,
///                      i.e. |E|^{2p} -> <n^p> applied to the classical expansion
enum class OrderingConvention { NormalOrdered, AsWritten, NumberSubstituted };

const char* to_string(OrderingConvention ordering);

/// Detector intensity operator with phase `phase` on mode a.
OperatorPolynomial detector_intensity(double phase);

/// The correlator observable and its square under `ordering`.
struct CorrelatorOperators {
    OperatorPolynomial correlator;
    OperatorPolynomial correlator_squared;
};
CorrelatorOperators correlator_operators(double delta, OrderingConvention ordering);

struct HbtCorrelation {
    double correlation = 0.0;           // Re <C>
    double noise_squared = 0.0;         // Re <C^2> - (Re <C>)^2
    double imaginary_residual = 0.0;    // max(|Im <C>|, |Im <C^2>|), ~0
    double trace_deficit = 0.0;
    int dim = 0;
};

/// Evaluates the correlator on thermal(N) (x) thermal(M). Throws TruncationError
/// when the product state's deficit exceeds space.tail_bound().
HbtCorrelation hbt_two_mode_correlation(double n_mean, double m_mean, double delta,
                                        const FockSpace& space, OrderingConvention ordering);

}  // namespace hbtamp::fock
