#pragma once

// Moments of zero-mean Gaussian bosonic states by Wick's theorem.

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

#include "hbtamp/opa_model.hpp"
#include "hbtamp/operator_algebra.hpp"

namespace hbtamp::fock {

inline constexpr std::size_t kMaxWickLength = 8;

/// normal(i, j) = <a_i^dag a_j>, anomalous(i, j) = <a_i a_j>.
struct GaussianSecondMoments {
    Eigen::MatrixXcd normal;
    Eigen::MatrixXcd anomalous;

    int modes() const { return static_cast<int>(normal.rows()); }
    /// Throws DomainError unless `normal` is Hermitian and `anomalous` symmetric
    /// (to `tol`) with matching square shapes.
    void validate(double tol = 1e-12) const;

    static GaussianSecondMoments thermal(const std::vector<double>& means);
    /// Signal (mode 0) and idler (mode 1) leaving an OPA with thermal signal
    /// input of mean n̄ and vacuum idler: a -> mu a + nu b^dag, b -> mu b + nu a^dag.
    static GaussianSecondMoments opa_output(double n_bar, const OpaParams& params);
};

struct WickResult {
    std::complex<double> value;
    bool odd_length = false;  // zero by symmetry, flagged rather than an error
};

/// <x_1 x_2 ... x_L> as written (not normal ordered): sum over perfect pairings
/// of ordered two-point contractions. Number letters expand to a^dag a before
/// the length check; throws DomainError above kMaxWickLength operators.
WickResult gaussian_wick_moment(const GaussianSecondMoments& moments, std::span<const Ladder> monomial);

/// Sum of coefficient * Wick moment over the terms of a polynomial.
std::complex<double> gaussian_expectation(const GaussianSecondMoments& moments,
                                          const OperatorPolynomial& op);

}  // namespace hbtamp::fock
