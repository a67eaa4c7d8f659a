#include "hbtamp/wick.hpp"

#include <cmath>
#include <string>

#include "hbtamp/errors.hpp"

namespace hbtamp::fock {

namespace {

std::complex<double> contraction(const GaussianSecondMoments& g, const Ladder& x, const Ladder& y) {
    const int i = x.mode;
    const int j = y.mode;
    const bool xd = x.letter == Letter::Create;
    const bool yd = y.letter == Letter::Create;
    if (xd && !yd) return g.normal(i, j);                                  // <a_i^dag a_j>
    if (!xd && yd) return g.normal(j, i) + (i == j ? 1.0 : 0.0);           // <a_i a_j^dag>
    if (!xd && !yd) return g.anomalous(i, j);                              // <a_i a_j>
    return std::conj(g.anomalous(j, i));                                   // <a_i^dag a_j^dag>
}

std::complex<double> pairings(const GaussianSecondMoments& g, std::vector<Ladder>& ops) {
    if (ops.empty()) return 1.0;
    const Ladder first = ops.front();
    std::complex<double> total = 0.0;
    for (std::size_t j = 1; j < ops.size(); ++j) {
        const auto c = contraction(g, first, ops[j]);
        if (c == 0.0) continue;
        std::vector<Ladder> rest;
        rest.reserve(ops.size() - 2);
        for (std::size_t i = 1; i < ops.size(); ++i) {
            if (i != j) rest.push_back(ops[i]);
        }
        total += c * pairings(g, rest);
    }
    return total;
}

}  // namespace

void GaussianSecondMoments::validate(double tol) const {
    const auto n = normal.rows();
    if (normal.cols() != n || anomalous.rows() != n || anomalous.cols() != n || n < 1) {
        throw DomainError("second-moment tables must be square and of equal size");
    }
    if ((normal - normal.adjoint()).cwiseAbs().maxCoeff() > tol) {
        throw DomainError("<a_i^dag a_j> table is not Hermitian");
    }
    if ((anomalous - anomalous.transpose()).cwiseAbs().maxCoeff() > tol) {
        throw DomainError("<a_i a_j> table is not symmetric");
    }
}

GaussianSecondMoments GaussianSecondMoments::thermal(const std::vector<double>& means) {
    const auto n = static_cast<Eigen::Index>(means.size());
    GaussianSecondMoments g{Eigen::MatrixXcd::Zero(n, n), Eigen::MatrixXcd::Zero(n, n)};
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!std::isfinite(means[i]) || means[i] < 0.0) {
            throw DomainError("thermal means must be finite and >= 0");
        }
        g.normal(i, i) = means[i];
    }
    return g;
}

GaussianSecondMoments GaussianSecondMoments::opa_output(double n_bar, const OpaParams& params) {
    require_zero_pump_phase(params);
    if (!std::isfinite(n_bar) || n_bar < 0.0) throw DomainError("n_bar must be finite and >= 0");
    const auto c = coeffs(params);
    GaussianSecondMoments g{Eigen::MatrixXcd::Zero(2, 2), Eigen::MatrixXcd::Zero(2, 2)};
    // <a'^dag a'> = mu^2 <a^dag a> + nu^2 <b b^dag>, <b'^dag b'> = nu^2 <a a^dag>,
    // <a' b'> = mu nu (<a a^dag> + <b^dag b>).
    g.normal(0, 0) = c.mu2() * n_bar + c.nu2();
    g.normal(1, 1) = c.nu2() * (n_bar + 1.0);
    g.anomalous(0, 1) = c.mu * c.nu * (n_bar + 1.0);
    g.anomalous(1, 0) = g.anomalous(0, 1);
    return g;
}

WickResult gaussian_wick_moment(const GaussianSecondMoments& moments, std::span<const Ladder> monomial) {
    moments.validate();
    std::vector<Ladder> ops;
    ops.reserve(monomial.size() * 2);
    for (const auto& l : monomial) {
        if (l.mode < 0 || l.mode >= moments.modes()) {
            throw DomainError("monomial refers to mode " + std::to_string(l.mode) +
                              " outside the second-moment table");
        }
        if (l.letter == Letter::Number) {
            ops.push_back(create(l.mode));
            ops.push_back(annihilate(l.mode));
        } else {
            ops.push_back(l);
        }
    }
    if (ops.size() > kMaxWickLength) {
        throw DomainError("Wick engine supports at most " + std::to_string(kMaxWickLength) +
                          " operators, got " + std::to_string(ops.size()));
    }
    if (ops.size() % 2 == 1) return {0.0, true};
    return {pairings(moments, ops), false};
}

std::complex<double> gaussian_expectation(const GaussianSecondMoments& moments,
                                          const OperatorPolynomial& op) {
    std::complex<double> total = 0.0;
    for (const auto& term : op.terms()) {
        total += term.coefficient * gaussian_wick_moment(moments, term.word).value;
    }
    return total;
}

}  // namespace hbtamp::fock
