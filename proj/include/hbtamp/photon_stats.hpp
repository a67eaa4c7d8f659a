#pragma once

// Photon-number statistics of single-mode thermal (Bose-Einstein) light.

#include <array>
#include <cstddef>

namespace hbtamp {

/// Raw photon-number moments <n>, <n^2>, <n^3>, <n^4> of one optical mode.
struct MomentVector {
    double m1 = 0.0;
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;

    double operator[](std::size_t order) const;  // order 1..4
    std::array<double, 4> as_array() const { return {m1, m2, m3, m4}; }

    /// Checks the moment inequalities valid for any distribution on {0,1,2,...}:
    /// m1 >= 0, m2 >= m1^2, m4 >= m2^2 and m1 <= m2 <= m3 <= m4, each up to a
    /// relative slack `rel_tol`.
    bool is_valid(double rel_tol = 1e-12) const;

    friend bool operator==(const MomentVector&, const MomentVector&) = default;
};

/// Largest component-wise relative difference, |a_j - b_j| / max(|b_j|, floor).
double max_relative_difference(const MomentVector& a, const MomentVector& b,
                               double floor = 1e-300);

/// A thermal source described by its mean photon number (n̄ or m̄).
class ThermalSource {
public:
    /// Throws DomainError for a negative or non-finite mean.
    explicit ThermalSource(double mean_photon_number);

    double mean_photon_number() const noexcept { return mean_; }

private:
    double mean_;
};

/// Which closed form to use for the thermal third moment.
///   Corrected     <n^3> = 6N^3 + 6N^2 + N  (Bose-Einstein value)
///   Printed       <n^3> = N^3 + 6N^2 + N   (typeset form)
/// All other moments are identical between the two.
enum class MomentConvention { Corrected, Printed };

const char* to_string(MomentConvention convention);

/// Closed-form thermal moments.
MomentVector thermal_moments(const ThermalSource& source,
                             MomentConvention convention = MomentConvention::Corrected);

/// Summation cap for geometric_summation_moments.
inline constexpr std::size_t kSummationIterationCap = 10'000'000;

/// Direct summation of sum_n p_n n^j over p_n = N^n / (1+N)^(n+1).
///
/// Terminates once the analytic bound on the remaining tail of every moment is
/// below `tail_bound` times the accumulated value. Throws DomainError unless
/// 0 < tail_bound < 1, and ResourceError (carrying the achieved relative tail)
/// when the iteration cap is hit first.
MomentVector geometric_summation_moments(const ThermalSource& source, double tail_bound,
                                         std::size_t iteration_cap = kSummationIterationCap);

}  // namespace hbtamp
