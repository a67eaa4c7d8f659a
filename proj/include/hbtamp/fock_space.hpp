#pragma once

// Truncated Fock-space states of one or two bosonic modes.
//
// Two-mode operators are stored block-wise by excitation-difference sector
// k = n_a - n_b. The squeezing generator a^dag b^dag - a b conserves k, so its
// exponential is block diagonal, and any density matrix is a grid of
// (k, k') blocks of which product thermal states only populate k == k'.
// Within a sector of a dim-level space, basis index j = min(n_a, n_b) runs
// over 0 .. dim-1-|k|.

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstddef>
#include <map>
#include <utility>

#include "hbtamp/photon_stats.hpp"

namespace hbtamp::fock {

inline constexpr int kMaxDimension = 256;
inline constexpr double kDefaultTailBound = 1e-9;
inline constexpr std::size_t kDefaultMemoryCapBytes = std::size_t{1} << 30;

class FockSpace {
public:
    /// `guard_levels` < 0 selects max(8, dim / 4) extra levels used as an
    /// absorbing margin while squeezing.
    explicit FockSpace(int dim, double tail_bound = kDefaultTailBound,
                       std::size_t memory_cap_bytes = kDefaultMemoryCapBytes,
                       int guard_levels = -1);

    int dim() const noexcept { return dim_; }
    double tail_bound() const noexcept { return tail_bound_; }
    std::size_t memory_cap_bytes() const noexcept { return memory_cap_; }
    int guard_levels() const noexcept { return guard_; }
    int working_dim() const noexcept { return dim_ + guard_; }

    /// Throws ResourceError when `bytes` exceeds the configured cap.
    void check_footprint(std::size_t bytes, const char* what) const;

private:
    int dim_;
    double tail_bound_;
    std::size_t memory_cap_;
    int guard_;
};

/// Smallest dim with (N / (1 + N))^dim < tail_bound. Throws TruncationError
/// when that exceeds `max_dim`.
int truncation_dimension(double mean, double tail_bound, int max_dim = kMaxDimension);

/// Like truncation_dimension, but additionally requires that the thermal
/// distribution of mean N loses less than `moment_rel_tol` of <n^order> above
/// dim.
int moment_truncation_dimension(double mean, int order, double moment_rel_tol,
                                double tail_bound, int max_dim = kMaxDimension);

/// Relative weight of <n^order> carried by levels >= dim for a thermal state.
double thermal_moment_tail(double mean, int order, int dim);

using SectorKey = std::pair<int, int>;

inline int sector_size(int dim, int k) { return dim - (k < 0 ? -k : k); }
inline int sector_of(int n, int m) { return n - m; }
inline int sector_index(int n, int m) { return n < m ? n : m; }
/// Mode occupations for index j of sector k.
inline std::pair<int, int> sector_levels(int k, int j) {
    return {j + (k > 0 ? k : 0), j + (k < 0 ? -k : 0)};
}

struct InvariantCheck {
    double hermiticity_error = 0.0;   // max |rho - rho^dag|
    double min_eigenvalue = 0.0;
    double trace_balance_error = 0.0; // |trace + deficit - 1|
    bool eigenvalues_checked = false;
    bool ok(double herm_tol = 1e-12, double eig_floor = -1e-10, double trace_tol = 1e-10) const;
};

/// Immutable density operator over one or two modes plus the probability mass
/// lost to truncation.
class FockState {
public:
    using Matrix = Eigen::MatrixXcd;
    using BlockMap = std::map<SectorKey, Matrix>;

    static FockState single_mode(Matrix rho, double trace_deficit);
    static FockState two_mode(int dim, BlockMap blocks, double trace_deficit);

    int modes() const noexcept { return modes_; }
    int dim() const noexcept { return dim_; }
    double trace_deficit() const noexcept { return deficit_; }
    double trace() const;

    /// Single-mode density matrix; throws DomainError on a two-mode state.
    const Matrix& matrix() const;
    /// Sector blocks of a two-mode state; throws DomainError on a single-mode state.
    const BlockMap& blocks() const;

    /// <n_a, n_b | rho | n_a', n_b'> (zero outside the truncated box).
    std::complex<double> element(int na, int nb, int na2, int nb2) const;

    /// Partial trace onto `mode` (0 = a, 1 = b). A single-mode state returns itself.
    Matrix reduced(int mode) const;

    /// Populations of the two-mode diagonal, dim x dim, indexed (n_a, n_b).
    Eigen::MatrixXd populations() const;

    InvariantCheck check_invariants() const;

private:
    FockState() = default;
    int modes_ = 1;
    int dim_ = 0;
    double deficit_ = 0.0;
    Matrix single_;
    BlockMap blocks_;
};

/// Diagonal thermal state, p_n = N^n / (1+N)^(n+1) for n < dim, with
/// trace_deficit (N/(1+N))^dim.
FockState thermal_state(double mean, const FockSpace& space);

/// Vacuum of one mode.
FockState vacuum_state(const FockSpace& space);

/// rho_a (x) rho_b for two single-mode states of equal dimension. The deficit is
/// the mass outside the dim x dim box, 1 - (1 - d_a)(1 - d_b).
FockState tensor_product(const FockState& a, const FockState& b);

/// exp(A) by scaling and squaring with a truncated Taylor series; the scaled
/// matrix has 1-norm <= step_norm.
Eigen::MatrixXd expm_scaling_squaring(const Eigen::MatrixXd& a, double step_norm = 0.5);

/// Real antisymmetric tridiagonal block of g (a^dag b^dag - a b) in sector k of
/// a dim-level space.
Eigen::MatrixXd squeeze_generator_block(int dim, int k, double gain);

/// Applies exp[g (a^dag b^dag - a b)] (pump phase 0). The evolution runs in
/// space.working_dim() levels and is then cut back to space.dim(); the mass
/// removed by the cut is added to the deficit. Throws TruncationError when the
/// resulting deficit exceeds space.tail_bound().
FockState two_mode_squeeze(const FockState& state, double gain, const FockSpace& space);

struct ReducedMoments {
    MomentVector moments;                    // Tr[rho n^j], j = 1..4
    std::array<double, 4> truncation_error;  // estimated missing tail contribution
    double trace = 0.0;                      // of the retained reduced state
};

ReducedMoments reduced_moments(const FockState& state, int mode);

}  // namespace hbtamp::fock
