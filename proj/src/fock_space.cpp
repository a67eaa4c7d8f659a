#include "hbtamp/fock_space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <string>

#include "hbtamp/errors.hpp"

namespace hbtamp::fock {


namespace {

void require_mean(double mean) {
    if (!std::isfinite(mean) || mean < 0.0) {
        throw DomainError("thermal mean must be finite and >= 0, got " + std::to_string(mean));
    }
}

double one_norm(const Eigen::MatrixXd& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace

FockSpace::FockSpace(int dim, double tail_bound, std::size_t memory_cap_bytes, int guard_levels)
    : dim_(dim), tail_bound_(tail_bound), memory_cap_(memory_cap_bytes) {
    if (dim < 2 || dim > kMaxDimension) {
        throw DomainError("Fock dimension must lie in [2, " + std::to_string(kMaxDimension) + "], got " +
                          std::to_string(dim));
    }
    if (!(tail_bound > 0.0 && tail_bound < 1.0)) {
        throw DomainError("tail bound must lie in (0, 1)");
    }
    guard_ = guard_levels < 0 ? std::max(8, dim / 4) : guard_levels;
}

void FockSpace::check_footprint(std::size_t bytes, const char* what) const {
    if (bytes > memory_cap_) {
        throw ResourceError(std::string(what) + " needs " + std::to_string(bytes) +
                                " bytes, above the configured cap of " +
                                std::to_string(memory_cap_),
                            static_cast<double>(bytes));
    }
}

int truncation_dimension(double mean, double tail_bound, int max_dim) {
    require_mean(mean);
    if (!(tail_bound > 0.0 && tail_bound < 1.0)) {
        throw DomainError("tail bound must lie in (0, 1)");
    }
    if (mean == 0.0) return 2;
    const double log_q = std::log(mean / (1.0 + mean));
    const int dim = std::max(2, static_cast<int>(std::floor(std::log(tail_bound) / log_q)) + 1);
    if (dim > max_dim) {
        throw TruncationError("mean photon number " + std::to_string(mean) + " needs " +
                                  std::to_string(dim) + " levels for tail bound " +
                                  short_number(tail_bound) + ", above the cap of " +
                                  std::to_string(max_dim),
                              std::pow(mean / (1.0 + mean), max_dim), dim);
    }
    return dim;
}

double thermal_moment_tail(double mean, int order, int dim) {
    require_mean(mean);
    if (mean == 0.0) return 0.0;
    const double q = mean / (1.0 + mean);
    double full = 0.0;
    const auto raw = thermal_moments(ThermalSource(mean)).as_array();
    full = order == 0 ? 1.0 : raw[static_cast<std::size_t>(order - 1)];
    // Peak of q^n n^order sits at n = order / |log q|; stop well past it.
    const double peak = order / -std::log(q);
    double tail = 0.0;
    double weight = (1.0 - q) * std::pow(q, dim);
    for (long n = dim; n < dim + 100'000'000L; ++n) {
        const double term = weight * std::pow(static_cast<double>(n), order);
        tail += term;
        if (n > peak && term < 1e-18 * tail) break;
        weight *= q;
        if (weight == 0.0) break;
    }
    return tail / full;
}

int moment_truncation_dimension(double mean, int order, double moment_rel_tol,
                                double tail_bound, int max_dim) {
    int dim = truncation_dimension(mean, tail_bound, max_dim);
    if (mean == 0.0) return dim;
    while (thermal_moment_tail(mean, order, dim) >= moment_rel_tol) {
        ++dim;
        if (dim > max_dim) {
            throw TruncationError("mean photon number " + std::to_string(mean) +
                                      " needs more than " + std::to_string(max_dim) +
                                      " levels to resolve <n^" + std::to_string(order) + ">",
                                  thermal_moment_tail(mean, order, max_dim), dim);
        }
    }
    return dim;
}

bool InvariantCheck::ok(double herm_tol, double eig_floor, double trace_tol) const {
    return hermiticity_error <= herm_tol && trace_balance_error <= trace_tol &&
           (!eigenvalues_checked || min_eigenvalue >= eig_floor);
}

FockState FockState::single_mode(Matrix rho, double trace_deficit) {
    if (rho.rows() != rho.cols() || rho.rows() < 2) {
        throw DomainError("single-mode density matrix must be square with dim >= 2");
    }
    FockState s;
    s.modes_ = 1;
    s.dim_ = static_cast<int>(rho.rows());
    s.deficit_ = trace_deficit;
    s.single_ = std::move(rho);
    return s;
}

FockState FockState::two_mode(int dim, BlockMap blocks, double trace_deficit) {
    if (dim < 2) throw DomainError("two-mode dimension must be >= 2");
    for (const auto& [key, block] : blocks) {
        const auto [k, k2] = key;
        if (std::abs(k) >= dim || std::abs(k2) >= dim || block.rows() != sector_size(dim, k) ||
            block.cols() != sector_size(dim, k2)) {
            throw DomainError("sector block has the wrong shape for dim " + std::to_string(dim));
        }
    }
    FockState s;
    s.modes_ = 2;
    s.dim_ = dim;
    s.deficit_ = trace_deficit;
    s.blocks_ = std::move(blocks);
    return s;
}

double FockState::trace() const {
    if (modes_ == 1) return single_.trace().real();
    double t = 0.0;
    for (const auto& [key, block] : blocks_) {
        if (key.first == key.second) t += block.trace().real();
    }
    return t;
}

const FockState::Matrix& FockState::matrix() const {
    if (modes_ != 1) throw DomainError("matrix() requires a single-mode state");
    return single_;
}

const FockState::BlockMap& FockState::blocks() const {
    if (modes_ != 2) throw DomainError("blocks() requires a two-mode state");
    return blocks_;
}

std::complex<double> FockState::element(int na, int nb, int na2, int nb2) const {
    if (modes_ != 2) throw DomainError("element(n, m, n', m') requires a two-mode state");
    if (na < 0 || nb < 0 || na2 < 0 || nb2 < 0 || na >= dim_ || nb >= dim_ || na2 >= dim_ ||
        nb2 >= dim_) {
        return {};
    }
    const auto it = blocks_.find({sector_of(na, nb), sector_of(na2, nb2)});
    if (it == blocks_.end()) return {};
    return it->second(sector_index(na, nb), sector_index(na2, nb2));
}

FockState::Matrix FockState::reduced(int mode) const {
    if (mode != 0 && mode != 1) throw DomainError("mode index must be 0 or 1");
    if (modes_ == 1) return single_;
    Matrix out = Matrix::Zero(dim_, dim_);
    for (const auto& [key, block] : blocks_) {
        const auto [k, k2] = key;
        for (int j = 0; j < block.rows(); ++j) {
            const auto [n, m] = sector_levels(k, j);
            for (int j2 = 0; j2 < block.cols(); ++j2) {
                const auto [n2, m2] = sector_levels(k2, j2);
                if (mode == 0 && m == m2) out(n, n2) += block(j, j2);
                if (mode == 1 && n == n2) out(m, m2) += block(j, j2);
            }
        }
    }
    return out;
}

Eigen::MatrixXd FockState::populations() const {
    if (modes_ != 2) throw DomainError("populations() requires a two-mode state");
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(dim_, dim_);
    for (const auto& [key, block] : blocks_) {
        if (key.first != key.second) continue;
        for (int j = 0; j < block.rows(); ++j) {
            const auto [n, m] = sector_levels(key.first, j);
            p(n, m) = block(j, j).real();
        }
    }
    return p;
}

InvariantCheck FockState::check_invariants() const {
    InvariantCheck c;
    c.trace_balance_error = std::abs(trace() + deficit_ - 1.0);
    if (modes_ == 1) {
        c.hermiticity_error = (single_ - single_.adjoint()).cwiseAbs().maxCoeff();
        Eigen::SelfAdjointEigenSolver<Matrix> eig(single_, Eigen::EigenvaluesOnly);
        c.min_eigenvalue = eig.eigenvalues().minCoeff();
        c.eigenvalues_checked = true;
        return c;
    }
    bool block_diagonal = true;
    c.min_eigenvalue = 0.0;
    for (const auto& [key, block] : blocks_) {
        const auto mirror = blocks_.find({key.second, key.first});
        if (mirror == blocks_.end()) {
            c.hermiticity_error = std::max(c.hermiticity_error, block.cwiseAbs().maxCoeff());
        } else {
            c.hermiticity_error = std::max(
                c.hermiticity_error, (block - mirror->second.adjoint()).cwiseAbs().maxCoeff());
        }
        if (key.first != key.second && block.cwiseAbs().maxCoeff() > 0.0) block_diagonal = false;
    }
    // Eigenvalues are only cheap to get when sectors do not mix.
    if (block_diagonal) {
        c.eigenvalues_checked = true;
        for (const auto& [key, block] : blocks_) {
            if (key.first != key.second) continue;
            Eigen::SelfAdjointEigenSolver<Matrix> eig(block, Eigen::EigenvaluesOnly);
            c.min_eigenvalue = std::min(c.min_eigenvalue, eig.eigenvalues().minCoeff());
        }
    }
    return c;
}

FockState thermal_state(double mean, const FockSpace& space) {
    require_mean(mean);
    const int dim = space.dim();
    FockState::Matrix rho = FockState::Matrix::Zero(dim, dim);
    const double q = mean / (1.0 + mean);
    double p = 1.0 / (1.0 + mean);
    for (int n = 0; n < dim; ++n) {
        rho(n, n) = p;
        p *= q;
    }
    return FockState::single_mode(std::move(rho), std::pow(q, dim));
}

FockState vacuum_state(const FockSpace& space) { return thermal_state(0.0, space); }

FockState tensor_product(const FockState& a, const FockState& b) {
    if (a.modes() != 1 || b.modes() != 1) {
        throw DomainError("tensor_product expects two single-mode states");
    }
    if (a.dim() != b.dim()) throw DomainError("tensor_product expects equal dimensions");
    const int dim = a.dim();
    const auto& ra = a.matrix();
    const auto& rb = b.matrix();
    FockState::BlockMap blocks;
    for (int na = 0; na < dim; ++na) {
        for (int na2 = 0; na2 < dim; ++na2) {
            if (ra(na, na2) == 0.0) continue;
            for (int nb = 0; nb < dim; ++nb) {
                for (int nb2 = 0; nb2 < dim; ++nb2) {
                    const auto v = ra(na, na2) * rb(nb, nb2);
                    if (v == 0.0) continue;
                    const int k = sector_of(na, nb);
                    const int k2 = sector_of(na2, nb2);
                    auto [it, inserted] = blocks.try_emplace({k, k2});
                    if (inserted) {
                        it->second = FockState::Matrix::Zero(sector_size(dim, k),
                                                             sector_size(dim, k2));
                    }
                    it->second(sector_index(na, nb), sector_index(na2, nb2)) = v;
                }
            }
        }
    }
    const double deficit = 1.0 - (1.0 - a.trace_deficit()) * (1.0 - b.trace_deficit());
    return FockState::two_mode(dim, std::move(blocks), deficit);
}

Eigen::MatrixXd expm_scaling_squaring(const Eigen::MatrixXd& a, double step_norm) {
    if (a.rows() != a.cols()) throw DomainError("matrix exponential needs a square matrix");
    if (!(step_norm > 0.0)) throw DomainError("step norm must be positive");
    const auto n = a.rows();
    const double norm = one_norm(a);
    const int squarings = norm > step_norm ? static_cast<int>(std::ceil(std::log2(norm / step_norm))) : 0;
    const Eigen::MatrixXd scaled = a / std::ldexp(1.0, squarings);

    Eigen::MatrixXd result = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
    for (int k = 1; k <= 64; ++k) {
        term = (term * scaled) / static_cast<double>(k);
        result += term;
        if (one_norm(term) <= 1e-18 * one_norm(result)) break;
    }
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

Eigen::MatrixXd squeeze_generator_block(int dim, int k, double gain) {
    const int size = sector_size(dim, k);
    if (size <= 0) throw DomainError("sector outside the truncated space");
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(size, size);
    for (int j = 0; j + 1 < size; ++j) {
        const auto [n, m] = sector_levels(k, j);
        // a^dag b^dag |n, m> = sqrt((n+1)(m+1)) |n+1, m+1>
        const double amp = gain * std::sqrt(static_cast<double>(n + 1) * static_cast<double>(m + 1));
        g(j + 1, j) = amp;
        g(j, j + 1) = -amp;
    }
    return g;
}

FockState two_mode_squeeze(const FockState& state, double gain, const FockSpace& space) {
    if (state.modes() != 2) throw DomainError("two_mode_squeeze needs a two-mode state");
    if (state.dim() != space.dim()) {
        throw DomainError("state dimension does not match the Fock space");
    }
    if (!std::isfinite(gain) || gain < 0.0) throw DomainError("squeezing gain must be finite and >= 0");
    if (gain == 0.0) return state;

    const int dim = space.dim();
    const int work = space.working_dim();

    std::set<int> sectors;
    for (const auto& [key, block] : state.blocks()) {
        sectors.insert(key.first);
        sectors.insert(key.second);
    }
    std::size_t bytes = 0;
    for (int k : sectors) {
        const auto s = static_cast<std::size_t>(sector_size(work, k));
        bytes += s * s * sizeof(double);
    }
    space.check_footprint(bytes, "squeezing unitary");

    // Only the retained corner of each sector unitary is needed: columns for
    // the input support, rows for the output that survives the cut.
    std::map<int, Eigen::MatrixXcd> corner;
    for (int k : sectors) {
        const int keep = sector_size(dim, k);
        const Eigen::MatrixXd u = expm_scaling_squaring(squeeze_generator_block(work, k, gain));
        corner.emplace(k, u.topLeftCorner(keep, keep).cast<std::complex<double>>());
    }

    FockState::BlockMap out;
    double dropped = 0.0;
    for (const auto& [key, block] : state.blocks()) {
        const auto& ul = corner.at(key.first);
        const auto& ur = corner.at(key.second);
        FockState::Matrix evolved = ul * block * ur.adjoint();
        if (key.first == key.second) {
            dropped += block.trace().real() - evolved.trace().real();
        }
        out.emplace(key, std::move(evolved));
    }
    const double deficit = state.trace_deficit() + std::max(0.0, dropped);
    if (deficit > space.tail_bound()) {
        const int suggested = std::min(kMaxDimension + 1, dim + std::max(8, dim / 2));
        throw TruncationError("trace deficit " + short_number(deficit) +
                                  " after squeezing exceeds the bound " +
                                  short_number(space.tail_bound()) + "; try dim >= " +
                                  std::to_string(suggested),
                              deficit, suggested);
    }
    return FockState::two_mode(dim, std::move(out), deficit);
}

ReducedMoments reduced_moments(const FockState& state, int mode) {
    const auto rho = state.reduced(mode);
    const int dim = static_cast<int>(rho.rows());
    ReducedMoments r;
    std::array<double, 4> acc{};
    for (int n = 0; n < dim; ++n) {
        const double p = rho(n, n).real();
        r.trace += p;
        double power = 1.0;
        for (double& a : acc) {
            power *= n;
            a += p * power;
        }
    }
    r.moments = {acc[0], acc[1], acc[2], acc[3]};

    // Missing tail modelled as geometric above dim, ratio read off the two
    // outermost populations (or from the retained mean if they are unusable).
    const double deficit = state.trace_deficit();
    r.truncation_error = {};
    if (deficit <= 0.0) return r;
    const double top = rho(dim - 1, dim - 1).real();
    const double below = rho(dim - 2, dim - 2).real();
    double q = below > 0.0 ? top / below : 0.0;
    if (!(q > 0.0 && q < 1.0)) {
        const double mean = r.trace > 0.0 ? acc[0] / r.trace : 0.0;
        q = mean / (1.0 + mean);
    }
    for (std::size_t j = 0; j < 4; ++j) {
        double sum = 0.0;
        double w = 1.0 - q;
        for (int x = 0; x < 1'000'000; ++x) {
            const double term = w * std::pow(static_cast<double>(dim + x), static_cast<double>(j + 1));
            sum += term;
            if (x > 8 && term < 1e-16 * sum) break;
            w *= q;
            if (w == 0.0) break;
        }
        r.truncation_error[j] = deficit * sum;
    }
    return r;
}

}  // namespace hbtamp::fock
