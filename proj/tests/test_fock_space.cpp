#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hbtamp/errors.hpp"
#include "hbtamp/fock_space.hpp"
#include "hbtamp/opa_model.hpp"
#include "property.hpp"

using namespace hbtamp;
using namespace hbtamp::fock;

namespace {

FockState squeezed_thermal(double n, double g, int dim) {
    const FockSpace space(dim);
    return two_mode_squeeze(tensor_product(thermal_state(n, space), vacuum_state(space)), g, space);
}

int dim_for(double n, double g) {
    const OpaParams p{g, 0.0};
    return moment_truncation_dimension(std::max(equivalent_thermal_mean(n, p), idler_output_mean(n, p)), 4, 1e-8,
                                       kDefaultTailBound);
}

}  // namespace

TEST_CASE("truncation dimension") {
    CHECK(truncation_dimension(0.0, 1e-9) == 2);
    CHECK(truncation_dimension(1.0, 1e-9) == 30);  // 2^-30 < 1e-9 < 2^-29
    CHECK(std::pow(0.5, truncation_dimension(1.0, 1e-9)) < 1e-9);
    CHECK_THROWS_AS(truncation_dimension(100.0, 1e-9), TruncationError);
    try {
        truncation_dimension(100.0, 1e-9);
    } catch (const TruncationError& e) {
        CHECK(e.suggested_dim() > kMaxDimension);
    }
    CHECK_THROWS_AS(truncation_dimension(1.0, 0.0), DomainError);
    const int d = moment_truncation_dimension(1.0, 4, 1e-8, 1e-9);
    CHECK(d > 30);
    CHECK(thermal_moment_tail(1.0, 4, d) < 1e-8);
    CHECK(thermal_moment_tail(1.0, 4, d - 1) >= 1e-8);
}

TEST_CASE("sector bookkeeping") {
    for (int n = 0; n < 12; ++n) {
        for (int m = 0; m < 12; ++m) {
            const int k = sector_of(n, m);
            const int j = sector_index(n, m);
            CHECK(sector_levels(k, j) == std::pair<int, int>(n, m));
            CHECK(j < sector_size(12, k));
        }
    }
}

TEST_CASE("thermal state") {
    const FockSpace space(40);
    const auto vac = thermal_state(0.0, space);
    CHECK(vac.trace_deficit() == 0.0);
    CHECK(std::abs(vac.matrix()(0, 0) - 1.0) < 1e-15);

    const auto th = thermal_state(1.0, space);
    CHECK(th.matrix()(0, 0).real() == doctest::Approx(0.5));
    CHECK(th.matrix()(1, 1).real() == doctest::Approx(0.25));
    CHECK(th.trace_deficit() == doctest::Approx(std::pow(2.0, -40)).epsilon(1e-12));
    CHECK(th.trace() + th.trace_deficit() == doctest::Approx(1.0).epsilon(1e-15));

    // m1 and m2 are resolved to 1e-9 at dim 40; m3 and m4 carry a visible tail
    // that the reported truncation error accounts for.
    const auto rm = reduced_moments(th, 0);
    CHECK(rm.moments.m1 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rm.moments.m2 == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(rm.moments.m3 + rm.truncation_error[2] == doctest::Approx(13.0).epsilon(1e-9));
    CHECK(rm.moments.m4 + rm.truncation_error[3] == doctest::Approx(75.0).epsilon(1e-9));
    const auto rm_big = reduced_moments(thermal_state(1.0, FockSpace(80)), 0);
    CHECK(max_relative_difference(rm_big.moments, MomentVector{1, 3, 13, 75}) < 1e-9);
}

TEST_CASE("tensor product and partial trace") {
    const FockSpace space(20);
    const auto a = thermal_state(0.3, space);
    const auto b = thermal_state(0.7, space);
    const auto ab = tensor_product(a, b);
    CHECK(ab.trace_deficit() == doctest::Approx(1 - (1 - a.trace_deficit()) * (1 - b.trace_deficit())));
    const auto ra = ab.reduced(0);
    const auto rb = ab.reduced(1);
    CHECK((ra - a.matrix() * b.trace()).norm() < 1e-14);
    CHECK((rb - b.matrix() * a.trace()).norm() < 1e-14);
    CHECK(ab.element(2, 3, 2, 3).real() == doctest::Approx(a.matrix()(2, 2).real() * b.matrix()(3, 3).real()));
    CHECK(ab.element(2, 3, 3, 2) == std::complex<double>(0.0, 0.0));
    CHECK(ab.element(25, 0, 25, 0) == std::complex<double>(0.0, 0.0));
    CHECK(ab.check_invariants().ok());
    CHECK_THROWS_AS(tensor_product(thermal_state(0.3, FockSpace(10)), b), DomainError);
}

TEST_CASE("matrix exponential") {
    Eigen::MatrixXd rot(2, 2);
    const double t = 1.3;
    rot << 0, -t, t, 0;
    const auto e = expm_scaling_squaring(rot);
    Eigen::MatrixXd expect(2, 2);
    expect << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    CHECK((e - expect).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((expm_scaling_squaring(Eigen::MatrixXd::Zero(3, 3)) - Eigen::MatrixXd::Identity(3, 3)).norm() == 0.0);
    Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(2, 2);
    diag(0, 0) = 2.0;
    diag(1, 1) = -1.0;
    const auto ed = expm_scaling_squaring(diag);
    CHECK(ed(0, 0) == doctest::Approx(std::exp(2.0)).epsilon(1e-14));
    CHECK(ed(1, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("property: squeezing blocks are orthogonal") {
    testing::Draw draw(41);
    for (int i = 0; i < 20; ++i) {
        const int dim = draw.integer(3, 60);
        const int k = draw.integer(-(dim - 2), dim - 2);
        const double g = draw.uniform(0.0, 2.0);
        const auto gen = squeeze_generator_block(dim, k, g);
        CHECK((gen + gen.transpose()).norm() == 0.0);
        const auto u = expm_scaling_squaring(gen);
        const auto eye = Eigen::MatrixXd::Identity(u.rows(), u.cols());
        CHECK((u.transpose() * u - eye).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((u * expm_scaling_squaring(-gen) - eye).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("squeezing at zero gain leaves the state unchanged") {
    const FockSpace space(20);
    const auto in = tensor_product(thermal_state(0.5, space), vacuum_state(space));
    const auto out = two_mode_squeeze(in, 0.0, space);
    for (int na = 0; na < 20; ++na) {
        for (int nb = 0; nb < 3; ++nb) {
            CHECK(std::abs(out.element(na, nb, na, nb) - in.element(na, nb, na, nb)) < 1e-12);
        }
    }
}

TEST_CASE("squeezed vacuum and squeezed thermal means") {
    const auto sv = squeezed_thermal(0.0, 0.5, 30);
    const double nu2 = std::pow(std::sinh(0.5), 2);
    CHECK(std::abs(reduced_moments(sv, 0).moments.m1 - nu2) < 1e-8);
    CHECK(std::abs(reduced_moments(sv, 1).moments.m1 - nu2) < 1e-8);
    // The squeezed vacuum only populates |n, n>.
    CHECK(std::abs(sv.element(2, 1, 2, 1)) < 1e-15);
    CHECK(std::abs(sv.element(2, 2, 2, 2).real() - std::pow(std::tanh(0.5), 4) / std::pow(std::cosh(0.5), 2)) < 1e-12);

    const auto st = squeezed_thermal(0.5, 0.5, 40);
    CHECK(std::abs(reduced_moments(st, 0).moments.m1 - equivalent_thermal_mean(0.5, {0.5, 0.0})) < 1e-8);
}

TEST_CASE("signal and idler moments after squeezing") {
    const OpaParams p{0.5, 0.0};
    const auto state = squeezed_thermal(1.0, 0.5, dim_for(1.0, 0.5));
    const auto sig = reduced_moments(state, 0);
    const auto idl = reduced_moments(state, 1);
    CHECK(max_relative_difference(sig.moments, propagate_moments(thermal_moments(ThermalSource(1.0)), p)) < 1e-6);
    CHECK(max_relative_difference(idl.moments, thermal_moments(ThermalSource(idler_output_mean(1.0, p)))) < 1e-6);
    CHECK(state.trace_deficit() < kDefaultTailBound);
    const auto inv = state.check_invariants();
    CHECK(inv.ok());
    CHECK(inv.eigenvalues_checked);
}

TEST_CASE("truncation and memory limits") {
    const FockSpace small(10);
    CHECK_THROWS_AS(two_mode_squeeze(tensor_product(vacuum_state(small), vacuum_state(small)), 1.5, small),
                    TruncationError);
    try {
        two_mode_squeeze(tensor_product(vacuum_state(small), vacuum_state(small)), 1.5, small);
    } catch (const TruncationError& e) {
        CHECK(e.suggested_dim() > 10);
        CHECK(e.achieved_deficit() > kDefaultTailBound);
    }
    const FockSpace capped(60, kDefaultTailBound, 1024);
    CHECK_THROWS_AS(two_mode_squeeze(tensor_product(vacuum_state(capped), vacuum_state(capped)), 0.5, capped),
                    ResourceError);
    CHECK_THROWS_AS(FockSpace(1), DomainError);
    CHECK_THROWS_AS(FockSpace(kMaxDimension + 1), DomainError);
}

TEST_CASE("property: Fock-space moments match propagated moments") {
    testing::Draw draw(42);
    for (int i = 0; i < 6; ++i) {
        const double n = draw.uniform(0.0, 1.0);
        const double g = draw.uniform(0.0, 0.7);
        CAPTURE(n);
        CAPTURE(g);
        const auto state = squeezed_thermal(n, g, dim_for(n, g));
        const auto predicted = propagate_moments(thermal_moments(ThermalSource(n)), {g, 0.0});
        CHECK(max_relative_difference(reduced_moments(state, 0).moments, predicted) < 1e-6);
        CHECK(state.trace() + state.trace_deficit() == doctest::Approx(1.0).epsilon(1e-10));
    }
}
