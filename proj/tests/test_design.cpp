#include "mzkit/design.hpp"

#include <doctest.h>

using namespace mzkit;

TEST_CASE("multiplicative design reaches the G-optimality threshold") {
    const auto space = GriddedSpace::box(1, 201);
    const Eigen::MatrixXd raw = legendre_raw_basis(4, space);
    const double n = 5.0;
    const DesignMeasure d = kw_optimal_design(raw, space, 0.01);
    CHECK(d.converged);
    CHECK(d.objective_monotone);
    CHECK(d.g_value <= n * 1.01 + 1e-9);
    CHECK(d.g_value >= n - 1e-9); // sum_i w_i d_i = N forces max d >= N
    CHECK(d.weights.sum() == doctest::Approx(1.0));
    CHECK(d.weights.minCoeff() >= 0.0);
    for (std::size_t i = 1; i < d.logdet_history.size(); ++i)
        CHECK(d.logdet_history[i] >= d.logdet_history[i - 1] - 1e-10);

    const Subspace s = design_subspace(raw, space, d);
    CHECK(s.orthonormality_error() < 1e-10);
    const double h = christoffel(s).h2inf;
    CHECK(h * h <= n * 1.01 + 1e-8);
}

TEST_CASE("uniform measure is already optimal for trig subspaces") {
    const auto space = GriddedSpace::torus(1, 64);
    const Eigen::MatrixXd raw = trig_raw_basis(FrequencySet::box({2}), space);
    const DesignMeasure d = kw_optimal_design(raw, space, 0.01);
    CHECK(d.converged);
    CHECK(d.g_value == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("two-dimensional polynomial design") {
    const auto space = GriddedSpace::box(2, 21);
    const Eigen::MatrixXd raw = legendre_raw_basis(2, space);
    const DesignMeasure d = kw_optimal_design(raw, space, 0.01);
    CHECK(d.converged);
    CHECK(d.g_value <= 6.0 * 1.01 + 1e-9);
}
