#include "mzkit/errors.hpp"
#include "mzkit/subspace.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace mzkit;

TEST_CASE("trig subspace is grid-orthonormal with flat Christoffel function") {
    const auto space = GriddedSpace::torus(1, 64);
    const Subspace s = build_trig_subspace(FrequencySet::box({2}), space);
    CHECK(s.dim() == 5);
    CHECK(s.orthonormality_error() < 1e-10);
    const ChristoffelProfile p = christoffel(s);
    CHECK(p.values.minCoeff() == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
    CHECK(p.h2inf == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
    CHECK(s.translation_invariant());
}

TEST_CASE("reproducing kernel of {-1,0,1} is 1 + 2 cos(x - y)") {
    const auto space = GriddedSpace::torus(1, 32);
    const Subspace s = build_trig_subspace(FrequencySet::box({1}), space);
    for (Eigen::Index i : {0, 3, 17})
        for (Eigen::Index j : {0, 5, 31}) {
            const double d = space.points()(i, 0) - space.points()(j, 0);
            CHECK(dirichlet_eval(s, i, j) == doctest::Approx(1.0 + 2.0 * std::cos(d)).epsilon(1e-12));
        }
}

TEST_CASE("asymmetric frequency sets give cos and sin per representative") {
    const auto space = GriddedSpace::torus(1, 64);
    const Subspace s = build_trig_subspace(FrequencySet(1, {{1}, {3}}), space);
    CHECK(s.dim() == 4);
    CHECK(s.orthonormality_error() < 1e-10);
}

TEST_CASE("two-dimensional trig subspace on a product grid") {
    const Subspace s = build_trig_subspace(FrequencySet::hyperbolic_cross(2, 2), GriddedSpace::torus(2, 16));
    CHECK(s.dim() == 21);
    CHECK(s.orthonormality_error() < 1e-10);
}

TEST_CASE("coarse grids are rejected") {
    CHECK_THROWS_AS(build_trig_subspace(FrequencySet::box({2}), GriddedSpace::torus(1, 5)), ResolutionError);
    CHECK_NOTHROW(build_trig_subspace(FrequencySet::box({2}), GriddedSpace::torus(1, 6)));
}

TEST_CASE("dependent columns raise a degeneracy error") {
    const auto space = GriddedSpace::box(1, 50);
    Eigen::MatrixXd raw = monomial_raw_basis(2, space);
    raw.col(2) = raw.col(0) + raw.col(1);
    try {
        orthonormalize(raw, space);
        FAIL("expected DegeneracyError");
    } catch (const DegeneracyError& e) {
        CHECK(e.eigenvalue() < 1e-10);
    }
}

TEST_CASE("polynomial subspace spans the monomials") {
    const auto space = GriddedSpace::box(1, 200);
    const Subspace s = build_poly_subspace(3, space);
    CHECK(s.dim() == 4);
    CHECK(s.orthonormality_error() < 1e-10);
    CHECK_FALSE(s.translation_invariant());
    const Eigen::MatrixXd mono = monomial_raw_basis(3, space);
    const Eigen::VectorXd& w = space.weights();
    // residual of projecting each monomial onto span(basis) in the grid inner product
    for (Eigen::Index k = 0; k < mono.cols(); ++k) {
        const Eigen::VectorXd c = s.basis().transpose() * w.asDiagonal() * mono.col(k);
        CHECK((mono.col(k) - s.basis() * c).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("Legendre Christoffel maximum is close to degree + 1 at the endpoints") {
    const Subspace s = build_poly_subspace(4, GriddedSpace::box(1, 2001));
    const ChristoffelProfile p = christoffel(s);
    CHECK(p.h2inf == doctest::Approx(5.0).epsilon(0.02));
    CHECK((p.argmax == 0 || p.argmax == 2000));
}

TEST_CASE("grid norms") {
    const Eigen::VectorXd w = Eigen::VectorXd::Constant(4, 0.25);
    Eigen::VectorXd v(4);
    v << 1, -2, 0, 1;
    CHECK(grid_norm(v, w, std::numeric_limits<double>::infinity()) == 2.0);
    CHECK(grid_norm(v, w, 1.0) == doctest::Approx(1.0));
    CHECK(grid_norm(v, w, 2.0) == doctest::Approx(std::sqrt(1.5)));
}

TEST_CASE("Nikol'skii constants") {
    const Subspace s = build_trig_subspace(FrequencySet::box({2}), GriddedSpace::torus(1, 64));
    const NikolskiiEstimate h2 = nikolskii_constant(s, 2.0);
    CHECK(h2.value == doctest::Approx(std::sqrt(5.0)));
    CHECK_FALSE(h2.lower_bound);
    CHECK_THROWS_AS(nikolskii_constant(s, 0.5), ArgumentError);

    // random search never beats the ascent, and smaller q gives larger constants
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (double q : {1.0, 4.0}) {
        const NikolskiiEstimate est = nikolskii_constant(s, q);
        CHECK(est.lower_bound);
        double oracle = 0.0;
        for (int t = 0; t < 2000; ++t) {
            Eigen::VectorXd c(s.dim());
            for (Eigen::Index k = 0; k < c.size(); ++k) c(k) = g(rng);
            const Eigen::VectorXd f = s.evaluate(c);
            oracle = std::max(oracle, f.cwiseAbs().maxCoeff() / grid_norm(f, s.space().weights(), q));
        }
        CHECK(est.value >= oracle - 1e-9);
        if (q < 2.0) CHECK(est.value >= h2.value - 1e-9);
        if (q > 2.0) CHECK(est.value <= h2.value + 1e-9);
    }
}
