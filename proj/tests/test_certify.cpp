#include "mzkit/certify.hpp"

#include <doctest.h>

#include <cmath>

using namespace mzkit;

namespace {

// Lebesgue constant of trig interpolation at m = 2n+1 equispaced nodes, on the grid
double lebesgue_oracle(int n, const GriddedSpace& space, const PointSet& p) {
    double best = 0.0;
    const double m = 2.0 * n + 1.0;
    for (Eigen::Index i = 0; i < space.size(); ++i) {
        double s = 0.0;
        for (Eigen::Index j : p.indices) {
            const double t = space.points()(i, 0) - space.points()(j, 0);
            double dk = 1.0;
            for (int k = 1; k <= n; ++k) dk += 2.0 * std::cos(k * t);
            s += std::abs(dk) / m;
        }
        best = std::max(best, s);
    }
    return best;
}

} // namespace

TEST_CASE("equispaced points give exact frame bounds and the Lebesgue constant") {
    for (int n : {1, 2, 3}) {
        const auto space = GriddedSpace::torus(1, (2 * n + 1) * 40);
        const Subspace s = build_trig_subspace(FrequencySet::box({n}), space);
        const PointSet p = equispaced_points(space, 2 * n + 1);
        const MZReport r = certify_l2(s, p);
        CHECK(r.c1 == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(r.c2 == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(r.method == "exact-eigen");
        const UniformReport u = certify_uniform(s, p);
        CHECK(u.finite());
        CHECK(u.d == doctest::Approx(lebesgue_oracle(n, space, p)).epsilon(1e-9));
    }
}

TEST_CASE("the full grid certifies with unit constants") {
    const auto space = GriddedSpace::torus(1, 32);
    const Subspace s = build_trig_subspace(FrequencySet::box({3}), space);
    const PointSet g = full_grid_points(space);
    CHECK(certify_l2(s, g).c1 == doctest::Approx(1.0));
    CHECK(certify_uniform(s, g).d == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("too few points are detected as degenerate") {
    const auto space = GriddedSpace::torus(1, 64);
    const Subspace s = build_trig_subspace(FrequencySet::box({2}), space);
    const PointSet p = sample_iid(space, 4, 3);
    const UniformReport u = certify_uniform(s, p);
    CHECK(std::isinf(u.d));
    REQUIRE(u.null_certificate);
    const MZReport r = certify_l2(s, p);
    CHECK(r.c1 == 0.0);
    REQUIRE(r.null_certificate);
    for (Eigen::Index j : p.indices) {
        CHECK(std::abs(s.basis().row(j).dot(*u.null_certificate)) < 1e-9);
        CHECK(std::abs(s.basis().row(j).dot(*r.null_certificate)) < 1e-9);
    }
}

TEST_CASE("uniform constant is at least 1 and shrinks on supersets") {
    const auto space = GriddedSpace::box(1, 257);
    const Subspace s = build_poly_subspace(3, space);
    double prev = std::numeric_limits<double>::infinity();
    for (int m : {4, 6, 10, 20, 40}) {
        const PointSet p = sample_iid(space, m, 17);
        const UniformReport u = certify_uniform(s, p);
        CHECK(u.d >= 1.0 - 1e-12);
        CHECK(u.d <= prev + 1e-9);
        prev = u.d;
        if (u.finite()) CHECK(estimate_uniform_ratio(s, p, 5) <= u.d + 1e-9);
    }
}

TEST_CASE("empirical Lq bounds are one-sided relative to the exact L2 constants") {
    const auto space = GriddedSpace::torus(1, 128);
    const Subspace s = build_trig_subspace(FrequencySet::box({2}), space);
    const PointSet p = sample_iid(space, 20, 8);
    const MZReport exact = certify_l2(s, p);
    const MZReport emp = certify_lq(s, p, 2.0, 10, 1);
    CHECK(emp.method == "empirical");
    CHECK(emp.c1 >= exact.c1 - 1e-9);
    CHECK(emp.c2 <= exact.c2 + 1e-9);
    CHECK(emp.c1 == doctest::Approx(exact.c1).epsilon(1e-6));
    CHECK(emp.c2 == doctest::Approx(exact.c2).epsilon(1e-6));
    const MZReport q4 = certify_lq(s, p, 4.0, 10, 1);
    CHECK(q4.c1 <= q4.c2);
}

TEST_CASE("Monte Carlo success probability") {
    const Subspace s = build_trig_subspace(FrequencySet::box({1}), GriddedSpace::torus(1, 64));
    const double a = mc_success_probability(s, 2.0, 40, 20, 9);
    CHECK(a >= 0.0);
    CHECK(a <= 1.0);
    CHECK(a == mc_success_probability(s, 2.0, 40, 20, 9));
    CHECK(mc_success_probability(s, 2.0, 2, 20, 9) == 0.0);
}

TEST_CASE("chain bound dominates the certified uniform constant") {
    const auto space = GriddedSpace::box(1, 1024);
    const Subspace s = build_poly_subspace(5, space);
    const PointSet p = bss_select(s, 2.0);
    const double chain = nikolskii_chain_bound(christoffel(s).h2inf, certify_l2(s, p));
    CHECK(certify_uniform(s, p).d <= chain + 1e-6);
}
