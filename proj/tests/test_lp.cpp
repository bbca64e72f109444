#include "mzkit/errors.hpp"
#include "mzkit/lp.hpp"

#include <doctest.h>

#include <functional>
#include <random>

using namespace mzkit;

namespace {

// maximum of objective over the polytope by enumerating every vertex
double vertex_enumeration(const Eigen::MatrixXd& a, const Eigen::VectorXd& obj) {
    const Eigen::Index m = a.rows(), n = a.cols();
    double best = -1e300;
    std::vector<int> pick(static_cast<std::size_t>(n));
    std::function<void(Eigen::Index, Eigen::Index)> rec = [&](Eigen::Index start, Eigen::Index depth) {
        if (depth == n) {
            for (int signs = 0; signs < (1 << n); ++signs) {
                Eigen::MatrixXd b(n, n);
                Eigen::VectorXd rhs(n);
                for (Eigen::Index k = 0; k < n; ++k) {
                    b.row(k) = a.row(pick[static_cast<std::size_t>(k)]);
                    rhs(k) = (signs >> k) & 1 ? 1.0 : -1.0;
                }
                Eigen::FullPivLU<Eigen::MatrixXd> lu(b);
                if (lu.rank() < n) continue;
                const Eigen::VectorXd c = lu.solve(rhs);
                if ((a * c).cwiseAbs().maxCoeff() > 1.0 + 1e-9) continue;
                best = std::max(best, obj.dot(c));
            }
            return;
        }
        for (Eigen::Index j = start; j < m; ++j) {
            pick[static_cast<std::size_t>(depth)] = static_cast<int>(j);
            rec(j + 1, depth + 1);
        }
    };
    rec(0, 0);
    return best;
}

} // namespace

TEST_CASE("simplex agrees with vertex enumeration") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    for (int t = 0; t < 25; ++t) {
        const Eigen::Index n = 2 + t % 3, m = n + 3 + t % 4;
        Eigen::MatrixXd a(m, n);
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < n; ++j) a(i, j) = g(rng);
        SymmetricPolytopeLp lp(a);
        for (int r = 0; r < 4; ++r) {
            Eigen::VectorXd obj(n);
            for (Eigen::Index j = 0; j < n; ++j) obj(j) = g(rng);
            const auto res = lp.maximize(obj);
            CHECK(res.value == doctest::Approx(vertex_enumeration(a, obj)).epsilon(1e-9));
            CHECK((a * res.coeffs).cwiseAbs().maxCoeff() <= 1.0 + 1e-9);
            // dual certificate reproduces the objective
            Eigen::VectorXd recon = Eigen::VectorXd::Zero(n);
            for (std::size_t k = 0; k < res.active_rows.size(); ++k)
                recon += res.dual(static_cast<Eigen::Index>(k)) * res.active_signs[k] *
                         a.row(res.active_rows[k]).transpose();
            CHECK((recon - obj).norm() < 1e-8 * std::max(1.0, obj.norm()));
        }
    }
}

TEST_CASE("warm starts match cold starts") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    Eigen::MatrixXd a(40, 5);
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = g(rng);
    SymmetricPolytopeLp warm(a);
    for (int r = 0; r < 20; ++r) {
        Eigen::VectorXd obj(5);
        for (Eigen::Index j = 0; j < 5; ++j) obj(j) = g(rng);
        SymmetricPolytopeLp cold(a);
        CHECK(warm.maximize(obj).value == doctest::Approx(cold.maximize(obj).value).epsilon(1e-10));
    }
}

TEST_CASE("square systems give the Lebesgue function") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    Eigen::MatrixXd a(4, 4);
    for (Eigen::Index i = 0; i < 4; ++i)
        for (Eigen::Index j = 0; j < 4; ++j) a(i, j) = g(rng);
    SymmetricPolytopeLp lp(a);
    for (int r = 0; r < 10; ++r) {
        Eigen::VectorXd obj(4);
        for (Eigen::Index j = 0; j < 4; ++j) obj(j) = g(rng);
        // f(x) = sum_j l_j(x) f(xi_j) with cardinal weights l = A^{-T} u(x)
        const double lebesgue = a.transpose().fullPivLu().solve(obj).cwiseAbs().sum();
        CHECK(lp.maximize(obj).value == doctest::Approx(lebesgue).epsilon(1e-10));
    }
}

TEST_CASE("null-space detection") {
    Eigen::MatrixXd a(3, 3);
    a << 1, 2, 3, 2, 4, 6, 0, 1, 1;
    const auto v = null_space_vector(a);
    REQUIRE(v);
    CHECK((a * *v).norm() < 1e-12);
    CHECK(v->norm() == doctest::Approx(1.0));
    CHECK_FALSE(null_space_vector(Eigen::MatrixXd::Identity(3, 3)));
    CHECK(null_space_vector(Eigen::MatrixXd::Ones(2, 3)));
    CHECK_THROWS_AS(SymmetricPolytopeLp(Eigen::MatrixXd::Ones(2, 3)), ArgumentError);
}
