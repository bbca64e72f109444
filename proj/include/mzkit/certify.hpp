#pragma once

#include "mzkit/pointset.hpp"
#include "mzkit/subspace.hpp"
#include "mzkit/tolerances.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>

namespace mzkit {

/// Constants C1 <= C2 of C1 ||f||_q^q <= sum_j lambda_j |f(xi^j)|^q <= C2 ||f||_q^q.
struct MZReport {
    double q = 2.0;
    std::size_t m = 0;
    double c1 = 0.0;
    double c2 = 0.0;
    /// "exact-eigen": true constants. "empirical": c1 is an upper bound on the
    /// true C1 and c2 a lower bound on the true C2.
    std::string method;
    double tolerance = 0.0;
    Eigen::Index resolution = 0;
    double weight_sum = 0.0;
    /// Unit coefficient vector of an f vanishing on the points (singular frame).
    std::optional<Eigen::VectorXd> null_certificate;
};

/// Best D in ||f||_inf,grid <= D max_j |f(xi^j)|.
struct UniformReport {
    double d = 1.0; ///< +inf when some nonzero f vanishes on the point set
    Eigen::Index attaining_index = 0;
    Eigen::VectorXd coeffs;
    std::size_t m = 0;
    Eigen::Index resolution = 0;
    double tolerance = 0.0;
    std::optional<Eigen::VectorXd> null_certificate;

    bool finite() const { return !null_certificate.has_value(); }
};

/// Exact weighted L2 frame bounds: extreme eigenvalues of sum_j lambda_j u(xi^j) u(xi^j)^T.
MZReport certify_l2(const Subspace& s, const PointSet& p, const Tolerances& tol = {});

/// Exact grid-resolution uniform constant: max over grid x of the LP
/// max f(x) s.t. |f(xi^j)| <= 1.
UniformReport certify_uniform(const Subspace& s, const PointSet& p, const Tolerances& tol = {});

struct RatioAscentOptions {
    int restarts = 16;
    int iters = 300;
    double smoothing_exponent = 64.0;
};

/// Cheap lower estimate of D by smoothed ratio ascent on ||f||_inf,grid / max_j |f(xi^j)|.
double estimate_uniform_ratio(const Subspace& s, const PointSet& p, std::uint64_t seed,
                              const RatioAscentOptions& opts = {});

struct LqOptions {
    int iters = 200;
    double step_tol = 1e-12;
    /// Seed the search with the extreme eigenvectors of the L2 frame matrix.
    bool eigen_seeds = true;
};

/// Empirical L_q bounds from `trials` random directions refined by ratio
/// ascent (for c2) and descent (for c1). One-sided: see MZReport::method.
MZReport certify_lq(const Subspace& s, const PointSet& p, double q, int trials, std::uint64_t seed,
                    const LqOptions& opts = {});

/// Fraction of `trials` iid m-point draws whose empirical L_q bounds lie in
/// [1/2, 3/2]. Trial t draws from the stream derive_seed(seed, t), so draws
/// for different m with the same seed are nested prefixes.
double mc_success_probability(const Subspace& s, double q, int m, int trials, std::uint64_t seed,
                              int directions = 4, const LqOptions& opts = {});

/// H sqrt(sum lambda / C1): the uniform bound implied by ||f||_inf <= H ||f||_2
/// and the lower L2 frame bound. Infinite when C1 = 0.
double nikolskii_chain_bound(double h, const MZReport& l2);

} // namespace mzkit
