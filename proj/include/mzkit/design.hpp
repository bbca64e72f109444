#pragma once

#include "mzkit/grid.hpp"
#include "mzkit/subspace.hpp"

#include <Eigen/Dense>

#include <vector>

namespace mzkit {

/// Approximate G-optimal (Kiefer-Wolfowitz) design over the grid points.
struct DesignMeasure {
    Eigen::VectorXd weights;
    /// max_i u~(x^i)^T u~(x^i) with u~ orthonormal for `weights`
    double g_value = 0.0;
    int iterations = 0;
    bool converged = false;
    /// log det of the design Gram matrix, one entry per evaluated iterate
    std::vector<double> logdet_history;
    bool objective_monotone = true;
};

/// Multiplicative updates weight_i <- weight_i * d_i / N, where d_i is the
/// variance function of the current design, until max_i d_i <= N (1 + tol).
/// Starts from the grid measure of `space`. On non-convergence the best
/// iterate seen is returned with `converged == false`.
DesignMeasure kw_optimal_design(const Eigen::MatrixXd& raw, const GriddedSpace& space,
                                double tol = 0.01, int max_iters = 200000);

/// Orthonormal basis of span(raw) with respect to the design measure.
Subspace design_subspace(const Eigen::MatrixXd& raw, const GriddedSpace& space,
                         const DesignMeasure& design, const Tolerances& tol = {},
                         std::string label = {}, std::optional<FrequencySet> freqs = std::nullopt);

} // namespace mzkit
