#pragma once

#include "mzkit/frequency.hpp"
#include "mzkit/pointset.hpp"
#include "mzkit/subspace.hpp"
#include "mzkit/tolerances.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mzkit {

/// Union of grid cells removed from the sup-norm constraint.
struct ExcludedSet {
    std::vector<Eigen::Index> cells; ///< sorted, distinct
    Eigen::Index grid_size = 0;
    double measure = 0.0;             ///< grid probability measure
    double measure_unnormalized = 0.0; ///< Lebesgue measure (measure * domain volume)
    std::string generator;            ///< "empty", "cells", "interval", "random", "greedy"
    std::uint64_t seed = 0;
    bool worst_case_search = false;

    bool empty() const noexcept { return cells.empty(); }
    bool contains(Eigen::Index cell) const;
};

/// Throws ArgumentError unless the cells are valid and leave part of the grid.
ExcludedSet excluded_cells(const GriddedSpace& space, std::vector<Eigen::Index> cells,
                           std::string generator = "cells", std::uint64_t seed = 0);

ExcludedSet excluded_empty(const GriddedSpace& space);

/// Cells of a 1-D torus grid with x in [start, start + length) modulo 2 pi (radians).
ExcludedSet excluded_interval(const GriddedSpace& space, double start, double length);

/// First `count` cells of a seeded random permutation of the grid; equal seeds
/// give nested sets as `count` grows.
ExcludedSet excluded_random(const GriddedSpace& space, std::size_t count, std::uint64_t seed);

/// Rigid translation of B by grid steps (torus only).
ExcludedSet translate(const ExcludedSet& b, const GriddedSpace& space, const std::vector<int>& shift);

struct RemezReport {
    std::string subspace;
    double measure = 0.0;
    double measure_unnormalized = 0.0;
    double r = 1.0;                 ///< +inf when grid \ B does not determine f
    Eigen::Index attaining_index = 0;
    Eigen::VectorXd coeffs;
    std::optional<Eigen::VectorXd> null_certificate;
    Eigen::Index resolution = 0;
    double tolerance = 0.0;
    /// exp(4 n |B|) with Lebesgue |B|, univariate Q = [-n, n]; stated for |B| < pi/2
    std::optional<double> univariate_bound;
    bool univariate_hypothesis = false;
    /// exp(2 d (|B| prod n_j)^(1/d)) for box Q; stated for
    /// |B| < (pi/2)^d (min n_j)^d / prod n_j
    std::optional<double> box_bound;
    bool box_hypothesis = false;
    /// C1 |Q|^(1/2) with C1 from the constants (trig subspaces)
    std::optional<double> sqrt_dim_factor;

    bool finite() const { return !null_certificate.has_value(); }
};

/// R = sup of ||f||_inf,grid over f with |f| <= 1 on grid \ B. Only x in B can
/// exceed 1, so one warm-started LP runs per excluded cell. R = 1 for B empty.
RemezReport remez_constant(const Subspace& s, const ExcludedSet& b, const Tolerances& tol = {},
                           double c1_const = 1.0);

/// Grow B one cell at a time, each time adding the candidate cell that
/// maximizes R. Candidates are the `candidates` cells where the current
/// extremal function is largest outside B.
ExcludedSet excluded_greedy(const Subspace& s, std::size_t count, std::size_t candidates = 8,
                            const Tolerances& tol = {});

enum class Verdict { Pass, Fail, HypothesisUnmet };
const char* to_string(Verdict v);

struct RemezImplication {
    Verdict verdict = Verdict::HypothesisUnmet;
    double r = 0.0;
    double d = 0.0;
    double measure = 0.0;
    double measure_limit = 0.0; ///< 1 / m
    double tolerance = 0.0;
};

/// For a translation-invariant trig subspace and a uniform constant D
/// certified on the m points P: when |B| < 1/m, checks R(B) <= D + tolerance.
/// Throws PreconditionError for subspaces not closed under translation.
RemezImplication remez_from_discretization(const Subspace& s, const PointSet& p, double d, const ExcludedSet& b,
                                           double tolerance = 1e-6, const Tolerances& tol = {});

struct RemezConstants {
    double c1 = 1.0;  ///< measure constant for the sqrt(|Q|) factor
    double C1 = 1.0;  ///< factor constant for the sqrt(|Q|) factor
    double cd = 1.0;  ///< measure constant for the factor 12
    double Cd = 1.0;  ///< point-count constant paired with the M formula
};

struct RemezThresholds {
    double sqrt_dim_measure = 0.0; ///< c1 / |Q|
    double sqrt_dim_factor = 0.0;  ///< C1 |Q|^(1/2)
    double twelve_measure = 0.0;   ///< cd 2^(-4|Q|) |Q|^(-2)
    double twelve_factor = 12.0;
    std::optional<double> s;
    double general_factor = 0.0;   ///< 6 (e (1 + |Q|/s))^(1/2); 12 in the s = |Q| special case
    double general_factor_formula = 0.0; ///< the general expression, even at s = |Q|
    double M = 0.0;                ///< [|Q|^2 e^(2s) (1 + |Q|/s)^(2s)] + 1, or 2^(4|Q|) at s = |Q|
    double m_log = 0.0;            ///< Cd M |Q| log2 M
    double m_log_cubed = 0.0;      ///< Cd M |Q| (log2 M)^3
};

/// Formula evaluation. Without `s` the special case s = |Q| is used.
/// Throws ArgumentError when s lies outside [|Q|^(1/2), |Q|].
RemezThresholds remez_thresholds(std::size_t q_size, std::optional<double> s = std::nullopt,
                                 const RemezConstants& constants = {});

} // namespace mzkit
