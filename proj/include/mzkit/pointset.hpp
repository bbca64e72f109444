#pragma once

#include "mzkit/grid.hpp"
#include "mzkit/subspace.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mzkit {

struct Provenance {
    std::string method;
    std::uint64_t seed = 0;
    std::map<std::string, double> params;
};

/// Weighted sample of grid points. Indices refer to the grid of the subspace
/// the set was built for; repeated indices are allowed (iid draws).
struct PointSet {
    std::vector<Eigen::Index> indices;
    std::vector<double> weights;
    Provenance provenance;
    /// Declared ceiling on sum of weights, when the construction provides one.
    std::optional<double> weight_bound;

    std::size_t size() const noexcept { return indices.size(); }
    double weight_sum() const;
    /// Coordinates of the points (m x d).
    Eigen::MatrixXd coordinates(const GriddedSpace& space) const;
    /// Throws ArgumentError unless the set is usable on `space`.
    void validate(const GriddedSpace& space) const;
};

/// m iid draws from the grid measure, weights 1/m.
PointSet sample_iid(const GriddedSpace& space, int m, std::uint64_t seed);

/// m iid draws from the density w(x)^2 / N against the grid measure. With
/// `weighted` the importance weights N / (m w(xi)^2) make the weighted sum of
/// f^2 unbiased for ||f||_2^2; otherwise weights are 1/m.
PointSet sample_christoffel(const Subspace& s, int m, std::uint64_t seed, bool weighted = true);

/// (b + 1 + 2 sqrt b) / (b + 1 - 2 sqrt b)
double bss_ratio_bound(double b);

/// Deterministic barrier-potential sparsification. Returns at most ceil(bN)
/// distinct weighted points whose frame matrix F satisfies I <= F <= kappa(b) I,
/// with weights rescaled so that the lower frame bound is exactly 1.
PointSet bss_select(const Subspace& s, double b);

/// span(S + {1}), orthonormalized; S itself when 1 already lies in the span.
Subspace augment_constant(const Subspace& s, const Tolerances& tol = {});

/// m points spaced G/m grid steps apart on a 1-D torus grid, weights 1/m
/// (exactly equispaced when m divides G).
PointSet equispaced_points(const GriddedSpace& space, int m, int offset = 0);

/// Every grid point with its measure weight.
PointSet full_grid_points(const GriddedSpace& space);

/// Aggregated weight per grid cell (repeated indices summed).
Eigen::VectorXd cell_weights(const PointSet& p, Eigen::Index grid_size);

} // namespace mzkit
