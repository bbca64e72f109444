#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace mzkit {

enum class Domain { Torus, Box };

const char* to_string(Domain domain);
Domain domain_from_string(const std::string& name);

/// Tensor-product quadrature grid standing in for a probability space.
///
/// Points are stored row-major in the order of the multi-index with the last
/// axis varying fastest. Torus axes hold 2*pi*i/n, box axes hold
/// equispaced points on [-1, 1] including both endpoints.
class GriddedSpace {
public:
    static GriddedSpace torus(int dim, int points_per_axis);
    static GriddedSpace torus(std::vector<int> shape);
    static GriddedSpace box(int dim, int points_per_axis);
    static GriddedSpace box(std::vector<int> shape);

    GriddedSpace(Domain domain, std::vector<int> shape, Eigen::VectorXd weights);

    Domain domain() const noexcept { return domain_; }
    int dim() const noexcept { return static_cast<int>(shape_.size()); }
    const std::vector<int>& shape() const noexcept { return shape_; }
    Eigen::Index size() const noexcept { return points_.rows(); }
    const Eigen::MatrixXd& points() const noexcept { return points_; }
    const Eigen::VectorXd& weights() const noexcept { return weights_; }

    /// Same grid carrying a different probability vector.
    GriddedSpace with_weights(Eigen::VectorXd weights) const;

    /// Weights are all equal (the grid carries the discrete uniform measure).
    bool uniform() const;

    std::vector<int> multi_index(Eigen::Index flat) const;
    Eigen::Index flat_index(const std::vector<int>& multi) const;
    /// Torus only: index of the point translated by `shift` grid steps.
    Eigen::Index translate(Eigen::Index flat, const std::vector<int>& shift) const;

    /// Total mass of the domain under Lebesgue measure ((2 pi)^d or 2^d).
    double lebesgue_volume() const;

private:
    Domain domain_;
    std::vector<int> shape_;
    Eigen::MatrixXd points_;
    Eigen::VectorXd weights_;
};

} // namespace mzkit
