#include "mzkit/grid.hpp"

#include "mzkit/errors.hpp"

#include <cmath>
#include <numbers>

namespace mzkit {

const char* to_string(Domain domain) {
    return domain == Domain::Torus ? "torus" : "box";
}

Domain domain_from_string(const std::string& name) {
    if (name == "torus") return Domain::Torus;
    if (name == "box") return Domain::Box;
    throw ArgumentError("unknown domain '" + name + "'");
}

GriddedSpace GriddedSpace::torus(int dim, int points_per_axis) {
    if (dim < 1) throw ArgumentError("grid dimension must be positive");
    return torus(std::vector<int>(dim, points_per_axis));
}

GriddedSpace GriddedSpace::torus(std::vector<int> shape) {
    Eigen::Index g = 1;
    for (int n : shape) g *= n;
    if (g < 1) throw ArgumentError("grid must have at least one point");
    return GriddedSpace(Domain::Torus, std::move(shape),
                        Eigen::VectorXd::Constant(g, 1.0 / static_cast<double>(g)));
}

GriddedSpace GriddedSpace::box(int dim, int points_per_axis) {
    if (dim < 1) throw ArgumentError("grid dimension must be positive");
    return box(std::vector<int>(dim, points_per_axis));
}

GriddedSpace GriddedSpace::box(std::vector<int> shape) {
    Eigen::Index g = 1;
    for (int n : shape) g *= n;
    if (g < 1) throw ArgumentError("grid must have at least one point");
    return GriddedSpace(Domain::Box, std::move(shape),
                        Eigen::VectorXd::Constant(g, 1.0 / static_cast<double>(g)));
}

GriddedSpace::GriddedSpace(Domain domain, std::vector<int> shape, Eigen::VectorXd weights)
    : domain_(domain), shape_(std::move(shape)), weights_(std::move(weights)) {
    if (shape_.empty()) throw ArgumentError("grid dimension must be positive");
    Eigen::Index g = 1;
    for (int n : shape_) {
        if (n < 1) throw ArgumentError("every grid axis needs at least one point");
        g *= n;
    }
    if (weights_.size() != g) throw ArgumentError("grid weights do not match grid size");
    if ((weights_.array() < 0.0).any()) throw ArgumentError("grid weights must be nonnegative");
    if (std::abs(weights_.sum() - 1.0) > 1e-12)
        throw ArgumentError("grid weights must sum to 1");

    const int d = dim();
    points_.resize(g, d);
    for (Eigen::Index i = 0; i < g; ++i) {
        const auto mi = multi_index(i);
        for (int a = 0; a < d; ++a) {
            const int n = shape_[a];
            if (domain_ == Domain::Torus) {
                points_(i, a) = 2.0 * std::numbers::pi * mi[a] / n;
            } else {
                points_(i, a) = n == 1 ? 0.0 : -1.0 + 2.0 * mi[a] / (n - 1);
            }
        }
    }
}

GriddedSpace GriddedSpace::with_weights(Eigen::VectorXd weights) const {
    return GriddedSpace(domain_, shape_, std::move(weights));
}

bool GriddedSpace::uniform() const {
    const double w0 = weights_(0);
    return ((weights_.array() - w0).abs() <= 1e-15).all();
}

std::vector<int> GriddedSpace::multi_index(Eigen::Index flat) const {
    std::vector<int> mi(shape_.size());
    for (std::size_t a = shape_.size(); a-- > 0;) {
        mi[a] = static_cast<int>(flat % shape_[a]);
        flat /= shape_[a];
    }
    return mi;
}

Eigen::Index GriddedSpace::flat_index(const std::vector<int>& multi) const {
    Eigen::Index flat = 0;
    for (std::size_t a = 0; a < shape_.size(); ++a) flat = flat * shape_[a] + multi[a];
    return flat;
}

Eigen::Index GriddedSpace::translate(Eigen::Index flat, const std::vector<int>& shift) const {
    if (domain_ != Domain::Torus) throw ArgumentError("grid translation is only defined on the torus");
    if (shift.size() != shape_.size()) throw ArgumentError("shift has wrong dimension");
    auto mi = multi_index(flat);
    for (std::size_t a = 0; a < shape_.size(); ++a) {
        const int n = shape_[a];
        mi[a] = ((mi[a] + shift[a]) % n + n) % n;
    }
    return flat_index(mi);
}

double GriddedSpace::lebesgue_volume() const {
    const double side = domain_ == Domain::Torus ? 2.0 * std::numbers::pi : 2.0;
    return std::pow(side, dim());
}

} // namespace mzkit
