#pragma once

#include "mzkit/frequency.hpp"
#include "mzkit/grid.hpp"
#include "mzkit/tolerances.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>

namespace mzkit {

/// N-dimensional real function space, stored as a grid-orthonormal basis.
class Subspace {
public:
    /// `basis` is G x N and is expected to be orthonormal in the grid measure.
    Subspace(GriddedSpace space, Eigen::MatrixXd basis, std::string label = {},
             std::optional<FrequencySet> freqs = std::nullopt);

    const GriddedSpace& space() const noexcept { return space_; }
    const Eigen::MatrixXd& basis() const noexcept { return basis_; }
    Eigen::Index dim() const noexcept { return basis_.cols(); }
    Eigen::Index grid_size() const noexcept { return basis_.rows(); }
    const std::string& label() const noexcept { return label_; }
    const std::optional<FrequencySet>& freqs() const noexcept { return freqs_; }

    /// Values of f = sum_k c_k u_k on the grid.
    Eigen::VectorXd evaluate(const Eigen::VectorXd& coeffs) const { return basis_ * coeffs; }

    /// Grid Gram matrix sum_i w_i u(x^i) u(x^i)^T.
    Eigen::MatrixXd gram() const;
    double orthonormality_error() const;

    /// Trig subspace on a uniform torus grid: closed under grid translations.
    bool translation_invariant() const;

private:
    GriddedSpace space_;
    Eigen::MatrixXd basis_;
    std::string label_;
    std::optional<FrequencySet> freqs_;
};

/// Raw real trig basis {1, sqrt2 cos<k,x>, sqrt2 sin<k,x>} for the +-k pairs of Q.
/// An asymmetric Q still contributes both cos and sin for each representative.
Eigen::MatrixXd trig_raw_basis(const FrequencySet& freqs, const GriddedSpace& space);

Subspace build_trig_subspace(const FrequencySet& freqs, const GriddedSpace& space,
                             const Tolerances& tol = {});

/// Tensor Legendre products of total degree <= degree on the box grid.
Eigen::MatrixXd legendre_raw_basis(int degree, const GriddedSpace& space);
/// Monomials x^alpha of total degree <= degree on the box grid.
Eigen::MatrixXd monomial_raw_basis(int degree, const GriddedSpace& space);

Subspace build_poly_subspace(int degree, const GriddedSpace& space, const Tolerances& tol = {});

/// Symmetric (Gram^{-1/2}) orthonormalization with respect to the grid weights.
/// Throws DegeneracyError when the smallest Gram eigenvalue is below the cutoff.
Subspace orthonormalize(const Eigen::MatrixXd& raw, const GriddedSpace& space,
                        const Tolerances& tol = {}, std::string label = {},
                        std::optional<FrequencySet> freqs = std::nullopt);

struct ChristoffelProfile {
    Eigen::VectorXd values; ///< w(x^i) = |u(x^i)|
    double h2inf = 0.0;     ///< max_i w(x^i)
    Eigen::Index argmax = 0;
};

ChristoffelProfile christoffel(const Subspace& s);

struct NikolskiiEstimate {
    double q = 2.0;
    double value = 0.0;
    bool lower_bound = false; ///< true unless q == 2
    Eigen::Index grid_index = 0;
    Eigen::VectorXd coeffs;   ///< extremal coefficient vector, unit grid L_q norm
};

struct NikolskiiOptions {
    int max_iters = 200;
    double step_tol = 1e-12;
};

/// Estimate of the best H in ||f||_inf <= H ||f||_q over the subspace.
NikolskiiEstimate nikolskii_constant(const Subspace& s, double q, const NikolskiiOptions& opts = {});

/// Reproducing kernel D(x^i, x^j) = sum_k u_k(x^i) u_k(x^j).
double dirichlet_eval(const Subspace& s, Eigen::Index i, Eigen::Index j);

/// Grid L_q norm of a vector of grid values (q = inf gives the max norm).
double grid_norm(const Eigen::VectorXd& values, const Eigen::VectorXd& weights, double q);

} // namespace mzkit
