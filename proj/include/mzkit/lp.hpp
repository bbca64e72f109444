#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace mzkit {

/// Smallest right singular vector of `rows` when the rows do not span R^N
/// (relative singular-value cutoff `rel_tol`), normalized to unit length.
std::optional<Eigen::VectorXd> null_space_vector(const Eigen::MatrixXd& rows, double rel_tol = 1e-10);

/// Linear program over the symmetric polytope {c : |a_j . c| <= 1 for every row a_j}.
///
/// Solved by a primal simplex in inequality form: a vertex is N linearly
/// independent active constraints (row, sign). The polytope does not depend on
/// the objective, so each call to maximize() warm-starts from the previous
/// optimal vertex. The rows must have full column rank (bounded polytope).
class SymmetricPolytopeLp {
public:
    explicit SymmetricPolytopeLp(Eigen::MatrixXd rows, double feasibility_tol = 1e-9);

    struct Result {
        double value = 0.0;
        Eigen::VectorXd coeffs;
        /// Dual multipliers y >= 0 with objective = sum_i y_i sign_i a_{row_i}.
        Eigen::VectorXd dual;
        std::vector<Eigen::Index> active_rows;
        std::vector<int> active_signs;
        int iterations = 0;
    };

    Result maximize(const Eigen::VectorXd& objective);

    Eigen::Index num_rows() const noexcept { return rows_.rows(); }
    Eigen::Index num_vars() const noexcept { return rows_.cols(); }

private:
    void find_vertex(const Eigen::VectorXd& objective);
    Eigen::MatrixXd active_matrix() const;

    Eigen::MatrixXd rows_;
    Eigen::VectorXd row_norms_;
    double tol_;
    bool have_vertex_ = false;
    Eigen::VectorXd c_;
    std::vector<Eigen::Index> active_;
    std::vector<int> signs_;
};

} // namespace mzkit
