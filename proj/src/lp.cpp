#include "mzkit/lp.hpp"

#include "mzkit/errors.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <sstream>

namespace mzkit {

std::optional<Eigen::VectorXd> null_space_vector(const Eigen::MatrixXd& rows, double rel_tol) {
    const Eigen::Index n = rows.cols();
    if (rows.rows() == 0) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
        v(0) = 1.0;
        return v;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows, Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    if (sv.size() < n) return Eigen::VectorXd(svd.matrixV().col(n - 1));
    if (sv(n - 1) <= rel_tol * smax) return Eigen::VectorXd(svd.matrixV().col(n - 1));
    return std::nullopt;
}

SymmetricPolytopeLp::SymmetricPolytopeLp(Eigen::MatrixXd rows, double feasibility_tol)
    : rows_(std::move(rows)), tol_(feasibility_tol) {
    if (rows_.cols() < 1) throw ArgumentError("LP needs at least one variable");
    if (rows_.rows() < rows_.cols()) throw ArgumentError("LP polytope is unbounded (too few rows)");
    row_norms_ = rows_.rowwise().norm();
}

Eigen::MatrixXd SymmetricPolytopeLp::active_matrix() const {
    const Eigen::Index n = rows_.cols();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(active_.size()), n);
    for (std::size_t k = 0; k < active_.size(); ++k)
        m.row(static_cast<Eigen::Index>(k)) = signs_[k] * rows_.row(active_[k]);
    return m;
}

void SymmetricPolytopeLp::find_vertex(const Eigen::VectorXd& objective) {
    const Eigen::Index n = rows_.cols();
    const Eigen::Index m = rows_.rows();
    c_ = Eigen::VectorXd::Zero(n);
    active_.clear();
    signs_.clear();
    std::vector<char> is_active(static_cast<std::size_t>(m), 0);

    for (Eigen::Index step = 0; step < n; ++step) {
        // null space of the active rows
        Eigen::MatrixXd z;
        if (active_.empty()) {
            z = Eigen::MatrixXd::Identity(n, n);
        } else {
            const Eigen::MatrixXd at = active_matrix().transpose();
            Eigen::HouseholderQR<Eigen::MatrixXd> qr(at);
            const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
            z = q.rightCols(n - static_cast<Eigen::Index>(active_.size()));
        }
        Eigen::VectorXd d = z * (z.transpose() * objective);
        if (d.norm() <= 1e-12 * std::max(1.0, objective.norm())) d = z.col(0);
        d.normalize();

        double best_t = std::numeric_limits<double>::infinity();
        Eigen::Index best_row = -1;
        int best_sign = 0;
        const Eigen::VectorXd ad = rows_ * d;
        const Eigen::VectorXd ac = rows_ * c_;
        for (Eigen::Index j = 0; j < m; ++j) {
            if (is_active[static_cast<std::size_t>(j)]) continue;
            if (std::abs(ad(j)) <= 1e-12 * row_norms_(j)) continue;
            const int s = ad(j) > 0 ? 1 : -1;
            const double slack = std::max(0.0, 1.0 - s * ac(j));
            const double t = slack / std::abs(ad(j));
            if (t < best_t - 1e-15) {
                best_t = t;
                best_row = j;
                best_sign = s;
            }
        }
        if (best_row < 0) throw NumericalError("LP polytope is unbounded along a search direction");
        c_ += best_t * d;
        active_.push_back(best_row);
        signs_.push_back(best_sign);
        is_active[static_cast<std::size_t>(best_row)] = 1;
    }
    have_vertex_ = true;
}

SymmetricPolytopeLp::Result SymmetricPolytopeLp::maximize(const Eigen::VectorXd& objective) {
    const Eigen::Index n = rows_.cols();
    const Eigen::Index m = rows_.rows();
    if (objective.size() != n) throw ArgumentError("LP objective has wrong dimension");
    if (!have_vertex_) find_vertex(objective);

    const double opt_tol = 1e-12 * std::max(1.0, objective.norm());
    const int max_iters = static_cast<int>(50 * (m + n) + 1000);
    int degenerate_run = 0;
    int refreshes = 0;
    Result res;

    for (int it = 0;; ++it) {
        if (it > max_iters) {
            std::ostringstream os;
            os << "simplex exceeded " << max_iters << " iterations";
            throw NumericalError(os.str());
        }
        const Eigen::MatrixXd a = active_matrix();
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
        const double rcond = lu.rcond();
        if (!(rcond > 1e-13)) {
            if (++refreshes > 3) throw NumericalError("simplex basis became singular");
            find_vertex(objective);
            continue;
        }
        const Eigen::MatrixXd inv = lu.inverse();
        c_ = inv * Eigen::VectorXd::Ones(n);
        const Eigen::VectorXd y = inv.transpose() * objective;

        Eigen::Index leave = -1;
        const bool bland = degenerate_run > 20;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (y(i) >= -opt_tol) continue;
            if (leave < 0) {
                leave = i;
            } else if (bland) {
                if (active_[static_cast<std::size_t>(i)] < active_[static_cast<std::size_t>(leave)])
                    leave = i;
            } else if (y(i) < y(leave)) {
                leave = i;
            }
        }
        if (leave < 0) {
            const double viol = (rows_ * c_).cwiseAbs().maxCoeff() - 1.0;
            if (viol > tol_) {
                std::ostringstream os;
                os << "simplex vertex violates feasibility by " << viol;
                throw NumericalError(os.str());
            }
            res.value = objective.dot(c_);
            res.coeffs = c_;
            res.dual = y.cwiseMax(0.0);
            res.active_rows = active_;
            res.active_signs = signs_;
            res.iterations = it;
            return res;
        }

        const Eigen::VectorXd d = -inv.col(leave);
        const Eigen::VectorXd ad = rows_ * d;
        const Eigen::VectorXd ac = rows_ * c_;
        const double dn = d.norm();
        double best_t = std::numeric_limits<double>::infinity();
        Eigen::Index best_row = -1;
        int best_sign = 0;
        for (Eigen::Index j = 0; j < m; ++j) {
            if (std::abs(ad(j)) <= 1e-12 * row_norms_(j) * dn) continue;
            const int s = ad(j) > 0 ? 1 : -1;
            const double slack = std::max(0.0, 1.0 - s * ac(j));
            const double t = slack / std::abs(ad(j));
            if (best_row < 0 || t < best_t - 1e-14 * std::max(1.0, best_t)) {
                best_t = t;
                best_row = j;
                best_sign = s;
            }
        }
        if (best_row < 0) throw NumericalError("LP is unbounded; rows do not have full rank");
        degenerate_run = best_t <= 1e-13 ? degenerate_run + 1 : 0;
        active_[static_cast<std::size_t>(leave)] = best_row;
        signs_[static_cast<std::size_t>(leave)] = best_sign;
    }
}

} // namespace mzkit
