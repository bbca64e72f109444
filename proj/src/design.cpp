#include "mzkit/design.hpp"

#include "mzkit/errors.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <limits>

namespace mzkit {

namespace {

struct Variance {
    Eigen::VectorXd d;
    double logdet = 0.0;
};

Variance variance_function(const Eigen::MatrixXd& raw, const Eigen::VectorXd& w) {
    const Eigen::MatrixXd m = raw.transpose() * w.asDiagonal() * raw;
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success)
        throw DegeneracyError("design information matrix is singular", 0.0);
    Variance v;
    const Eigen::MatrixXd y = llt.matrixL().solve(raw.transpose());
    v.d = y.colwise().squaredNorm().transpose();
    const auto diag = llt.matrixL().toDenseMatrix().diagonal();
    for (Eigen::Index i = 0; i < diag.size(); ++i) v.logdet += 2.0 * std::log(diag(i));
    return v;
}

} // namespace

DesignMeasure kw_optimal_design(const Eigen::MatrixXd& raw, const GriddedSpace& space, double tol,
                                int max_iters) {
    if (raw.rows() != space.size()) throw ArgumentError("raw basis rows must match grid size");
    if (!(tol > 0.0)) throw ArgumentError("design tolerance must be positive");
    if (max_iters < 0) throw ArgumentError("max_iters must be nonnegative");
    const double n = static_cast<double>(raw.cols());

    Eigen::VectorXd w = space.weights();
    DesignMeasure best;
    best.g_value = std::numeric_limits<double>::infinity();
    std::vector<double> history;
    bool monotone = true;

    for (int it = 0;; ++it) {
        const Variance v = variance_function(raw, w);
        if (!history.empty() && v.logdet < history.back() - 1e-10 * (1.0 + std::abs(history.back())))
            monotone = false;
        history.push_back(v.logdet);
        const double g = v.d.maxCoeff();
        if (g < best.g_value) {
            best.g_value = g;
            best.weights = w;
            best.iterations = it;
        }
        if (g <= n * (1.0 + tol)) {
            best.converged = true;
            break;
        }
        if (it >= max_iters) break;
        w = w.cwiseProduct(v.d) / n;
        w /= w.sum();
    }
    best.logdet_history = std::move(history);
    best.objective_monotone = monotone;
    return best;
}

Subspace design_subspace(const Eigen::MatrixXd& raw, const GriddedSpace& space,
                         const DesignMeasure& design, const Tolerances& tol, std::string label,
                         std::optional<FrequencySet> freqs) {
    return orthonormalize(raw, space.with_weights(design.weights), tol, std::move(label),
                          std::move(freqs));
}

} // namespace mzkit
