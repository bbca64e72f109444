#include "mzkit/pointset.hpp"

#include "mzkit/errors.hpp"
#include "mzkit/rng.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numeric>
#include <sstream>

namespace mzkit {

double PointSet::weight_sum() const {
    return std::accumulate(weights.begin(), weights.end(), 0.0);
}

Eigen::MatrixXd PointSet::coordinates(const GriddedSpace& space) const {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(indices.size()), space.dim());
    for (std::size_t j = 0; j < indices.size(); ++j)
        out.row(static_cast<Eigen::Index>(j)) = space.points().row(indices[j]);
    return out;
}

void PointSet::validate(const GriddedSpace& space) const {
    if (indices.empty()) throw ArgumentError("point set is empty");
    if (indices.size() != weights.size()) throw ArgumentError("point set weights do not match points");
    for (auto i : indices)
        if (i < 0 || i >= space.size()) throw ArgumentError("point index outside the grid");
    for (double w : weights)
        if (!(w >= 0.0)) throw ArgumentError("point weights must be nonnegative");
}

Eigen::VectorXd cell_weights(const PointSet& p, Eigen::Index grid_size) {
    Eigen::VectorXd cw = Eigen::VectorXd::Zero(grid_size);
    for (std::size_t j = 0; j < p.indices.size(); ++j) cw(p.indices[j]) += p.weights[j];
    return cw;
}

namespace {

PointSet draw(const Eigen::VectorXd& probs, int m, std::uint64_t seed) {
    std::vector<double> p(probs.data(), probs.data() + probs.size());
    std::discrete_distribution<Eigen::Index> dist(p.begin(), p.end());
    Rng rng(seed);
    PointSet out;
    out.indices.reserve(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) out.indices.push_back(dist(rng));
    out.provenance.seed = seed;
    return out;
}

} // namespace

PointSet sample_iid(const GriddedSpace& space, int m, std::uint64_t seed) {
    if (m < 1) throw ArgumentError("sample size m must be >= 1");
    if (!(space.weights().sum() > 0.0)) throw ArgumentError("grid measure has zero mass");
    PointSet p = draw(space.weights(), m, seed);
    p.weights.assign(static_cast<std::size_t>(m), 1.0 / m);
    p.provenance.method = "iid";
    p.provenance.params["m"] = m;
    p.weight_bound = 1.0;
    return p;
}

PointSet sample_christoffel(const Subspace& s, int m, std::uint64_t seed, bool weighted) {
    if (m < 1) throw ArgumentError("sample size m must be >= 1");
    const double n = static_cast<double>(s.dim());
    const Eigen::VectorXd w2 = s.basis().rowwise().squaredNorm();
    // density U = w^2 / N; cells with U = 0 get probability 0
    const Eigen::VectorXd probs = s.space().weights().cwiseProduct(w2) / n;
    if (!(probs.sum() > 0.0)) throw ArgumentError("Christoffel density vanishes on the grid");
    PointSet p = draw(probs, m, seed);
    p.weights.resize(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        const double wj = w2(p.indices[static_cast<std::size_t>(j)]);
        p.weights[static_cast<std::size_t>(j)] = weighted ? n / (m * wj) : 1.0 / m;
    }
    p.provenance.method = weighted ? "christoffel" : "christoffel_unweighted";
    p.provenance.params["m"] = m;
    return p;
}

double bss_ratio_bound(double b) {
    if (!(b > 1.0)) throw ArgumentError("BSS oversampling factor b must exceed 1");
    const double r = std::sqrt(b);
    return (b + 1.0 + 2.0 * r) / (b + 1.0 - 2.0 * r);
}

PointSet bss_select(const Subspace& s, double b) {
    if (!(b > 1.0)) throw ArgumentError("BSS oversampling factor b must exceed 1");
    const Eigen::Index n = s.dim();
    const Eigen::Index g = s.grid_size();
    const double nd = static_cast<double>(n);
    const double rd = std::sqrt(b);

    // v_i = sqrt(mu_i) u(x^i), so sum_i v_i v_i^T = I on an orthonormal basis
    const Eigen::MatrixXd v =
        (s.basis().array().colwise() * s.space().weights().array().sqrt()).matrix().transpose();
    const Eigen::VectorXd vnorm2 = v.colwise().squaredNorm().transpose();

    const double delta_l = 1.0;
    const double eps_l = 1.0 / rd;
    const double delta_u = (rd + 1.0) / (rd - 1.0);
    const double eps_u = (rd - 1.0) / (b + rd);
    double lower = -nd / eps_l;
    double upper = nd / eps_u;
    const auto steps = static_cast<long>(std::ceil(b * nd - 1e-9));

    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd s_weights = Eigen::VectorXd::Zero(g);

    for (long step = 0; step < steps; ++step) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
        const Eigen::VectorXd alpha = es.eigenvalues();
        const double un = upper + delta_u;
        const double ln = lower + delta_l;
        const Eigen::ArrayXd inv_u = (un - alpha.array()).inverse();
        const Eigen::ArrayXd inv_l = (alpha.array() - ln).inverse();
        const double phi_u_drop = ((upper - alpha.array()).inverse() - inv_u).sum();
        const double phi_l_rise = (inv_l - (alpha.array() - lower).inverse()).sum();
        const Eigen::MatrixXd p2 = (es.eigenvectors().transpose() * v).array().square().matrix();
        const Eigen::VectorXd u2 = p2.transpose() * inv_u.square().matrix();
        const Eigen::VectorXd u1 = p2.transpose() * inv_u.matrix();
        const Eigen::VectorXd l2 = p2.transpose() * inv_l.square().matrix();
        const Eigen::VectorXd l1 = p2.transpose() * inv_l.matrix();

        Eigen::Index best = -1;
        double best_ratio = -1.0;
        double best_u = 0.0, best_lv = 0.0;
        for (Eigen::Index i = 0; i < g; ++i) {
            if (!(vnorm2(i) > 0.0)) continue;
            const double uv = u2(i) / phi_u_drop + u1(i);
            const double lv = l2(i) / phi_l_rise - l1(i);
            if (!(uv > 0.0)) continue;
            const double ratio = lv / uv;
            if (ratio > best_ratio * (1.0 + 1e-13)) {
                best_ratio = ratio;
                best = i;
                best_u = uv;
                best_lv = lv;
            }
        }
        if (best < 0 || best_ratio < 1.0 - 1e-9) {
            std::ostringstream os;
            os << "BSS barrier step " << step << " found no admissible vector (best L/U = "
               << best_ratio << ")";
            throw NumericalError(os.str());
        }
        // any t with U <= 1/t <= L keeps both barriers; take the midpoint of 1/t
        const double t = 2.0 / (best_u + std::max(best_lv, best_u));
        a += t * v.col(best) * v.col(best).transpose();
        s_weights(best) += t;
        upper = un;
        lower = ln;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> fin(a);
    const double lmin = fin.eigenvalues().minCoeff();
    const double lmax = fin.eigenvalues().maxCoeff();
    if (!(lmin > 0.0)) {
        std::ostringstream os;
        os << "BSS frame is singular after " << steps << " steps (lambda_min " << lmin << ")";
        throw NumericalError(os.str());
    }

    PointSet p;
    for (Eigen::Index i = 0; i < g; ++i) {
        if (s_weights(i) > 0.0) {
            p.indices.push_back(i);
            p.weights.push_back(s_weights(i) * s.space().weights()(i) / lmin);
        }
    }
    p.provenance.method = "bss";
    p.provenance.params["b"] = b;
    p.provenance.params["kappa_bound"] = bss_ratio_bound(b);
    p.provenance.params["certified_ratio"] = lmax / lmin;
    p.provenance.params["steps"] = static_cast<double>(steps);
    // with 1 in the span, f = 1 gives sum of weights <= lambda_max
    const Eigen::VectorXd one_coeffs = s.basis().transpose() * s.space().weights();
    if (std::abs(1.0 - one_coeffs.squaredNorm()) < 1e-10) p.weight_bound = lmax / lmin;
    return p;
}

Subspace augment_constant(const Subspace& s, const Tolerances& tol) {
    const Eigen::VectorXd w = s.space().weights();
    const Eigen::VectorXd coef = s.basis().transpose() * w;
    const Eigen::VectorXd resid = Eigen::VectorXd::Ones(s.grid_size()) - s.basis() * coef;
    if (w.dot(resid.cwiseAbs2()) < 1e-10) return s;
    Eigen::MatrixXd raw(s.grid_size(), s.dim() + 1);
    raw.leftCols(s.dim()) = s.basis();
    raw.col(s.dim()).setOnes();
    return orthonormalize(raw, s.space(), tol, s.label() + "+1", s.freqs());
}

PointSet equispaced_points(const GriddedSpace& space, int m, int offset) {
    if (space.domain() != Domain::Torus || space.dim() != 1)
        throw ArgumentError("equispaced points need a 1-D torus grid");
    if (m < 1) throw ArgumentError("sample size m must be >= 1");
    const Eigen::Index g = space.size();
    PointSet p;
    for (int j = 0; j < m; ++j) {
        const auto i = static_cast<Eigen::Index>(std::llround(static_cast<double>(j) * g / m));
        p.indices.push_back(((i + offset) % g + g) % g);
        p.weights.push_back(1.0 / m);
    }
    p.provenance.method = "equispaced";
    p.provenance.params["m"] = m;
    p.provenance.params["exact"] = g % m == 0 ? 1.0 : 0.0;
    p.weight_bound = 1.0;
    return p;
}

PointSet full_grid_points(const GriddedSpace& space) {
    PointSet p;
    for (Eigen::Index i = 0; i < space.size(); ++i) {
        p.indices.push_back(i);
        p.weights.push_back(space.weights()(i));
    }
    p.provenance.method = "full_grid";
    p.weight_bound = 1.0;
    return p;
}

} // namespace mzkit
