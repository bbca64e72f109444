#include "mzkit/subspace.hpp"

#include "mzkit/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

namespace mzkit {

Subspace::Subspace(GriddedSpace space, Eigen::MatrixXd basis, std::string label,
                   std::optional<FrequencySet> freqs)
    : space_(std::move(space)), basis_(std::move(basis)), label_(std::move(label)),
      freqs_(std::move(freqs)) {
    if (basis_.rows() != space_.size()) throw ArgumentError("basis rows must match grid size");
    if (basis_.cols() < 1) throw ArgumentError("subspace needs at least one basis function");
}

Eigen::MatrixXd Subspace::gram() const {
    return basis_.transpose() * space_.weights().asDiagonal() * basis_;
}

double Subspace::orthonormality_error() const {
    const Eigen::MatrixXd g = gram();
    return (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

bool Subspace::translation_invariant() const {
    return freqs_.has_value() && space_.domain() == Domain::Torus && space_.uniform();
}

namespace {

// Canonical representative of {k, -k}: first nonzero coordinate positive.
bool canonical(const Frequency& k) {
    for (long v : k) {
        if (v != 0) return v > 0;
    }
    return false;
}

bool is_zero(const Frequency& k) {
    return std::all_of(k.begin(), k.end(), [](long v) { return v == 0; });
}

} // namespace

Eigen::MatrixXd trig_raw_basis(const FrequencySet& freqs, const GriddedSpace& space) {
    if (space.domain() != Domain::Torus) throw ArgumentError("trig subspaces live on the torus");
    if (space.dim() != freqs.dim()) throw ArgumentError("frequency and grid dimensions differ");

    bool has_zero = false;
    std::vector<Frequency> reps;
    for (const auto& k : freqs.freqs()) {
        if (is_zero(k)) {
            has_zero = true;
            continue;
        }
        Frequency r(k);
        if (!canonical(r))
            for (auto& v : r) v = -v;
        reps.push_back(std::move(r));
    }
    std::sort(reps.begin(), reps.end());
    reps.erase(std::unique(reps.begin(), reps.end()), reps.end());

    const Eigen::Index g = space.size();
    const Eigen::Index n = (has_zero ? 1 : 0) + 2 * static_cast<Eigen::Index>(reps.size());
    Eigen::MatrixXd raw(g, n);
    const Eigen::MatrixXd& pts = space.points();
    Eigen::Index col = 0;
    if (has_zero) raw.col(col++).setOnes();
    for (const auto& r : reps) {
        Eigen::VectorXd phase = Eigen::VectorXd::Zero(g);
        for (int a = 0; a < space.dim(); ++a) phase += static_cast<double>(r[a]) * pts.col(a);
        raw.col(col++) = std::numbers::sqrt2 * phase.array().cos();
        raw.col(col++) = std::numbers::sqrt2 * phase.array().sin();
    }
    return raw;
}

Subspace build_trig_subspace(const FrequencySet& freqs, const GriddedSpace& space,
                             const Tolerances& tol) {
    if (space.domain() != Domain::Torus) throw ArgumentError("trig subspaces live on the torus");
    if (space.dim() != freqs.dim()) throw ArgumentError("frequency and grid dimensions differ");
    for (int a = 0; a < space.dim(); ++a) {
        const long need = 2 * freqs.max_abs(a) + 2;
        if (space.shape()[a] < need) {
            std::ostringstream os;
            os << "grid axis " << a << " has " << space.shape()[a] << " points, need at least "
               << need << " to resolve the frequency set";
            throw ResolutionError(os.str());
        }
    }
    const Eigen::MatrixXd raw = trig_raw_basis(freqs, space);
    const Eigen::MatrixXd g = raw.transpose() * space.weights().asDiagonal() * raw;
    const double err = (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
    if (err > tol.orthonormality) {
        std::ostringstream os;
        os << "trig basis is not grid-orthonormal (max Gram error " << err << ")";
        throw ResolutionError(os.str());
    }
    return orthonormalize(raw, space, tol, "trig:" + freqs.generator(), freqs);
}

namespace {

std::vector<std::vector<int>> total_degree_exponents(int dim, int degree) {
    std::vector<std::vector<int>> out;
    std::vector<int> e(dim, 0);
    // graded order: total degree first, then lexicographic
    for (int total = 0; total <= degree; ++total) {
        std::function<void(int, int)> rec = [&](int axis, int left) {
            if (axis == dim - 1) {
                e[axis] = left;
                out.push_back(e);
                return;
            }
            for (int v = left; v >= 0; --v) {
                e[axis] = v;
                rec(axis + 1, left - v);
            }
        };
        rec(0, total);
    }
    return out;
}

Eigen::MatrixXd legendre_table(const Eigen::VectorXd& x, int degree) {
    Eigen::MatrixXd p(x.size(), degree + 1);
    p.col(0).setOnes();
    if (degree >= 1) p.col(1) = x;
    for (int n = 1; n < degree; ++n) {
        p.col(n + 1) = ((2.0 * n + 1.0) * x.cwiseProduct(p.col(n)) - n * p.col(n - 1)) / (n + 1.0);
    }
    return p;
}

} // namespace

Eigen::MatrixXd legendre_raw_basis(int degree, const GriddedSpace& space) {
    if (space.domain() != Domain::Box) throw ArgumentError("polynomial subspaces live on the box");
    if (degree < 0) throw ArgumentError("polynomial degree must be nonnegative");
    const auto exps = total_degree_exponents(space.dim(), degree);
    std::vector<Eigen::MatrixXd> tables;
    for (int a = 0; a < space.dim(); ++a) tables.push_back(legendre_table(space.points().col(a), degree));
    Eigen::MatrixXd raw(space.size(), static_cast<Eigen::Index>(exps.size()));
    for (std::size_t c = 0; c < exps.size(); ++c) {
        Eigen::VectorXd col = Eigen::VectorXd::Ones(space.size());
        for (int a = 0; a < space.dim(); ++a) col = col.cwiseProduct(tables[a].col(exps[c][a]));
        raw.col(static_cast<Eigen::Index>(c)) = col;
    }
    return raw;
}

Eigen::MatrixXd monomial_raw_basis(int degree, const GriddedSpace& space) {
    if (space.domain() != Domain::Box) throw ArgumentError("polynomial subspaces live on the box");
    if (degree < 0) throw ArgumentError("polynomial degree must be nonnegative");
    const auto exps = total_degree_exponents(space.dim(), degree);
    Eigen::MatrixXd raw(space.size(), static_cast<Eigen::Index>(exps.size()));
    for (std::size_t c = 0; c < exps.size(); ++c) {
        Eigen::VectorXd col = Eigen::VectorXd::Ones(space.size());
        for (int a = 0; a < space.dim(); ++a)
            col = col.cwiseProduct(space.points().col(a).array().pow(exps[c][a]).matrix());
        raw.col(static_cast<Eigen::Index>(c)) = col;
    }
    return raw;
}

Subspace build_poly_subspace(int degree, const GriddedSpace& space, const Tolerances& tol) {
    return orthonormalize(legendre_raw_basis(degree, space), space, tol,
                          "poly:" + std::to_string(degree));
}

namespace {

Eigen::MatrixXd symmetric_step(const Eigen::MatrixXd& raw, const Eigen::VectorXd& w,
                               double min_eig) {
    const Eigen::MatrixXd g = raw.transpose() * w.asDiagonal() * raw;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    if (es.info() != Eigen::Success) throw NumericalError("Gram eigendecomposition failed");
    const double lmin = es.eigenvalues().minCoeff();
    if (!(lmin > min_eig)) {
        std::ostringstream os;
        os << "basis is rank deficient on the grid: smallest Gram eigenvalue " << lmin
           << " <= " << min_eig;
        throw DegeneracyError(os.str(), lmin);
    }
    const Eigen::MatrixXd inv_sqrt = es.eigenvectors() *
                                     es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                                     es.eigenvectors().transpose();
    return raw * inv_sqrt;
}

} // namespace

Subspace orthonormalize(const Eigen::MatrixXd& raw, const GriddedSpace& space, const Tolerances& tol,
                        std::string label, std::optional<FrequencySet> freqs) {
    if (raw.rows() != space.size()) throw ArgumentError("raw basis rows must match grid size");
    if (raw.cols() < 1) throw ArgumentError("raw basis has no columns");
    Eigen::MatrixXd u = symmetric_step(raw, space.weights(), tol.min_gram_eigenvalue);
    Subspace s(space, u, label, freqs);
    if (s.orthonormality_error() > tol.orthonormality) {
        // one refinement pass absorbs the rounding of an ill-conditioned Gram
        u = symmetric_step(u, space.weights(), tol.min_gram_eigenvalue);
        s = Subspace(space, std::move(u), std::move(label), std::move(freqs));
        if (s.orthonormality_error() > tol.orthonormality)
            throw NumericalError("orthonormalization did not reach the requested tolerance");
    }
    return s;
}

ChristoffelProfile christoffel(const Subspace& s) {
    ChristoffelProfile p;
    p.values = s.basis().rowwise().norm();
    p.h2inf = p.values.maxCoeff(&p.argmax);
    return p;
}

double grid_norm(const Eigen::VectorXd& values, const Eigen::VectorXd& weights, double q) {
    if (std::isinf(q)) return values.cwiseAbs().maxCoeff();
    if (q == 2.0) return std::sqrt(weights.dot(values.cwiseAbs2()));
    return std::pow(weights.dot(values.cwiseAbs().array().pow(q).matrix()), 1.0 / q);
}

namespace {

// sup |f(x)| / ||f||_q for fixed x by projected ascent on the coefficient sphere.
double point_nikolskii(const Subspace& s, Eigen::Index x, double q, const NikolskiiOptions& opts,
                       Eigen::VectorXd& best) {
    const Eigen::MatrixXd& u = s.basis();
    const Eigen::VectorXd& w = s.space().weights();
    const Eigen::VectorXd ux = u.row(x).transpose();
    auto ratio = [&](const Eigen::VectorXd& c) {
        return ux.dot(c) / grid_norm(u * c, w, q);
    };
    Eigen::VectorXd c = ux.normalized();
    double val = ratio(c);
    double step = 0.5;
    for (int it = 0; it < opts.max_iters; ++it) {
        const Eigen::VectorXd f = u * c;
        const double nq = grid_norm(f, w, q);
        const Eigen::VectorXd dn =
            u.transpose() * (w.array() * f.array().abs().pow(q - 1.0) * f.array().sign()).matrix() /
            std::pow(nq, q - 1.0);
        Eigen::VectorXd grad = ux / nq - ux.dot(c) / (nq * nq) * dn;
        grad -= grad.dot(c) * c; // tangent to the unit sphere
        const double gn = grad.norm();
        if (gn < opts.step_tol) break;
        bool moved = false;
        while (step > 1e-14) {
            Eigen::VectorXd trial = (c + step * grad / gn).normalized();
            const double tv = ratio(trial);
            if (tv > val) {
                c = trial;
                val = tv;
                step *= 2.0;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;
    }
    best = c / grid_norm(u * c, w, q);
    return val;
}

} // namespace

NikolskiiEstimate nikolskii_constant(const Subspace& s, double q, const NikolskiiOptions& opts) {
    if (!(q >= 1.0) || std::isinf(q)) throw ArgumentError("Nikol'skii exponent q must lie in [1, inf)");
    const ChristoffelProfile prof = christoffel(s);
    NikolskiiEstimate est;
    est.q = q;
    if (q == 2.0) {
        est.value = prof.h2inf;
        est.lower_bound = false;
        est.grid_index = prof.argmax;
        est.coeffs = s.basis().row(prof.argmax).transpose() / prof.h2inf;
        return est;
    }
    est.lower_bound = true;
    est.value = -1.0;
    // For q >= 2 the L_2 profile bounds the pointwise value from above, so
    // points are visited by decreasing w and pruned once w <= best.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(s.grid_size()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return prof.values(a) > prof.values(b);
    });
    if (s.translation_invariant()) order.resize(1);
    for (Eigen::Index x : order) {
        if (q > 2.0 && prof.values(x) <= est.value) break;
        if (prof.values(x) == 0.0) continue;
        Eigen::VectorXd c;
        const double v = point_nikolskii(s, x, q, opts, c);
        if (v > est.value) {
            est.value = v;
            est.grid_index = x;
            est.coeffs = c;
        }
    }
    return est;
}

double dirichlet_eval(const Subspace& s, Eigen::Index i, Eigen::Index j) {
    if (i < 0 || j < 0 || i >= s.grid_size() || j >= s.grid_size())
        throw ArgumentError("grid index out of range");
    return s.basis().row(i).dot(s.basis().row(j));
}

} // namespace mzkit
