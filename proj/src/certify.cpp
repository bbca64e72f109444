#include "mzkit/certify.hpp"

#include "mzkit/errors.hpp"
#include "mzkit/lp.hpp"
#include "mzkit/rng.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <sstream>

namespace mzkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_compatible(const Subspace& s, const PointSet& p) {
    p.validate(s.space());
}

Eigen::MatrixXd point_rows(const Subspace& s, const PointSet& p) {
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(p.size()), s.dim());
    for (std::size_t j = 0; j < p.size(); ++j)
        rows.row(static_cast<Eigen::Index>(j)) = s.basis().row(p.indices[j]);
    return rows;
}

} // namespace

MZReport certify_l2(const Subspace& s, const PointSet& p, const Tolerances& tol) {
    check_compatible(s, p);
    const Eigen::VectorXd cw = cell_weights(p, s.grid_size());
    const Eigen::MatrixXd f = s.basis().transpose() * cw.asDiagonal() * s.basis();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(f);
    if (es.info() != Eigen::Success) throw NumericalError("frame eigendecomposition failed");
    MZReport r;
    r.q = 2.0;
    r.m = p.size();
    r.method = "exact-eigen";
    r.tolerance = tol.eigen;
    r.resolution = s.grid_size();
    r.weight_sum = p.weight_sum();
    r.c2 = es.eigenvalues().maxCoeff();
    r.c1 = es.eigenvalues().minCoeff();
    if (r.c1 <= tol.eigen * std::max(r.c2, 1.0)) {
        r.c1 = 0.0;
        r.null_certificate = es.eigenvectors().col(0);
    }
    return r;
}

UniformReport certify_uniform(const Subspace& s, const PointSet& p, const Tolerances& tol) {
    check_compatible(s, p);
    UniformReport r;
    r.m = p.size();
    r.resolution = s.grid_size();
    r.tolerance = tol.lp_feasibility;
    const Eigen::MatrixXd rows = point_rows(s, p);
    if (auto nv = null_space_vector(rows, tol.eigen)) {
        r.d = kInf;
        r.null_certificate = *nv;
        r.coeffs = *nv;
        Eigen::VectorXd vals = s.evaluate(*nv).cwiseAbs();
        vals.maxCoeff(&r.attaining_index);
        return r;
    }
    SymmetricPolytopeLp lp(rows, tol.lp_feasibility);
    r.d = -kInf;
    for (Eigen::Index x = 0; x < s.grid_size(); ++x) {
        SymmetricPolytopeLp::Result res;
        try {
            res = lp.maximize(s.basis().row(x).transpose());
        } catch (const NumericalError& e) {
            std::ostringstream os;
            os << "uniform-norm LP failed at grid point " << x << ": " << e.what();
            throw NumericalError(os.str());
        }
        if (res.value > r.d) {
            r.d = res.value;
            r.attaining_index = x;
            r.coeffs = res.coeffs;
        }
    }
    return r;
}

double estimate_uniform_ratio(const Subspace& s, const PointSet& p, std::uint64_t seed,
                              const RatioAscentOptions& opts) {
    check_compatible(s, p);
    const Eigen::MatrixXd& u = s.basis();
    const Eigen::MatrixXd a = point_rows(s, p);
    const double pe = opts.smoothing_exponent;
    auto exact = [&](const Eigen::VectorXd& c) {
        const double den = (a * c).cwiseAbs().maxCoeff();
        return den > 0.0 ? (u * c).cwiseAbs().maxCoeff() / den : kInf;
    };
    // log of the smoothed ratio ||Uc||_p / ||Ac||_p (counting norms)
    auto smooth = [&](const Eigen::VectorXd& c, Eigen::VectorXd* grad) {
        const Eigen::VectorXd f = u * c, g = a * c;
        const double sf = f.cwiseAbs().maxCoeff(), sg = g.cwiseAbs().maxCoeff();
        const Eigen::ArrayXd ef = (f.array() / sf).abs().pow(pe);
        const Eigen::ArrayXd eg = (g.array() / sg).abs().pow(pe);
        const double nf = ef.sum(), ng = eg.sum();
        if (grad) {
            const Eigen::VectorXd df = u.transpose() *
                (ef / f.array().abs().max(1e-300) * f.array().sign()).matrix() / nf;
            const Eigen::VectorXd dg = a.transpose() *
                (eg / g.array().abs().max(1e-300) * g.array().sign()).matrix() / ng;
            *grad = df - dg;
        }
        return std::log(sf) - std::log(sg) + (std::log(nf) - std::log(ng)) / pe;
    };
    Rng rng(seed);
    std::normal_distribution<double> normal;
    double best = 0.0;
    for (int r = 0; r < opts.restarts; ++r) {
        Eigen::VectorXd c(s.dim());
        for (Eigen::Index k = 0; k < c.size(); ++k) c(k) = normal(rng);
        c.normalize();
        double val = smooth(c, nullptr);
        double step = 0.1;
        for (int it = 0; it < opts.iters; ++it) {
            Eigen::VectorXd g;
            smooth(c, &g);
            g -= g.dot(c) * c;
            const double gn = g.norm();
            if (gn < 1e-12) break;
            bool moved = false;
            while (step > 1e-12) {
                const Eigen::VectorXd t = (c + step * g / gn).normalized();
                const double tv = smooth(t, nullptr);
                if (tv > val) {
                    c = t;
                    val = tv;
                    step *= 1.5;
                    moved = true;
                    break;
                }
                step *= 0.5;
            }
            if (!moved) break;
        }
        best = std::max(best, exact(c));
    }
    return best;
}

namespace {

struct LqRatio {
    const Eigen::MatrixXd& u;
    Eigen::VectorXd cw;  // point weights per cell
    Eigen::VectorXd mu;  // grid measure
    double q;

    double value(const Eigen::VectorXd& c) const {
        const Eigen::ArrayXd f = (u * c).array().abs().pow(q);
        return (cw.array() * f).sum() / (mu.array() * f).sum();
    }

    Eigen::VectorXd gradient(const Eigen::VectorXd& c) const {
        const Eigen::VectorXd f = u * c;
        const Eigen::ArrayXd fq = f.array().abs().pow(q);
        const Eigen::ArrayXd fq1 = f.array().abs().pow(q - 1.0) * f.array().sign();
        const double num = (cw.array() * fq).sum();
        const double den = (mu.array() * fq).sum();
        const Eigen::VectorXd gnum = q * (u.transpose() * (cw.array() * fq1).matrix());
        const Eigen::VectorXd gden = q * (u.transpose() * (mu.array() * fq1).matrix());
        return (gnum - num / den * gden) / den;
    }
};

// sign = +1 ascends, -1 descends; returns the final ratio.
double refine(const LqRatio& r, Eigen::VectorXd c, double sign, const LqOptions& opts) {
    c.normalize();
    double val = r.value(c);
    double step = 0.25;
    for (int it = 0; it < opts.iters; ++it) {
        Eigen::VectorXd g = sign * r.gradient(c);
        g -= g.dot(c) * c;
        const double gn = g.norm();
        if (gn < opts.step_tol) break;
        bool moved = false;
        while (step > 1e-14) {
            const Eigen::VectorXd t = (c + step * g / gn).normalized();
            const double tv = r.value(t);
            if (sign * (tv - val) > 0.0) {
                c = t;
                val = tv;
                step *= 2.0;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;
    }
    return val;
}

} // namespace

MZReport certify_lq(const Subspace& s, const PointSet& p, double q, int trials, std::uint64_t seed,
                    const LqOptions& opts) {
    if (!(q >= 1.0) || std::isinf(q)) throw ArgumentError("exponent q must lie in [1, inf)");
    if (trials < 1) throw ArgumentError("trials must be >= 1");
    check_compatible(s, p);
    const LqRatio ratio{s.basis(), cell_weights(p, s.grid_size()), s.space().weights(), q};

    std::vector<Eigen::VectorXd> starts;
    Rng rng(seed);
    std::normal_distribution<double> normal;
    for (int t = 0; t < trials; ++t) {
        Eigen::VectorXd c(s.dim());
        for (Eigen::Index k = 0; k < c.size(); ++k) c(k) = normal(rng);
        starts.push_back(c);
    }
    if (opts.eigen_seeds) {
        const Eigen::MatrixXd f = s.basis().transpose() * ratio.cw.asDiagonal() * s.basis();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(f);
        starts.push_back(es.eigenvectors().col(0));
        starts.push_back(es.eigenvectors().col(s.dim() - 1));
    }
    MZReport r;
    r.q = q;
    r.m = p.size();
    r.method = "empirical";
    r.tolerance = opts.step_tol;
    r.resolution = s.grid_size();
    r.weight_sum = p.weight_sum();
    r.c1 = kInf;
    r.c2 = -kInf;
    for (const auto& c : starts) {
        r.c2 = std::max(r.c2, refine(ratio, c, +1.0, opts));
        r.c1 = std::min(r.c1, refine(ratio, c, -1.0, opts));
    }
    return r;
}

double mc_success_probability(const Subspace& s, double q, int m, int trials, std::uint64_t seed,
                              int directions, const LqOptions& opts) {
    if (m < 1 || trials < 1) throw ArgumentError("m and trials must be >= 1");
    int ok = 0;
    for (int t = 0; t < trials; ++t) {
        const auto tr = static_cast<std::uint64_t>(t);
        const PointSet p = sample_iid(s.space(), m, derive_seed(seed, tr));
        const MZReport rep = certify_lq(s, p, q, directions, derive_seed(~seed, tr), opts);
        if (rep.c1 >= 0.5 && rep.c2 <= 1.5) ++ok;
    }
    return static_cast<double>(ok) / trials;
}

double nikolskii_chain_bound(double h, const MZReport& l2) {
    if (!(l2.c1 > 0.0)) return kInf;
    return h * std::sqrt(l2.weight_sum / l2.c1);
}

} // namespace mzkit
