#include "mzkit/kernels.hpp"

#include "mzkit/errors.hpp"
#include "mzkit/rng.hpp"
#include "mzkit/sample_size.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace mzkit {

DirichletL1 dirichlet_l1(const Subspace& s) {
    const Eigen::MatrixXd& u = s.basis();
    const Eigen::VectorXd& w = s.space().weights();
    DirichletL1 out;
    out.per_point.resize(s.grid_size());
    for (Eigen::Index x = 0; x < s.grid_size(); ++x) {
        const Eigen::VectorXd row = u * u.row(x).transpose();
        out.per_point(x) = w.dot(row.cwiseAbs());
    }
    out.max = out.per_point.maxCoeff(&out.argmax);
    return out;
}

double VpRecord::interpolation_error() const {
    double err = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (interpolated.contains(support.freqs()[i]))
            err = std::max(err, std::abs(coeffs[i] - 1.0));
    }
    return err;
}

namespace {

using cd = std::complex<double>;

Eigen::MatrixXcd phase_matrix(const FrequencySet& support, const GriddedSpace& torus) {
    const Eigen::Index g = torus.size();
    Eigen::MatrixXcd e(g, static_cast<Eigen::Index>(support.size()));
    for (std::size_t c = 0; c < support.size(); ++c) {
        const auto& k = support.freqs()[c];
        for (Eigen::Index i = 0; i < g; ++i) {
            double ph = 0.0;
            for (int a = 0; a < torus.dim(); ++a) ph += static_cast<double>(k[a]) * torus.points()(i, a);
            e(i, static_cast<Eigen::Index>(c)) = std::polar(1.0, ph);
        }
    }
    return e;
}

Eigen::VectorXcd to_vec(const std::vector<cd>& c) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(c.size()));
    for (std::size_t i = 0; i < c.size(); ++i) v(static_cast<Eigen::Index>(i)) = c[i];
    return v;
}

void check_subset(const FrequencySet& q, const FrequencySet& support) {
    if (q.dim() != support.dim()) throw ArgumentError("frequency sets have different dimensions");
    for (const auto& k : q.freqs())
        if (!support.contains(k)) throw ArgumentError("interpolated frequencies must lie in the support");
}

// ||D_Q - g||_1 where g = D_Q - V is supported off Q; throws when g-hat does not vanish on Q.
void fill_sigma(VpRecord& rec, const Eigen::MatrixXcd& e, const Eigen::VectorXd& w) {
    Eigen::VectorXcd dq = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(rec.support.size()));
    Eigen::VectorXcd g(dq.size());
    std::size_t terms = 0;
    for (std::size_t i = 0; i < rec.support.size(); ++i) {
        const bool in_q = rec.interpolated.contains(rec.support.freqs()[i]);
        dq(static_cast<Eigen::Index>(i)) = in_q ? 1.0 : 0.0;
        g(static_cast<Eigen::Index>(i)) = (in_q ? 1.0 : 0.0) - rec.coeffs[i];
        if (in_q) {
            if (std::abs(g(static_cast<Eigen::Index>(i))) > 1e-8)
                throw NumericalError("kernel does not interpolate 1 on the frequency set");
        } else if (std::abs(rec.coeffs[i]) > 0.0) {
            ++terms;
        }
    }
    const Eigen::VectorXcd diff = e * (dq - g);
    rec.sigma_bound = w.dot(diff.cwiseAbs());
    rec.sigma_terms = terms;
}

std::vector<int> torus_shape(int dim, int points) { return std::vector<int>(dim, points); }

} // namespace

double trig_l1_norm(const FrequencySet& support, const std::vector<cd>& coeffs, const GriddedSpace& torus) {
    if (coeffs.size() != support.size()) throw ArgumentError("coefficient count does not match support");
    const Eigen::VectorXcd v = phase_matrix(support, torus) * to_vec(coeffs);
    return torus.weights().dot(v.cwiseAbs());
}

VpRecord vp_classical(int n, int grid_points) {
    if (n < 1) throw ArgumentError("de la Vallee Poussin order must be >= 1");
    if (grid_points < 8 * n + 2) throw ResolutionError("grid too coarse for the kernel support");
    const FrequencySet q = FrequencySet::box({n});
    const FrequencySet support = FrequencySet::box({2L * n});
    VpRecord rec{q, support, {}, support.size(), 0.0, {grid_points}, 0.0, 0, {}, 0};
    for (const auto& k : support.freqs()) {
        const long a = std::labs(k[0]);
        rec.coeffs.emplace_back(a <= n ? 1.0 : static_cast<double>(2 * n + 1 - a) / (n + 1), 0.0);
    }
    const GriddedSpace torus = GriddedSpace::torus(1, grid_points);
    const Eigen::MatrixXcd e = phase_matrix(support, torus);
    rec.l1_norm = torus.weights().dot((e * to_vec(rec.coeffs)).cwiseAbs());
    fill_sigma(rec, e, torus.weights());
    return rec;
}

VpRecord vp_search(const FrequencySet& q, const FrequencySet& support, int iters, std::uint64_t seed,
                   const VpSearchOptions& opts) {
    check_subset(q, support);
    if (iters < 0) throw ArgumentError("iteration budget must be nonnegative");
    for (int a = 0; a < support.dim(); ++a)
        if (opts.grid_points < 2 * support.max_abs(a) + 2)
            throw ResolutionError("grid too coarse for the kernel support");
    const GriddedSpace torus = GriddedSpace::torus(torus_shape(support.dim(), opts.grid_points));
    const Eigen::MatrixXcd e = phase_matrix(support, torus);
    const Eigen::VectorXd& w = torus.weights();
    const auto ns = static_cast<Eigen::Index>(support.size());

    std::vector<char> is_free(support.size());
    std::vector<long> dist(support.size(), 0);
    long rmax = 0;
    for (std::size_t i = 0; i < support.size(); ++i) {
        const auto& k = support.freqs()[i];
        is_free[i] = !q.contains(k);
        if (!is_free[i]) continue;
        long best = std::numeric_limits<long>::max();
        for (const auto& p : q.freqs()) {
            long dd = 0;
            for (int a = 0; a < q.dim(); ++a) dd = std::max(dd, std::labs(k[a] - p[a]));
            best = std::min(best, dd);
        }
        dist[i] = best;
        rmax = std::max(rmax, best);
    }

    auto objective = [&](const Eigen::VectorXcd& c) { return w.dot((e * c).cwiseAbs()); };

    Eigen::VectorXcd start(ns);
    for (Eigen::Index i = 0; i < ns; ++i) {
        const auto si = static_cast<std::size_t>(i);
        start(i) = is_free[si] ? cd(std::max(0.0, 1.0 - static_cast<double>(dist[si]) / (rmax + 1.0)), 0.0)
                               : cd(1.0, 0.0);
    }

    Eigen::VectorXcd best = start;
    double best_val = objective(start);
    std::vector<double> trace{best_val};
    int total_iters = 0;
    const bool any_free = std::any_of(is_free.begin(), is_free.end(), [](char f) { return f != 0; });

    Rng rng(seed);
    std::normal_distribution<double> normal;
    for (int r = 0; any_free && r <= opts.restarts; ++r) {
        Eigen::VectorXcd c = start;
        if (r > 0) {
            for (Eigen::Index i = 0; i < ns; ++i)
                if (is_free[static_cast<std::size_t>(i)]) c(i) += 0.25 * cd(normal(rng), normal(rng));
        }
        double val = objective(c);
        if (val < best_val) {
            best_val = val;
            best = c;
            trace.push_back(best_val);
        }
        const double step0 = opts.initial_step * val / std::sqrt(static_cast<double>(ns));
        for (int it = 0; it < iters; ++it) {
            const Eigen::VectorXcd v = e * c;
            Eigen::VectorXcd sgn(v.size());
            for (Eigen::Index i = 0; i < v.size(); ++i)
                sgn(i) = std::abs(v(i)) > 0.0 ? v(i) / std::abs(v(i)) : cd(0.0, 0.0);
            Eigen::VectorXcd g = e.adjoint() * (w.cast<cd>().cwiseProduct(sgn));
            for (Eigen::Index i = 0; i < ns; ++i)
                if (!is_free[static_cast<std::size_t>(i)]) g(i) = 0.0;
            const double gn = g.norm();
            if (gn < 1e-14) break;
            c -= (step0 / std::sqrt(it + 1.0)) * g / gn;
            val = objective(c);
            ++total_iters;
            if (val < best_val) {
                best_val = val;
                best = c;
                trace.push_back(best_val);
            }
        }
    }

    VpRecord rec{q, support, {}, support.size(), best_val, torus.shape(), 0.0, 0, std::move(trace), total_iters};
    for (Eigen::Index i = 0; i < ns; ++i) rec.coeffs.push_back(best(i));
    fill_sigma(rec, e, w);
    return rec;
}

std::uint64_t kernel_m_bound(std::uint64_t n, std::uint64_t m, double c1) {
    if (n < 1) throw ArgumentError("dimension N must be >= 1");
    SampleSizeQuery query;
    query.N = static_cast<double>(n);
    query.M = static_cast<double>(m);
    query.C = c1;
    return required_m(query, SampleRule::UniformBilinear);
}

KernelReport kernel_report(const Subspace& s, std::optional<VpRecord> vp, double c1_const) {
    KernelReport r;
    const DirichletL1 l1 = dirichlet_l1(s);
    r.max_l1 = l1.max;
    r.argmax = l1.argmax;
    r.max_diag_sqrt = christoffel(s).h2inf;
    r.resolution = s.grid_size();
    r.c1_const = c1_const;
    // M = 0 is admissible: the zero bilinear form gives sigma <= max_x ||D(x, .)||_1
    r.sigma_bound = r.max_l1;
    r.sigma_terms = 0;
    if (vp && vp->sigma_bound < r.sigma_bound) {
        r.sigma_bound = vp->sigma_bound;
        r.sigma_terms = vp->sigma_terms;
    }
    r.vp = std::move(vp);
    r.m_bound = kernel_m_bound(static_cast<std::uint64_t>(s.dim()), r.sigma_terms, c1_const);
    return r;
}

} // namespace mzkit
