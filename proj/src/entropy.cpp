#include "mzkit/entropy.hpp"

#include "mzkit/errors.hpp"
#include "mzkit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mzkit {

const char* to_string(EntropyNorm norm) { return norm == EntropyNorm::Lq ? "lq" : "uniform"; }

EntropyNorm entropy_norm_from_string(const std::string& name) {
    if (name == "lq") return EntropyNorm::Lq;
    if (name == "uniform") return EntropyNorm::Uniform;
    throw ArgumentError("unknown entropy norm '" + name + "'");
}

std::uint64_t level_centers(int n) {
    if (n <= 0) return 1;
    if (n >= 6) return std::numeric_limits<std::uint64_t>::max();
    return std::uint64_t{1} << (std::uint64_t{1} << n);
}

namespace {

constexpr std::size_t kValueCacheLimit = 16'000'000;

class Distances {
public:
    Distances(const Subspace& s, const Eigen::MatrixXd& coeffs, double q, EntropyNorm norm)
        : s_(s), a_(coeffs), q_(norm == EntropyNorm::Uniform ? std::numeric_limits<double>::infinity() : q) {
        coefficient_metric_ = (q_ == 2.0);
        if (!coefficient_metric_ &&
            static_cast<std::size_t>(s.grid_size()) * static_cast<std::size_t>(a_.cols()) <= kValueCacheLimit)
            values_ = s.basis() * a_;
    }

    // distances from sample `c` to samples 0..count-1
    Eigen::VectorXd from(Eigen::Index c, Eigen::Index count) const {
        Eigen::VectorXd d(count);
        if (coefficient_metric_) {
            for (Eigen::Index i = 0; i < count; ++i) d(i) = (a_.col(i) - a_.col(c)).norm();
            return d;
        }
        const Eigen::VectorXd& w = s_.space().weights();
        if (values_.size() > 0) {
            for (Eigen::Index i = 0; i < count; ++i) d(i) = grid_norm(values_.col(i) - values_.col(c), w, q_);
        } else {
            const Eigen::MatrixXd diff =
                s_.basis() * (a_.leftCols(count).colwise() - a_.col(c));
            for (Eigen::Index i = 0; i < count; ++i) d(i) = grid_norm(diff.col(i), w, q_);
        }
        return d;
    }

private:
    const Subspace& s_;
    const Eigen::MatrixXd& a_;
    double q_;
    bool coefficient_metric_ = false;
    Eigen::MatrixXd values_;
};

// Half-separations after N_n farthest-point centers among the first `count` samples.
std::vector<double> traverse(const Distances& dist, Eigen::Index count, int n_max) {
    std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
    const std::uint64_t target = std::min<std::uint64_t>(level_centers(n_max), static_cast<std::uint64_t>(count));
    Eigen::VectorXd mind = dist.from(0, count);
    std::uint64_t placed = 1;
    auto record = [&]() {
        const double r = mind.maxCoeff();
        for (int n = 0; n <= n_max; ++n)
            if (level_centers(n) == placed) out[static_cast<std::size_t>(n)] = 0.5 * r;
    };
    record();
    while (placed < target) {
        Eigen::Index next = 0;
        mind.maxCoeff(&next);
        mind = mind.cwiseMin(dist.from(next, count));
        ++placed;
        record();
    }
    // levels beyond the sample size stay 0: every sample is a center
    return out;
}

} // namespace

EntropyEstimate estimate_entropy(const Subspace& s, double q, int n_max, std::size_t samples,
                                 std::uint64_t seed, EntropyNorm norm) {
    if (!(q >= 1.0)) throw ArgumentError("q must lie in [1, inf]");
    if (n_max < 0) throw ArgumentError("n_max must be nonnegative");
    if (samples < 1) throw ArgumentError("at least one sample is required");
    const Eigen::Index n = s.dim();
    const auto count = static_cast<Eigen::Index>(samples);
    const Eigen::VectorXd& w = s.space().weights();

    Eigen::MatrixXd a(n, count);
    const ChristoffelProfile prof = christoffel(s);
    a.col(0) = s.basis().row(prof.argmax).transpose();
    Rng rng(seed);
    std::normal_distribution<double> normal;
    for (Eigen::Index j = 1; j < count; ++j)
        for (Eigen::Index k = 0; k < n; ++k) a(k, j) = normal(rng);
    for (Eigen::Index j = 0; j < count; ++j) {
        double nq = grid_norm(s.evaluate(a.col(j)), w, q);
        if (!(nq > 0.0)) {
            a.col(j) = Eigen::VectorXd::Unit(n, 0);
            nq = grid_norm(s.evaluate(a.col(j)), w, q);
        }
        a.col(j) /= nq;
    }

    const Distances dist(s, a, q, norm);
    EntropyEstimate est;
    est.q = q;
    est.norm = norm;
    est.n_max = n_max;
    est.samples = samples;
    est.seed = seed;
    est.resolution = s.grid_size();
    est.values.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
    for (int lvl = 0; lvl <= n_max; ++lvl) est.centers.push_back(level_centers(lvl));

    for (Eigen::Index prefix = count; prefix >= 1; prefix /= 2) {
        const std::vector<double> v = traverse(dist, prefix, n_max);
        for (std::size_t i = 0; i < v.size(); ++i) est.values[i] = std::max(est.values[i], v[i]);
        if (prefix == 1) break;
    }
    return est;
}

EntropyHypothesisCheck check_entropy_hypothesis(const EntropyEstimate& est, double ent_b, double n, double q) {
    if (!(n >= 1.0)) throw ArgumentError("dimension N must be >= 1");
    if (!(q >= 1.0)) throw ArgumentError("q must lie in [1, inf]");
    EntropyHypothesisCheck out;
    out.ent_b = ent_b;
    out.min_ent_b = 1.0;
    out.margin = std::numeric_limits<double>::infinity();
    out.pass = true;
    for (std::size_t lvl = 1; lvl < est.values.size(); ++lvl) {
        const double k = std::ldexp(1.0, static_cast<int>(lvl));
        const double shape = k <= n ? std::pow(n / k, 1.0 / q) : std::exp2(-k / n);
        const double e = est.values[lvl];
        out.min_ent_b = std::max(out.min_ent_b, e / shape);
        const double slack = ent_b * shape - e;
        out.margin = std::min(out.margin, slack);
        if (slack < 0.0 && out.pass) {
            out.pass = false;
            out.violating_level = static_cast<int>(lvl);
        }
    }
    return out;
}

} // namespace mzkit
