#include "mzkit/remez.hpp"

#include "mzkit/errors.hpp"
#include "mzkit/lp.hpp"
#include "mzkit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace mzkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// n_j when Q is exactly the box prod [-n_j, n_j] with every n_j >= 1.
std::optional<std::vector<long>> box_orders(const FrequencySet& q) {
    std::vector<long> n;
    for (int a = 0; a < q.dim(); ++a) {
        n.push_back(q.max_abs(a));
        if (n.back() < 1) return std::nullopt;
    }
    if (!(FrequencySet::box(n) == q)) return std::nullopt;
    return n;
}

} // namespace

bool ExcludedSet::contains(Eigen::Index cell) const {
    return std::binary_search(cells.begin(), cells.end(), cell);
}

ExcludedSet excluded_cells(const GriddedSpace& space, std::vector<Eigen::Index> cells, std::string generator,
                           std::uint64_t seed) {
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    for (Eigen::Index c : cells)
        if (c < 0 || c >= space.size()) throw ArgumentError("excluded cell outside the grid");
    if (static_cast<Eigen::Index>(cells.size()) >= space.size())
        throw ArgumentError("excluded set must leave at least one grid cell");
    ExcludedSet b;
    b.grid_size = space.size();
    for (Eigen::Index c : cells) b.measure += space.weights()(c);
    b.measure_unnormalized = b.measure * space.lebesgue_volume();
    b.generator = cells.empty() ? "empty" : std::move(generator);
    b.cells = std::move(cells);
    b.seed = seed;
    return b;
}

ExcludedSet excluded_empty(const GriddedSpace& space) { return excluded_cells(space, {}, "empty"); }

ExcludedSet excluded_interval(const GriddedSpace& space, double start, double length) {
    if (space.domain() != Domain::Torus || space.dim() != 1)
        throw ArgumentError("interval excluded sets need a 1-D torus grid");
    if (!(length >= 0.0)) throw ArgumentError("interval length must be nonnegative");
    const double two_pi = 2.0 * M_PI;
    std::vector<Eigen::Index> cells;
    for (Eigen::Index i = 0; i < space.size(); ++i) {
        double off = std::fmod(space.points()(i, 0) - start, two_pi);
        if (off < 0.0) off += two_pi;
        if (off < length - 1e-12) cells.push_back(i);
    }
    return excluded_cells(space, std::move(cells), "interval");
}

ExcludedSet excluded_random(const GriddedSpace& space, std::size_t count, std::uint64_t seed) {
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(space.size()));
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    Rng rng(seed);
    // Fisher-Yates with an explicit draw so the permutation is portable
    for (std::size_t i = perm.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(perm[i - 1], perm[j]);
    }
    if (count > perm.size()) throw ArgumentError("more excluded cells than grid points");
    perm.resize(count);
    return excluded_cells(space, std::move(perm), "random", seed);
}

ExcludedSet translate(const ExcludedSet& b, const GriddedSpace& space, const std::vector<int>& shift) {
    std::vector<Eigen::Index> cells;
    for (Eigen::Index c : b.cells) cells.push_back(space.translate(c, shift));
    ExcludedSet out = excluded_cells(space, std::move(cells), b.generator, b.seed);
    out.worst_case_search = b.worst_case_search;
    return out;
}

RemezReport remez_constant(const Subspace& s, const ExcludedSet& b, const Tolerances& tol, double c1_const) {
    if (b.grid_size != s.grid_size()) throw ArgumentError("excluded set was built for a different grid");
    RemezReport r;
    r.subspace = s.label();
    r.measure = b.measure;
    r.measure_unnormalized = b.measure_unnormalized;
    r.resolution = s.grid_size();
    r.tolerance = tol.lp_feasibility;

    if (const auto& q = s.freqs()) {
        r.sqrt_dim_factor = c1_const * std::sqrt(static_cast<double>(q->size()));
        if (auto n = box_orders(*q); n && s.space().domain() == Domain::Torus) {
            const double d = static_cast<double>(n->size());
            double prod = 1.0, mn = static_cast<double>((*n)[0]);
            for (long nj : *n) {
                prod *= static_cast<double>(nj);
                mn = std::min(mn, static_cast<double>(nj));
            }
            r.box_bound = std::exp(2.0 * d * std::pow(b.measure_unnormalized * prod, 1.0 / d));
            r.box_hypothesis = b.measure_unnormalized < std::pow(M_PI / 2.0, d) * std::pow(mn, d) / prod;
            if (n->size() == 1) {
                r.univariate_bound = std::exp(4.0 * static_cast<double>((*n)[0]) * b.measure_unnormalized);
                r.univariate_hypothesis = b.measure_unnormalized < M_PI / 2.0;
            }
        }
    }

    const Eigen::MatrixXd& u = s.basis();
    if (b.empty()) {
        r.r = 1.0;
        christoffel(s).values.maxCoeff(&r.attaining_index);
        r.coeffs = u.row(r.attaining_index).transpose();
        r.coeffs /= (u * r.coeffs).cwiseAbs().maxCoeff();
        return r;
    }

    Eigen::MatrixXd rows(s.grid_size() - static_cast<Eigen::Index>(b.cells.size()), s.dim());
    Eigen::Index k = 0;
    for (Eigen::Index x = 0; x < s.grid_size(); ++x)
        if (!b.contains(x)) rows.row(k++) = u.row(x);

    if (auto nv = null_space_vector(rows, tol.eigen)) {
        r.r = kInf;
        r.null_certificate = *nv;
        r.coeffs = *nv;
        (u * *nv).cwiseAbs().maxCoeff(&r.attaining_index);
        return r;
    }

    SymmetricPolytopeLp lp(rows, tol.lp_feasibility);
    r.r = 1.0;
    for (Eigen::Index x : b.cells) {
        SymmetricPolytopeLp::Result res;
        try {
            res = lp.maximize(u.row(x).transpose());
        } catch (const NumericalError& e) {
            std::ostringstream os;
            os << "Remez LP failed at grid point " << x << ": " << e.what();
            throw NumericalError(os.str());
        }
        if (res.value > r.r || r.coeffs.size() == 0) {
            r.r = std::max(r.r, res.value);
            r.attaining_index = x;
            r.coeffs = res.coeffs;
        }
    }
    return r;
}

ExcludedSet excluded_greedy(const Subspace& s, std::size_t count, std::size_t candidates, const Tolerances& tol) {
    const GriddedSpace& space = s.space();
    if (candidates < 1) throw ArgumentError("greedy search needs at least one candidate");
    ExcludedSet b = excluded_empty(space);
    RemezReport cur = remez_constant(s, b, tol);
    for (std::size_t step = 0; step < count; ++step) {
        const Eigen::VectorXd f = s.evaluate(cur.coeffs).cwiseAbs();
        std::vector<Eigen::Index> order;
        for (Eigen::Index x = 0; x < s.grid_size(); ++x)
            if (!b.contains(x)) order.push_back(x);
        const std::size_t take = std::min(candidates, order.size());
        if (take + b.cells.size() + 1 >= static_cast<std::size_t>(s.grid_size())) break;
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                          [&](Eigen::Index i, Eigen::Index j) { return f(i) > f(j) || (f(i) == f(j) && i < j); });
        std::optional<ExcludedSet> best;
        RemezReport best_rep;
        for (std::size_t c = 0; c < take; ++c) {
            std::vector<Eigen::Index> cells = b.cells;
            cells.push_back(order[c]);
            ExcludedSet trial = excluded_cells(space, std::move(cells), "greedy");
            RemezReport rep = remez_constant(s, trial, tol);
            if (!best || rep.r > best_rep.r) {
                best = std::move(trial);
                best_rep = std::move(rep);
            }
        }
        b = std::move(*best);
        cur = std::move(best_rep);
        if (!cur.finite()) break;
    }
    b.generator = "greedy";
    b.worst_case_search = true;
    return b;
}

const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::HypothesisUnmet: return "hypothesis-unmet";
    }
    return "?";
}

RemezImplication remez_from_discretization(const Subspace& s, const PointSet& p, double d, const ExcludedSet& b,
                                           double tolerance, const Tolerances& tol) {
    if (!s.translation_invariant())
        throw PreconditionError("the discretization-to-Remez implication needs a translation-invariant trig subspace");
    if (p.size() == 0) throw ArgumentError("point set is empty");
    RemezImplication out;
    out.d = d;
    out.measure = b.measure;
    out.tolerance = tolerance;
    // m counts distinct points
    std::vector<Eigen::Index> distinct = p.indices;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    out.measure_limit = 1.0 / static_cast<double>(distinct.size());
    if (!(b.measure < out.measure_limit)) {
        out.verdict = Verdict::HypothesisUnmet;
        out.r = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    out.r = remez_constant(s, b, tol).r;
    out.verdict = out.r <= d + tolerance ? Verdict::Pass : Verdict::Fail;
    return out;
}

RemezThresholds remez_thresholds(std::size_t q_size, std::optional<double> s, const RemezConstants& k) {
    if (q_size < 1) throw ArgumentError("|Q| must be >= 1");
    const double q = static_cast<double>(q_size);
    RemezThresholds t;
    t.sqrt_dim_measure = k.c1 / q;
    t.sqrt_dim_factor = k.C1 * std::sqrt(q);
    t.twelve_measure = k.cd * std::exp2(-4.0 * q) / (q * q);
    const double sv = s.value_or(q);
    if (!(sv >= std::sqrt(q) - 1e-12 && sv <= q + 1e-12))
        throw ArgumentError("s must lie in [|Q|^(1/2), |Q|]");
    t.s = sv;
    t.general_factor_formula = 6.0 * std::sqrt(std::exp(1.0) * (1.0 + q / sv));
    if (std::abs(sv - q) < 1e-12) {
        t.general_factor = 12.0;
        t.M = std::exp2(4.0 * q);
    } else {
        t.general_factor = t.general_factor_formula;
        // |Q|^2 e^(2s) (1 + |Q|/s)^(2s), evaluated in logs
        const double lg = 2.0 * std::log(q) + 2.0 * sv + 2.0 * sv * std::log1p(q / sv);
        t.M = std::floor(std::exp(lg)) + 1.0;
    }
    const double lm = std::log2(t.M);
    t.m_log = k.Cd * t.M * q * lm;
    t.m_log_cubed = k.Cd * t.M * q * lm * lm * lm;
    return t;
}

} // namespace mzkit
