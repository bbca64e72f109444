// Acceptance suite: one PASS/FAIL line per criterion, details indented below.
#include "mzkit/certify.hpp"
#include "mzkit/design.hpp"
#include "mzkit/entropy.hpp"
#include "mzkit/kernels.hpp"
#include "mzkit/pointset.hpp"
#include "mzkit/remez.hpp"
#include "mzkit/rng.hpp"
#include "mzkit/sample_size.hpp"
#include "mzkit/subspace.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

using namespace mzkit;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
    bool pass = false;
    std::string summary;
    std::vector<std::string> details;
};

template <class... Args>
std::string fmt(const char* f, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Subspace trig_box(long n, int grid) {
    return build_trig_subspace(FrequencySet::box({n}), GriddedSpace::torus(1, grid));
}

// Frame matrix sum_j w_j u(xi_j) u(xi_j)^T built directly from the basis rows.
Eigen::MatrixXd frame_matrix(const Subspace& s, const PointSet& p) {
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(s.dim(), s.dim());
    for (std::size_t j = 0; j < p.size(); ++j) {
        const Eigen::VectorXd u = s.basis().row(p.indices[j]).transpose();
        f += p.weights[j] * u * u.transpose();
    }
    return f;
}

PointSet normalized(PointSet p) {
    const double w = p.weight_sum();
    for (double& x : p.weights) x /= w;
    return p;
}

struct PipelineResult {
    std::size_t m = 0;
    double d = kInf;
    double chain = kInf;
    double h = 0.0;
};

// Optimal design, then barrier selection for the design-orthonormal basis,
// then the uniform constant of the selected points.
PipelineResult pipeline(const Eigen::MatrixXd& raw, const GriddedSpace& space, double b,
                        std::optional<FrequencySet> freqs = std::nullopt) {
    const DesignMeasure design = kw_optimal_design(raw, space, 0.01);
    const Subspace ds = design_subspace(raw, space, design, {}, "design", freqs);
    const PointSet p = normalized(bss_select(ds, b));
    PipelineResult r;
    r.m = p.size();
    r.h = christoffel(ds).h2inf;
    r.chain = nikolskii_chain_bound(r.h, certify_l2(ds, p));
    r.d = certify_uniform(ds, p).d;
    return r;
}

// ---------------------------------------------------------------------------

Outcome equispaced_exactness() {
    Outcome o{true, {}, {}};
    double worst = 0.0;
    for (int n : {1, 2, 4, 8}) {
        const Subspace s = trig_box(n, 64 * (2 * n + 1));
        const MZReport r = certify_l2(s, equispaced_points(s.space(), 2 * n + 1));
        const double err = std::max(std::abs(r.c1 - 1.0), std::abs(r.c2 - 1.0));
        worst = std::max(worst, err);
        o.pass = o.pass && err <= 1e-10;
        o.details.push_back(fmt("n=%d G=%ld C1=%.15f C2=%.15f", n, static_cast<long>(s.grid_size()), r.c1, r.c2));
    }
    o.summary = fmt("max |C - 1| = %.2e (tol 1e-10)", worst);
    return o;
}

Outcome bss_guarantee() {
    Outcome o{true, {}, {}};
    const Subspace s = trig_box(2, 256);
    for (double b : {2.0, 3.0, 4.0}) {
        const PointSet p = bss_select(s, b);
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(frame_matrix(s, p));
        const double kappa = es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
        const double bound = bss_ratio_bound(b);
        const auto ceiling = static_cast<std::size_t>(std::ceil(b * static_cast<double>(s.dim())));
        const bool ok = p.size() <= ceiling && kappa <= bound + 1e-8 && es.eigenvalues().minCoeff() > 0.0;
        o.pass = o.pass && ok;
        o.details.push_back(fmt("b=%g m=%zu ceil(bN)=%zu kappa=%.6f bound=%.6f", b, p.size(), ceiling, kappa, bound));
    }
    o.pass = o.pass && static_cast<std::size_t>(std::ceil(4.0 * static_cast<double>(s.dim()))) == 20;
    o.summary = "point counts and recomputed frame ratios within bounds";
    if (!o.pass) o.summary = "bound violated";
    return o;
}

Outcome design_pipeline() {
    Outcome o{true, {}, {}};
    double constant = 0.0;
    const GriddedSpace line = GriddedSpace::box(1, 1024);
    for (int deg = 0; deg <= 8; ++deg) {
        const PipelineResult r = pipeline(legendre_raw_basis(deg, line), line, 2.0);
        const double ratio = r.d / std::sqrt(deg + 1.0);
        constant = std::max(constant, ratio);
        const bool ok = std::isfinite(r.d) && r.d <= r.chain + 1e-6;
        o.pass = o.pass && ok;
        o.details.push_back(fmt("poly deg %d N=%d m=%zu D=%.6f chain=%.6f D/sqrtN=%.4f%s", deg, deg + 1,
                                r.m, r.d, r.chain, ratio, ok ? "" : "  <-- violated"));
    }
    const GriddedSpace square = GriddedSpace::box(2, 32);
    for (int deg = 1; deg <= 2; ++deg) {
        const Eigen::MatrixXd raw = legendre_raw_basis(deg, square);
        const PipelineResult r = pipeline(raw, square, 2.0);
        const double ratio = r.d / std::sqrt(static_cast<double>(raw.cols()));
        constant = std::max(constant, ratio);
        const bool ok = std::isfinite(r.d) && r.d <= r.chain + 1e-6;
        o.pass = o.pass && ok;
        o.details.push_back(fmt("poly2d deg %d N=%ld m=%zu D=%.6f chain=%.6f D/sqrtN=%.4f%s", deg,
                                static_cast<long>(raw.cols()), r.m, r.d, r.chain, ratio, ok ? "" : "  <-- violated"));
    }
    std::vector<std::pair<std::string, std::pair<FrequencySet, GriddedSpace>>> trig;
    for (long n = 0; n <= 4; ++n)
        trig.push_back({fmt("trig box n=%ld", n), {FrequencySet::box({n}), GriddedSpace::torus(1, 1024)}});
    trig.push_back({"trig lacunary 4", {FrequencySet::lacunary(4, 2.0), GriddedSpace::torus(1, 1024)}});
    trig.push_back({"trig hyperbolic d=2 N=1", {FrequencySet::hyperbolic_cross(2, 1), GriddedSpace::torus(2, 32)}});
    trig.push_back({"trig box (1,0)", {FrequencySet::box({1, 0}), GriddedSpace::torus(2, 32)}});
    for (const auto& [name, qs] : trig) {
        const Eigen::MatrixXd raw = trig_raw_basis(qs.first, qs.second);
        const PipelineResult r = pipeline(raw, qs.second, 2.0, qs.first);
        const double ratio = r.d / std::sqrt(static_cast<double>(raw.cols()));
        constant = std::max(constant, ratio);
        const bool ok = std::isfinite(r.d) && r.d <= r.chain + 1e-6;
        o.pass = o.pass && ok;
        o.details.push_back(fmt("%s N=%ld m=%zu D=%.6f chain=%.6f D/sqrtN=%.4f%s", name.c_str(),
                                static_cast<long>(raw.cols()), r.m, r.d, r.chain, ratio, ok ? "" : "  <-- violated"));
    }
    o.summary = fmt("all D finite and below the chain bound; calibrated constant max D/sqrt(N) = %.4f", constant);
    if (!o.pass) o.summary = "chain bound violated or D infinite";
    return o;
}

Outcome christoffel_sampling() {
    Outcome o{true, {}, {}};
    for (int deg : {3, 6}) {
        const Subspace s = build_poly_subspace(deg, GriddedSpace::box(1, 1024));
        const Subspace aug = augment_constant(s);
        const int n = static_cast<int>(s.dim());
        const int trials = 200;
        int good = 0;
        int weight_ok = 0;
        double min_c1 = kInf, max_c2 = 0.0;
        for (int t = 0; t < trials; ++t) {
            const PointSet p = sample_christoffel(s, 8 * n, derive_seed(4000 + deg, t));
            const MZReport r = certify_l2(s, p);
            if (r.c1 >= 0.25 && r.c2 <= 4.0) ++good;
            min_c1 = std::min(min_c1, r.c1);
            max_c2 = std::max(max_c2, r.c2);
            // sum of weights is the discrete norm of the constant 1, so it lies in [C1, C2] of span(S + 1)
            const MZReport ra = certify_l2(aug, p);
            const double ws = p.weight_sum();
            if (ws <= ra.c2 * (1 + 1e-12) && ws >= ra.c1 * (1 - 1e-12)) ++weight_ok;
        }
        const double rate = static_cast<double>(good) / trials;
        o.pass = o.pass && rate >= 0.9 && weight_ok == trials;
        o.details.push_back(fmt("deg %d N=%d m=%d success %d/%d (%.3f) min C1=%.3f max C2=%.3f weight-sum check %d/%d",
                                deg, n, 8 * n, good, trials, rate, min_c1, max_c2, weight_ok, trials));
    }
    o.summary = o.pass ? "success rate >= 0.9 and weight sums inside augmented frame bounds"
                       : "success rate or weight-sum check failed";
    return o;
}

Outcome random_sampling_calibration() {
    Outcome o{true, {}, {}};
    const Subspace s = trig_box(1, 128);
    const double delta = 0.1;
    for (double q : {2.0, 4.0}) {
        const double h = q == 2.0 ? christoffel(s).h2inf : nikolskii_constant(s, q).value;
        SampleSizeQuery query;
        query.N = static_cast<double>(s.dim());
        query.q = q;
        query.H = h;
        query.delta = delta;
        const double value = sample_size_value(query, SampleRule::LqRandomNikolskii);
        const auto budget = static_cast<int>(required_m(query, SampleRule::LqRandomNikolskii));
        std::vector<int> ms;
        for (int m = 3; m < budget; m *= 2) ms.push_back(m);
        ms.push_back(budget);
        double prev = -1.0;
        bool monotone = true;
        std::optional<int> first;
        std::string trace;
        for (int m : ms) {
            const double pr = mc_success_probability(s, q, m, 200, 5000 + static_cast<std::uint64_t>(q), 4);
            monotone = monotone && pr >= prev;
            prev = pr;
            if (!first && pr >= 0.9) first = m;
            trace += fmt(" %d:%.3f", m, pr);
        }
        const bool ok = monotone && first.has_value();
        o.pass = o.pass && ok;
        o.details.push_back(fmt("q=%g H=%.4f required_m(c=1)=%d", q, h, budget));
        o.details.push_back("  m:P" + trace);
        if (first)
            o.details.push_back(fmt("  smallest sufficient m=%d, smallest sufficient c=%.3g", *first,
                                    static_cast<double>(*first) / value));
        if (!monotone) o.details.push_back("  success probability decreased along the sweep");
    }
    o.summary = o.pass ? "success probability nondecreasing and reaches 0.9 within the budget"
                       : "monotonicity or budget check failed";
    return o;
}

Outcome kernel_numbers() {
    Outcome o{true, {}, {}};
    const double exact = 1.0 / 3.0 + 2.0 * std::sqrt(3.0) / std::numbers::pi;
    const DirichletL1 d1 = dirichlet_l1(trig_box(1, 4096));
    const bool l1ok = std::abs(d1.max - exact) <= 1e-3;
    o.details.push_back(fmt("Q={-1,0,1}: L1=%.6f exact=%.6f", d1.max, exact));
    bool sqrtok = true;
    std::vector<std::pair<std::string, Subspace>> cases;
    for (long n = 0; n <= 6; ++n) cases.push_back({fmt("box n=%ld", n), trig_box(n, 512)});
    cases.push_back({"lacunary 6", build_trig_subspace(FrequencySet::lacunary(6, 2.0), GriddedSpace::torus(1, 512))});
    cases.push_back({"range 3..7", build_trig_subspace(FrequencySet::range(3, 7), GriddedSpace::torus(1, 512))});
    cases.push_back({"hyperbolic d=2 N=4", build_trig_subspace(FrequencySet::hyperbolic_cross(2, 4), GriddedSpace::torus(2, 32))});
    cases.push_back({"box (2,1)", build_trig_subspace(FrequencySet::box({2, 1}), GriddedSpace::torus(2, 24))});
    for (const auto& [name, s] : cases) {
        const double mx = dirichlet_l1(s).max;
        const double root = std::sqrt(static_cast<double>(s.dim()));
        sqrtok = sqrtok && mx <= root + 1e-6;
        o.details.push_back(fmt("%s N=%ld max L1=%.6f sqrtN=%.6f", name.c_str(), static_cast<long>(s.dim()), mx, root));
    }
    bool vpok = true;
    double vmax = 0.0;
    for (int n = 1; n <= 16; ++n) {
        const VpRecord v = vp_classical(n);
        vpok = vpok && v.l1_norm <= 3.0 && v.interpolation_error() < 1e-12;
        vmax = std::max(vmax, v.l1_norm);
    }
    o.details.push_back(fmt("classical VP kernels n=1..16: max L1=%.6f", vmax));
    o.pass = l1ok && sqrtok && vpok;
    o.summary = fmt("Dirichlet L1 error %.2e; kernel L1 <= sqrtN %s; VP max L1 %.4f <= 3", std::abs(d1.max - exact),
                    sqrtok ? "holds" : "fails", vmax);
    return o;
}

Outcome entropy_ceiling() {
    Outcome o{true, {}, {}};
    std::vector<std::pair<std::string, Subspace>> cases;
    cases.push_back({"trig {0}", trig_box(0, 256)});
    cases.push_back({"trig {-1,0,1}", trig_box(1, 256)});
    cases.push_back({"trig {1}", build_trig_subspace(FrequencySet::range(1, 1), GriddedSpace::torus(1, 256))});
    for (int deg = 0; deg <= 3; ++deg)
        cases.push_back({fmt("poly deg %d", deg), build_poly_subspace(deg, GriddedSpace::box(1, 257))});
    double margin = kInf;
    for (const auto& [name, s] : cases) {
        const double n = static_cast<double>(s.dim());
        const EntropyEstimate e = estimate_entropy(s, 2.0, 3, 10000, 7000 + s.dim());
        std::string line = fmt("%s N=%.0f:", name.c_str(), n);
        for (int lv = 0; lv <= 3; ++lv) {
            const double ceiling = 3.0 * std::exp2(-std::exp2(lv) / n);
            margin = std::min(margin, ceiling + 1e-6 - e.values[lv]);
            o.pass = o.pass && e.values[lv] <= ceiling + 1e-6;
            line += fmt(" e%d=%.4f/%.4f", lv, e.values[lv], ceiling);
        }
        o.details.push_back(line);
    }
    o.summary = fmt("min margin to the ceiling %.4f", margin);
    return o;
}

Outcome remez_suite() {
    Outcome o{true, {}, {}};
    // empty set
    bool empty_ok = true;
    for (long n : {0, 2, 5}) {
        const Subspace s = trig_box(n, 128);
        empty_ok = empty_ok && remez_constant(s, excluded_empty(s.space())).r == 1.0;
    }
    {
        const Subspace s = build_poly_subspace(4, GriddedSpace::box(1, 65));
        empty_ok = empty_ok && remez_constant(s, excluded_empty(s.space())).r == 1.0;
    }
    o.details.push_back(std::string("R(empty) == 1: ") + (empty_ok ? "yes" : "no"));

    // nested random families
    bool mono_ok = true;
    double worst_drop = 0.0;
    const std::vector<std::size_t> counts{1, 2, 4, 6, 8, 12, 16, 24};
    for (int f = 0; f < 20; ++f) {
        const Subspace s = f % 2 == 0 ? trig_box(1 + f % 3, 256)
                                      : build_trig_subspace(FrequencySet::box({1, 1}), GriddedSpace::torus(2, 20));
        double prev = 1.0;
        for (std::size_t c : counts) {
            const double r = remez_constant(s, excluded_random(s.space(), c, 8000 + f)).r;
            if (r < prev - 1e-9) {
                mono_ok = false;
                worst_drop = std::max(worst_drop, prev - r);
            }
            prev = r;
        }
    }
    o.details.push_back(fmt("20 nested families monotone: %s (largest drop %.2e)", mono_ok ? "yes" : "no", worst_drop));

    // univariate ceiling
    bool ceil_ok = true;
    double worst_ratio = 0.0;
    std::mt19937_64 rng(9000);
    std::uniform_real_distribution<double> start(0.0, 2.0 * std::numbers::pi);
    for (long n = 1; n <= 4; ++n) {
        const Subspace s = trig_box(n, 4096);
        for (double len : {0.02, 0.1, 0.2, 0.3}) {
            for (int rep = 0; rep < 2; ++rep) {
                const ExcludedSet b = excluded_interval(s.space(), start(rng), len);
                if (b.measure_unnormalized > 0.3 + 1e-12) continue;
                const RemezReport r = remez_constant(s, b);
                const double bound = std::exp(4.0 * n * b.measure_unnormalized);
                worst_ratio = std::max(worst_ratio, r.r / bound);
                ceil_ok = ceil_ok && r.r <= bound;
            }
            const std::size_t cells = static_cast<std::size_t>(len / (2.0 * std::numbers::pi) * 4096.0);
            const ExcludedSet b = excluded_random(s.space(), cells, 9100 + n);
            const RemezReport r = remez_constant(s, b);
            const double bound = std::exp(4.0 * n * b.measure_unnormalized);
            worst_ratio = std::max(worst_ratio, r.r / bound);
            ceil_ok = ceil_ok && r.r <= bound;
        }
    }
    o.details.push_back(fmt("R <= exp(4n|B|) at G=4096, n<=4, |B|<=0.3: %s (max R/bound %.4f)",
                            ceil_ok ? "yes" : "no", worst_ratio));

    // implication from a uniform discretization
    int passed = 0;
    int instances = 0;
    std::mt19937_64 pick(9500);
    while (instances < 50) {
        const int g = 240;
        std::set<long> reps{0};
        const int extra = 1 + static_cast<int>(pick() % 4);
        while (static_cast<int>(reps.size()) < 1 + extra) reps.insert(1 + static_cast<long>(pick() % 7));
        std::vector<Frequency> fq;
        for (long k : reps) {
            fq.push_back({k});
            if (k) fq.push_back({-k});
        }
        const Subspace s = build_trig_subspace(FrequencySet(1, fq), GriddedSpace::torus(1, g));
        const long top = *reps.rbegin();
        PointSet p = instances % 2 == 0
                         ? equispaced_points(s.space(), static_cast<int>(2 * top + 1 + pick() % 6), static_cast<int>(pick() % 5))
                         : sample_iid(s.space(), static_cast<int>(3 * s.dim()), 9600 + instances);
        const UniformReport u = certify_uniform(s, p);
        if (!u.finite()) continue;
        std::set<Eigen::Index> distinct(p.indices.begin(), p.indices.end());
        const std::size_t max_cells = (static_cast<std::size_t>(g) - 1) / distinct.size();
        if (max_cells < 1) continue;
        const std::size_t count = 1 + pick() % max_cells;
        const ExcludedSet b = excluded_random(s.space(), count, 9700 + instances);
        const RemezImplication imp = remez_from_discretization(s, p, u.d, b);
        ++instances;
        if (imp.verdict == Verdict::Pass) ++passed;
        else o.details.push_back(fmt("  instance %d: verdict %s R=%.6f D=%.6f |B|=%.5f limit=%.5f", instances,
                                     to_string(imp.verdict), imp.r, imp.d, imp.measure, imp.measure_limit));
    }
    o.details.push_back(fmt("implication instances passed: %d/50", passed));
    o.pass = empty_ok && mono_ok && ceil_ok && passed == 50;
    o.summary = o.pass ? "empty set, monotonicity, univariate ceiling and 50 implications all hold" : "a part failed";
    return o;
}

Outcome degeneracy_detection() {
    Outcome o{true, {}, {}};
    auto check = [&](const std::string& name, const Subspace& s, const PointSet& p) {
        const UniformReport u = certify_uniform(s, p);
        const MZReport l2 = certify_l2(s, p);
        double eu = kInf, el = kInf;
        if (u.null_certificate) {
            eu = 0.0;
            for (Eigen::Index j : p.indices) eu = std::max(eu, std::abs(s.basis().row(j).dot(*u.null_certificate)));
        }
        if (l2.null_certificate) {
            el = 0.0;
            for (Eigen::Index j : p.indices) el = std::max(el, std::abs(s.basis().row(j).dot(*l2.null_certificate)));
        }
        const bool ok = u.d == kInf && l2.c1 == 0.0 && eu < 1e-9 && el < 1e-9 &&
                        std::abs(u.null_certificate->norm() - 1.0) < 1e-9;
        o.pass = o.pass && ok;
        o.details.push_back(fmt("%s N=%ld m=%zu D=%g C1=%g max|f(xi)| uniform %.2e l2 %.2e", name.c_str(),
                                static_cast<long>(s.dim()), p.size(), u.d, l2.c1, eu, el));
    };
    for (long n : {1, 3}) {
        const Subspace s = trig_box(n, 240);
        check(fmt("trig box n=%ld", n), s, equispaced_points(s.space(), static_cast<int>(s.dim()) - 1));
    }
    {
        const Subspace s = build_poly_subspace(4, GriddedSpace::box(1, 201));
        check("poly deg 4", s, sample_iid(s.space(), static_cast<int>(s.dim()) - 1, 10000));
    }
    {
        const Subspace s = build_trig_subspace(FrequencySet::hyperbolic_cross(2, 2), GriddedSpace::torus(2, 16));
        check("hyperbolic d=2 N=2", s, sample_iid(s.space(), static_cast<int>(s.dim()) - 1, 10001));
    }
    o.summary = o.pass ? "infinite D, zero C1 and vanishing certificates" : "degeneracy not reported";
    return o;
}

Outcome lacunary_contrast() {
    Outcome o{true, {}, {}};
    const GriddedSpace line = GriddedSpace::torus(1, 1024);
    std::vector<double> lac, box;
    for (int n = 3; n <= 8; ++n) {
        const FrequencySet ql = FrequencySet::lacunary(n, 2.0);
        const FrequencySet qb = FrequencySet::range(1, n);
        const PipelineResult rl = pipeline(trig_raw_basis(ql, line), line, 4.0, ql);
        const PipelineResult rb = pipeline(trig_raw_basis(qb, line), line, 4.0, qb);
        lac.push_back(rl.d);
        box.push_back(rb.d);
        o.details.push_back(fmt("N=%d dim=%d lacunary m=%zu D=%.4f | contiguous m=%zu D=%.4f", n, 2 * n, rl.m, rl.d,
                                rb.m, rb.d));
    }
    // growth is read as a positive least-squares trend in N with D(8) > D(3);
    // strict step-by-step monotonicity is reported alongside
    bool monotone = true;
    for (std::size_t i = 1; i < lac.size(); ++i) monotone = monotone && lac[i] >= lac[i - 1];
    const double k = static_cast<double>(lac.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lac.size(); ++i) {
        const double x = 3.0 + static_cast<double>(i);
        sx += x;
        sy += lac[i];
        sxx += x * x;
        sxy += x * lac[i];
    }
    const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    const bool grows = slope > 0.0 && lac.back() > lac.front();
    o.details.push_back(fmt("lacunary trend slope %.4f per unit N; step-by-step monotone: %s", slope,
                            monotone ? "yes" : "no"));
    bool bounded = true;
    for (double d : box) bounded = bounded && d <= 1.5 * box.back();
    o.pass = grows && bounded;
    o.summary = fmt("observation: lacunary D %s with N (%.3f -> %.3f); contiguous D %s 1.5x its N=8 value %.3f",
                    grows ? "grows" : "does not grow", lac.front(), lac.back(),
                    bounded ? "stays within" : "exceeds", box.back());
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"equispaced exactness", equispaced_exactness},
        {"barrier selection guarantee", bss_guarantee},
        {"design + selection pipeline", design_pipeline},
        {"Christoffel sampling", christoffel_sampling},
        {"random sampling calibration", random_sampling_calibration},
        {"kernel numbers", kernel_numbers},
        {"entropy ceiling", entropy_ceiling},
        {"Remez suite", remez_suite},
        {"degeneracy detection", degeneracy_detection},
        {"lacunary contrast", lacunary_contrast},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what(), {}};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s criterion %zu (%s): %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    o.summary.c_str(), secs);
        for (const auto& d : o.details) std::printf("    %s\n", d.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
