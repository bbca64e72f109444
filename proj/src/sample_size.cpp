#include "mzkit/sample_size.hpp"

#include "mzkit/errors.hpp"

#include <cmath>

namespace mzkit {

const char* to_string(SampleRule rule) {
    switch (rule) {
    case SampleRule::LqRandomNikolskii: return "lq_random_nikolskii";
    case SampleRule::L1Weighted: return "l1_weighted";
    case SampleRule::LqEntropy: return "lq_entropy";
    case SampleRule::UniformNikolskiiGrowth: return "uniform_nikolskii_growth";
    case SampleRule::WeightedUniformEps: return "weighted_uniform_eps";
    case SampleRule::UniformBilinear: return "uniform_bilinear";
    case SampleRule::L2Sparse: return "l2_sparse";
    }
    return "unknown";
}

SampleRule sample_rule_from_string(const std::string& name) {
    for (auto r : {SampleRule::LqRandomNikolskii, SampleRule::L1Weighted, SampleRule::LqEntropy,
                   SampleRule::UniformNikolskiiGrowth, SampleRule::WeightedUniformEps,
                   SampleRule::UniformBilinear, SampleRule::L2Sparse}) {
        if (name == to_string(r)) return r;
    }
    throw ArgumentError("unknown sample-size rule '" + name + "'");
}

namespace {

double need(const std::optional<double>& v, const char* name) {
    if (!v) throw ArgumentError(std::string("sample-size query is missing parameter '") + name + "'");
    return *v;
}

void check(bool ok, const char* msg) {
    if (!ok) throw ArgumentError(msg);
}

} // namespace

double sample_size_value(const SampleSizeQuery& qr, SampleRule rule) {
    switch (rule) {
    case SampleRule::LqRandomNikolskii: {
        const double n = need(qr.N, "N"), q = need(qr.q, "q"), h = need(qr.H, "H"),
                     delta = need(qr.delta, "delta");
        check(q >= 2.0, "parameter 'q' must be >= 2 for this rule");
        check(delta > 0.0 && delta < 1.0, "parameter 'delta' must lie in (0, 1)");
        return qr.c / (delta * delta) * q * q * std::pow(h, q) * n;
    }
    case SampleRule::L1Weighted: {
        const double n = need(qr.N, "N"), eps = need(qr.eps, "eps");
        check(eps > 0.0 && eps < 1.0, "parameter 'eps' must lie in (0, 1)");
        return qr.C / (eps * eps) * n * std::log2(n);
    }
    case SampleRule::LqEntropy: {
        const double n = need(qr.N, "N"), q = need(qr.q, "q"), b = need(qr.B, "B");
        check(q > 1.0, "parameter 'q' must exceed 1 for this rule");
        check(b >= 1.0, "parameter 'B' must be >= 1 for this rule");
        const double inner = std::log2(4.0 * std::pow(4.0 * b, q) * n * q);
        const double outer = std::log2(2.0 * n * inner);
        return qr.C * q * std::pow(4.0, q) * std::pow(n, 2.0 - 1.0 / q) * std::pow(b, q) * outer * outer;
    }
    case SampleRule::UniformNikolskiiGrowth: {
        const double n = need(qr.N, "N"), b = need(qr.B, "B"), k = need(qr.k, "k");
        check(b > 1.0, "parameter 'B' must exceed 1 for this rule");
        check(k > 0.0, "parameter 'k' must be positive");
        const double lb = std::log2(b), ln = std::log2(n);
        return qr.c / (lb * lb) * std::pow(n, k + 2.0) * ln * ln;
    }
    case SampleRule::WeightedUniformEps: {
        const double n = need(qr.N, "N"), eps = need(qr.eps, "eps");
        check(eps > 0.0 && eps < 1.0, "parameter 'eps' must lie in (0, 1)");
        return qr.C / (eps * eps) * n;
    }
    case SampleRule::UniformBilinear: {
        const double n = need(qr.N, "N"), m = need(qr.M, "M");
        check(n >= 1.0 && m >= 0.0, "parameters 'N' >= 1 and 'M' >= 0 required");
        const double s = (m + n) * n;
        return qr.C * s * std::log2(s);
    }
    case SampleRule::L2Sparse: {
        const double n = need(qr.N, "N"), b = need(qr.b, "b");
        check(b > 1.0 && b <= 2.0, "parameter 'b' must lie in (1, 2]");
        return b * n;
    }
    }
    throw ArgumentError("unknown sample-size rule");
}

std::uint64_t required_m(const SampleSizeQuery& query, SampleRule rule) {
    if (query.N && !(*query.N >= 1.0)) throw ArgumentError("parameter 'N' must be >= 1");
    const double v = sample_size_value(query, rule);
    if (!std::isfinite(v) || v >= 1.8e19) throw ArgumentError("sample size overflows 64 bits");
    const double r = std::ceil(v - 1e-12 * std::abs(v));
    return static_cast<std::uint64_t>(std::max(r, 1.0));
}

double l2_sparse_ratio_bound(double b, double C) {
    if (!(b > 1.0 && b <= 2.0)) throw ArgumentError("parameter 'b' must lie in (1, 2]");
    return C / ((b - 1.0) * (b - 1.0));
}

} // namespace mzkit
