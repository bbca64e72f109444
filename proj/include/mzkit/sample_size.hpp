#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace mzkit {

/// Sample-size formulas. All logarithms are base 2.
enum class SampleRule {
    LqRandomNikolskii,     ///< c delta^-2 q^2 H^q N (iid points, L_q, q >= 2)
    L1Weighted,            ///< C eps^-2 N log N (weighted L_1)
    LqEntropy,             ///< C q 4^q N^(2-1/q) B^q (log(2N log(4(4B)^q N q)))^2
    UniformNikolskiiGrowth,///< c (log B)^-2 N^(k+2) (log N)^2 (uniform norm via q = log N / log B)
    WeightedUniformEps,    ///< C eps^-2 N (Christoffel-weighted uniform norm, factor 1 + eps)
    UniformBilinear,       ///< C (M+N) N log((M+N)N) (uniform norm via kernel approximation)
    L2Sparse,              ///< ceil(bN) (weighted L_2 with b in (1, 2])
};

const char* to_string(SampleRule rule);
SampleRule sample_rule_from_string(const std::string& name);

struct SampleSizeQuery {
    std::optional<double> N;
    std::optional<double> q;
    std::optional<double> H;
    std::optional<double> delta;
    std::optional<double> eps;
    std::optional<double> B;  ///< entropy constant or Nikol'skii growth base
    std::optional<double> k;  ///< Nikol'skii growth exponent
    std::optional<double> M;  ///< number of kernel approximation terms
    std::optional<double> b;  ///< oversampling factor
    double c = 1.0;           ///< lower-case absolute constant override
    double C = 1.0;           ///< upper-case absolute constant override
};

/// Unrounded value of the selected formula.
double sample_size_value(const SampleSizeQuery& query, SampleRule rule);

/// Ceiling of sample_size_value; throws ArgumentError naming a missing or
/// out-of-range parameter, or on overflow of 64 bits.
std::uint64_t required_m(const SampleSizeQuery& query, SampleRule rule);

/// Frame-ratio bound C / (b - 1)^2 paired with the L2Sparse point count.
double l2_sparse_ratio_bound(double b, double C = 1.0);

} // namespace mzkit
