#pragma once

#include "mzkit/subspace.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mzkit {

enum class EntropyNorm { Lq, Uniform };

const char* to_string(EntropyNorm norm);
EntropyNorm entropy_norm_from_string(const std::string& name);

/// Sampled lower bounds on the entropy numbers e_n of the unit L_q ball of a
/// subspace, measured in the target norm.
///
/// Level n uses N_0 = 1 and N_n = 2^(2^n) centers. Centers are taken from the
/// set itself; the unrestricted definition can be smaller by at most a factor 2.
struct EntropyEstimate {
    double q = 2.0;
    EntropyNorm norm = EntropyNorm::Lq;
    int n_max = 0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    Eigen::Index resolution = 0;
    std::vector<double> values;          ///< e-hat_n, n = 0..n_max
    std::vector<std::uint64_t> centers;  ///< N_n, saturating at 2^64 - 1
};

/// N_n = 2^(2^n) for n >= 1 and 1 for n = 0, saturating.
std::uint64_t level_centers(int n);

/// Draw `samples` points of the unit L_q sphere (Gaussian directions scaled
/// to unit grid L_q norm; the normalized reproducing kernel at the maximizer
/// of the Christoffel function comes first) and run farthest-point traversal
/// in the target norm. e-hat_n is half the separation reached after N_n
/// centers. The estimate is the maximum over nested dyadic prefixes of the
/// sample, so it never decreases when `samples` doubles at a fixed seed.
EntropyEstimate estimate_entropy(const Subspace& s, double q, int n_max, std::size_t samples,
                                 std::uint64_t seed, EntropyNorm norm = EntropyNorm::Lq);

struct EntropyHypothesisCheck {
    bool pass = false;
    double ent_b = 0.0;
    double min_ent_b = 0.0;  ///< smallest constant the estimate admits (at least 1)
    double margin = 0.0;     ///< min over levels of bound - e-hat
    std::optional<int> violating_level;
};

/// Compares level n >= 1 (k = 2^n) with entB (N/k)^(1/q) for k <= N and
/// entB 2^(-k/N) for k > N. Level 0 carries no constraint.
EntropyHypothesisCheck check_entropy_hypothesis(const EntropyEstimate& est, double ent_b, double n, double q);

} // namespace mzkit
