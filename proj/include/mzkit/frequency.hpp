#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace mzkit {

using Frequency = std::vector<long>;

/// Finite set of integer frequency vectors in Z^d, kept sorted and deduplicated.
class FrequencySet {
public:
    FrequencySet(int dim, std::vector<Frequency> freqs, std::string generator = "list");

    /// All k with |k_i| <= n_i.
    static FrequencySet box(const std::vector<long>& n);
    /// All k in a contiguous range lo..hi (d = 1).
    static FrequencySet range(long lo, long hi);
    /// All k with prod_j max(|k_j|, 1) <= N.
    static FrequencySet hyperbolic_cross(int dim, long N);
    /// k_1 = 1, k_{j+1} = ceil(ratio * k_j), N terms (d = 1).
    static FrequencySet lacunary(int N, double ratio);

    int dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return freqs_.size(); }
    const std::vector<Frequency>& freqs() const noexcept { return freqs_; }
    const std::string& generator() const noexcept { return generator_; }

    bool contains(const Frequency& k) const;
    /// max_k |k_axis|
    long max_abs(int axis) const;
    /// True when k in Q implies -k in Q.
    bool symmetric() const;

    bool operator==(const FrequencySet& other) const {
        return dim_ == other.dim_ && freqs_ == other.freqs_;
    }

private:
    int dim_;
    std::vector<Frequency> freqs_;
    std::string generator_;
};

} // namespace mzkit
