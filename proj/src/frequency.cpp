#include "mzkit/frequency.hpp"

#include "mzkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace mzkit {

FrequencySet::FrequencySet(int dim, std::vector<Frequency> freqs, std::string generator)
    : dim_(dim), freqs_(std::move(freqs)), generator_(std::move(generator)) {
    if (dim_ < 1) throw ArgumentError("frequency set dimension must be positive");
    if (freqs_.empty()) throw ArgumentError("frequency set must not be empty");
    for (const auto& k : freqs_) {
        if (static_cast<int>(k.size()) != dim_)
            throw ArgumentError("frequency vector has wrong dimension");
    }
    std::sort(freqs_.begin(), freqs_.end());
    freqs_.erase(std::unique(freqs_.begin(), freqs_.end()), freqs_.end());
}

FrequencySet FrequencySet::box(const std::vector<long>& n) {
    if (n.empty()) throw ArgumentError("box needs at least one axis");
    for (long ni : n)
        if (ni < 0) throw ArgumentError("box half-widths must be nonnegative");
    std::vector<Frequency> out;
    Frequency k(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) k[i] = -n[i];
    while (true) {
        out.push_back(k);
        std::size_t axis = n.size();
        while (axis > 0) {
            --axis;
            if (k[axis] < n[axis]) {
                ++k[axis];
                break;
            }
            k[axis] = -n[axis];
            if (axis == 0) return FrequencySet(static_cast<int>(n.size()), std::move(out), "box");
        }
    }
}

FrequencySet FrequencySet::range(long lo, long hi) {
    if (hi < lo) throw ArgumentError("empty frequency range");
    std::vector<Frequency> out;
    for (long k = lo; k <= hi; ++k) out.push_back({k});
    return FrequencySet(1, std::move(out), "range");
}

namespace {

void hyperbolic_rec(int dim, long N, long budget, Frequency& k, std::vector<Frequency>& out) {
    const std::size_t axis = k.size();
    if (static_cast<int>(axis) == dim) {
        out.push_back(k);
        return;
    }
    for (long v = -N; v <= N; ++v) {
        const long factor = std::max(std::labs(v), 1L);
        if (factor > budget) continue;
        k.push_back(v);
        hyperbolic_rec(dim, N, budget / factor, k, out);
        k.pop_back();
    }
}

} // namespace

FrequencySet FrequencySet::hyperbolic_cross(int dim, long N) {
    if (dim < 1) throw ArgumentError("hyperbolic cross dimension must be positive");
    if (N < 1) throw ArgumentError("hyperbolic cross parameter must be >= 1");
    std::vector<Frequency> out;
    Frequency k;
    // integer division keeps prod max(|k_j|,1) <= N exact
    hyperbolic_rec(dim, N, N, k, out);
    return FrequencySet(dim, std::move(out), "hyperbolic_cross");
}

FrequencySet FrequencySet::lacunary(int N, double ratio) {
    if (N < 1) throw ArgumentError("lacunary length must be >= 1");
    if (!(ratio > 1.0)) throw ArgumentError("lacunary ratio must exceed 1");
    std::vector<Frequency> out;
    long k = 1;
    for (int j = 0; j < N; ++j) {
        out.push_back({k});
        const double next = std::ceil(ratio * static_cast<double>(k) - 1e-12);
        k = std::max(k + 1, static_cast<long>(next));
    }
    return FrequencySet(1, std::move(out), "lacunary");
}

bool FrequencySet::contains(const Frequency& k) const {
    return std::binary_search(freqs_.begin(), freqs_.end(), k);
}

long FrequencySet::max_abs(int axis) const {
    long m = 0;
    for (const auto& k : freqs_) m = std::max(m, std::labs(k.at(axis)));
    return m;
}

bool FrequencySet::symmetric() const {
    for (const auto& k : freqs_) {
        Frequency neg(k);
        for (auto& v : neg) v = -v;
        if (!contains(neg)) return false;
    }
    return true;
}

} // namespace mzkit
