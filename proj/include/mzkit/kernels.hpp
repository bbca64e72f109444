#pragma once

#include "mzkit/frequency.hpp"
#include "mzkit/subspace.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

namespace mzkit {

struct DirichletL1 {
    Eigen::VectorXd per_point; ///< grid L1 norm of D(x^i, .)
    double max = 0.0;
    Eigen::Index argmax = 0;
};

DirichletL1 dirichlet_l1(const Subspace& s);

/// Trigonometric polynomial with unit Fourier coefficients on `interpolated`
/// and free coefficients on the rest of `support`.
struct VpRecord {
    FrequencySet interpolated;
    FrequencySet support;
    std::vector<std::complex<double>> coeffs; ///< aligned with support.freqs()
    std::size_t M = 0;                        ///< |support|
    double l1_norm = 0.0;                     ///< grid L1 norm (normalized measure)
    std::vector<int> resolution;
    /// ||D_Q - g||_1 with g = D_Q - V supported on support \ interpolated.
    /// An upper bound, at grid resolution, on the constrained bilinear
    /// approximation error of the Dirichlet kernel with sigma_terms terms.
    double sigma_bound = 0.0;
    std::size_t sigma_terms = 0;
    /// best objective after each accepted (improving) iteration of a search
    std::vector<double> trace;
    int iterations = 0;

    /// max_{k in interpolated} |coeff(k) - 1|
    double interpolation_error() const;
};

/// Grid L1 norm of a trig polynomial with the given coefficients on the torus grid.
double trig_l1_norm(const FrequencySet& support, const std::vector<std::complex<double>>& coeffs,
                    const GriddedSpace& torus);

/// De la Vallee Poussin kernel for Q = [-n, n]: coefficient 1 on |k| <= n and
/// (2n + 1 - |k|) / (n + 1) on n < |k| <= 2n, so M = 4n + 1.
VpRecord vp_classical(int n, int grid_points = 4096);

struct VpSearchOptions {
    int restarts = 1;        ///< extra randomized starts after the tapered start
    double initial_step = 0.5;
    int grid_points = 256;   ///< per torus axis
};

/// Subgradient minimization of the grid L1 norm over coefficients fixed to 1
/// on Q and free on support \ Q. Returns the best iterate (an upper bound on
/// the optimal norm, never claimed optimal). The first start tapers the free
/// coefficients linearly in the Chebyshev distance to Q.
VpRecord vp_search(const FrequencySet& q, const FrequencySet& support, int iters, std::uint64_t seed,
                   const VpSearchOptions& opts = {});

/// ceil(C1 (M + N) N log2((M + N) N))
std::uint64_t kernel_m_bound(std::uint64_t n, std::uint64_t m, double c1 = 1.0);

struct KernelReport {
    double max_l1 = 0.0;        ///< max_x ||D(x, .)||_1
    double max_diag_sqrt = 0.0; ///< max_x D(x, x)^{1/2}
    Eigen::Index argmax = 0;
    std::optional<VpRecord> vp;
    double sigma_bound = 0.0;   ///< best available upper bound, at resolution
    std::size_t sigma_terms = 0;
    std::uint64_t m_bound = 0;  ///< point budget paired with sigma_bound
    Eigen::Index resolution = 0;
    double c1_const = 1.0;
};

KernelReport kernel_report(const Subspace& s, std::optional<VpRecord> vp = std::nullopt,
                           double c1_const = 1.0);

} // namespace mzkit
