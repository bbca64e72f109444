#pragma once

namespace mzkit {

/// Numerical tolerances shared by the modules. Every report echoes the
/// values it was computed with.
struct Tolerances {
    double orthonormality = 1e-10; ///< max |Gram - I| accepted as orthonormal
    double min_gram_eigenvalue = 1e-10;
    double design = 0.01;          ///< relative G-value slack for optimal designs
    double eigen = 1e-10;          ///< relative cutoff for singular frame matrices
    double lp_feasibility = 1e-9;
};

} // namespace mzkit
