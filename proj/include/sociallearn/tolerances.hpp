#pragma once

// Centralized numeric tolerances. Double precision with O(n^3) accumulation
// sets the gaps between them; keep every module on the same constants.
namespace sociallearn::tol {

inline constexpr double kStructural = 1e-12;   // exact identities: symmetry, row sums
inline constexpr double kPsdSlack = 1e-10;     // eigenvalue floor for "PSD up to rounding"
inline constexpr double kFixedPoint = 1e-12;   // matrix fixed-point convergence (max-norm)
inline constexpr double kBetaIteration = 1e-14;// scalar pool-variance iteration convergence
inline constexpr double kSpectralCut = 1e-12;  // relative eigenvalue cutoff for pseudo-inverses

}  // namespace sociallearn::tol
