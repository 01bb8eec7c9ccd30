#pragma once

namespace bitomo {

/// Numerical tolerances shared across the library.  Kept in one place so
/// tests and the command line tool pin the same thresholds.
inline constexpr double kHermitianTol = 1e-12;   // hermiticity, reality, idempotence
inline constexpr double kRankRelTol = 1e-10;     // relative singular value cutoff
inline constexpr double kRoundTripTol = 1e-10;   // Frobenius reconstruction error
inline constexpr double kResidualTol = 1e-8;     // least-squares consistency
inline constexpr double kPsdTol = 1e-12;         // eigenvalue negativity slack
inline constexpr double kParseTol = 1e-15;       // print/parse agreement

}  // namespace bitomo
