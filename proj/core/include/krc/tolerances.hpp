#ifndef KRC_TOLERANCES_HPP
#define KRC_TOLERANCES_HPP

namespace krc::tol {

// Library-wide numerical tolerances. These are contract values, not tuning
// knobs: validation, certificates and tests all pin against them.
inline constexpr double kNegativeMass = 1e-15;   // mass below -this is an error
inline constexpr double kNormalization = 1e-12;  // |sum - 1| allowed on inputs
inline constexpr double kTight = 1e-12;          // cost vs. path closure
inline constexpr double kLipschitz = 1e-9;       // slack on |f(i)-f(j)| <= c(i,j)
inline constexpr double kMargin = 1e-9;          // coupling margin residuals
inline constexpr double kGap = 1e-9;             // primal-dual gap
inline constexpr double kWeights = 1e-12;        // parameter weight agreement

}  // namespace krc::tol

#endif  // KRC_TOLERANCES_HPP
