#pragma once

#include <iosfwd>

namespace exang::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

/// Entry point of the exang tool. Subcommands: simulate, fit, predict, waic,
/// summarize. Returns 0 on success, 2 on invalid input or usage and 3 when a
/// covariance matrix is singular beyond the jitter budget.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace exang::cli
