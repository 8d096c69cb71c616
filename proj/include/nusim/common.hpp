#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nusim {

using Real = double;
using Index = std::int64_t;

// Desk-scale budgets for exact-mode computations. Larger requests must go
// through the Monte-Carlo paths.
inline constexpr Index kMaxExactCells = Index(1) << 22;      // joint tensors
inline constexpr Index kMaxCodebookSymbols = Index(1) << 24; // per generated table
inline constexpr Index kMaxExactOutputTuples = Index(1) << 20;

// Tolerances.
inline constexpr Real kPmfTolerance = 1e-9;   // normalization drift accepted
inline constexpr Real kSupportZero = 1e-12;   // below this a mass is treated as zero

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration or malformed value (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Exact-mode budget exceeded (CLI exit code 3).
class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace nusim
