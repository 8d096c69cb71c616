#pragma once

#include <span>
#include <string>
#include <vector>

#include "nusim/common.hpp"

namespace nusim {

// Finite ordered symbol alphabet. The construction order is canonical: it
// fixes lexicographic tuple orders and every tie-break downstream.
class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> symbols);

  Index size() const { return Index(symbols_.size()); }
  const std::string& label(Index i) const { return symbols_.at(std::size_t(i)); }
  const std::vector<std::string>& labels() const { return symbols_; }

  // Returns -1 when the label is unknown.
  Index index_of(std::string_view label) const;

  bool operator==(const Alphabet& other) const { return symbols_ == other.symbols_; }
  bool operator!=(const Alphabet& other) const { return !(*this == other); }

  static Alphabet binary();                                // {"0","1"}
  static Alphabet indexed(const std::string& prefix, Index count);
  // Alphabet of n-tuples over `base` in lexicographic order (first position
  // most significant). Throws BudgetError past the exact-mode budget.
  static Alphabet power(const Alphabet& base, Index n);
  // Pairs of (a,b) in row-major order: index = a * |B| + b.
  static Alphabet product(const Alphabet& a, const Alphabet& b);

 private:
  std::vector<std::string> symbols_;
};

// Index of an n-tuple of symbol ids in the lexicographic order of
// Alphabet::power; first position most significant.
Index tuple_to_index(std::span<const int> tuple, Index base_size);
std::vector<int> index_to_tuple(Index index, Index base_size, Index n);

// |base|^n with overflow/budget check against `limit`; throws BudgetError.
Index checked_power(Index base, Index n, Index limit = kMaxExactCells);

}  // namespace nusim
