#include "nusim/alphabet.hpp"

#include <algorithm>
#include <unordered_set>

namespace nusim {

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw ConfigError("alphabet must be nonempty");
  std::unordered_set<std::string> seen;
  for (const auto& s : symbols_) {
    if (!seen.insert(s).second) throw ConfigError("duplicate alphabet symbol: " + s);
  }
}

Index Alphabet::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (symbols_[i] == label) return Index(i);
  }
  return -1;
}

Alphabet Alphabet::binary() { return Alphabet({"0", "1"}); }

Alphabet Alphabet::indexed(const std::string& prefix, Index count) {
  std::vector<std::string> syms;
  syms.reserve(std::size_t(count));
  for (Index i = 0; i < count; ++i) syms.push_back(prefix + std::to_string(i));
  return Alphabet(std::move(syms));
}

Alphabet Alphabet::power(const Alphabet& base, Index n) {
  const Index total = checked_power(base.size(), n);
  bool single_char = true;
  for (const auto& s : base.labels()) single_char = single_char && s.size() == 1;
  std::vector<std::string> syms;
  syms.reserve(std::size_t(total));
  std::vector<int> digits(std::size_t(n), 0);
  for (Index idx = 0; idx < total; ++idx) {
    std::string label;
    for (Index p = 0; p < n; ++p) {
      if (p > 0 && !single_char) label += '.';
      label += base.label(digits[std::size_t(p)]);
    }
    syms.push_back(std::move(label));
    for (Index p = n - 1; p >= 0; --p) {
      if (++digits[std::size_t(p)] < base.size()) break;
      digits[std::size_t(p)] = 0;
    }
  }
  return Alphabet(std::move(syms));
}

Alphabet Alphabet::product(const Alphabet& a, const Alphabet& b) {
  if (a.size() * b.size() > kMaxExactCells) throw BudgetError("product alphabet too large");
  std::vector<std::string> syms;
  syms.reserve(std::size_t(a.size() * b.size()));
  for (Index i = 0; i < a.size(); ++i) {
    for (Index j = 0; j < b.size(); ++j) {
      syms.push_back(a.label(i) + "|" + b.label(j));
    }
  }
  return Alphabet(std::move(syms));
}

Index tuple_to_index(std::span<const int> tuple, Index base_size) {
  Index idx = 0;
  for (int sym : tuple) idx = idx * base_size + sym;
  return idx;
}

std::vector<int> index_to_tuple(Index index, Index base_size, Index n) {
  std::vector<int> tuple(std::size_t(n), 0);
  for (Index p = n - 1; p >= 0; --p) {
    tuple[std::size_t(p)] = int(index % base_size);
    index /= base_size;
  }
  return tuple;
}

Index checked_power(Index base, Index n, Index limit) {
  Index total = 1;
  for (Index i = 0; i < n; ++i) {
    if (total > limit / base) {
      throw BudgetError("exact-mode budget exceeded (" + std::to_string(base) + "^" +
                        std::to_string(n) + " tuples); use Monte-Carlo mode");
    }
    total *= base;
  }
  return total;
}

}  // namespace nusim
