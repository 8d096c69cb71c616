#pragma once

#include <cstdint>
#include <string_view>

#include "nusim/common.hpp"

namespace nusim {

// Counter-based deterministic random stream.
//
// A stream is keyed by (master seed, purpose string, index); the i-th output
// is a SplitMix64-style mix of key + i * golden gamma. Streams derived with
// distinct purposes or indices are independent for simulation purposes, and
// every draw depends only on the key and the draw counter, so results are
// identical regardless of scheduling.
class RngStream {
 public:
  RngStream(std::uint64_t master, std::string_view purpose, std::uint64_t index = 0)
      : key_(derive_key(master, purpose, index)) {}

  std::uint64_t next_u64() {
    std::uint64_t z = key_ + (++counter_) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1) with 53 random bits.
  Real next_double() { return Real(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n); multiply-shift reduction (bias < 2^-53 at desk scale).
  std::uint64_t next_below(std::uint64_t n) {
    return std::uint64_t((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Derive an independent sub-stream.
  RngStream child(std::string_view purpose, std::uint64_t index = 0) const {
    return RngStream(key_, purpose, index);
  }

  std::uint64_t key() const { return key_; }

 private:
  static std::uint64_t derive_key(std::uint64_t master, std::string_view purpose,
                                  std::uint64_t index) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a over seed, purpose, index
    auto eat = [&h](std::uint64_t v) {
      for (int i = 0; i < 8; ++i) {
        h ^= (v >> (8 * i)) & 0xff;
        h *= 0x100000001b3ULL;
      }
    };
    eat(master);
    for (unsigned char c : purpose) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    eat(index);
    // one avalanche round so nearby keys diverge
    h = (h ^ (h >> 30)) * 0xBF58476D1CE4E5B9ULL;
    h = (h ^ (h >> 27)) * 0x94D049BB133111EBULL;
    return h ^ (h >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace nusim
