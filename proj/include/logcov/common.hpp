#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace logcov {

// Exit-code contract: 0 success, 1 usage, 2 corpus/IO, 3 internal.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CorpusError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InternalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Round to two decimals, half away from zero (half-up for the non-negative
// quantities reported here).
inline double round2(double value) {
  return std::floor(value * 100.0 + 0.5) / 100.0;
}

// FNV-1a, used for deterministic mining-space fingerprints.
inline std::uint64_t fnv1a(std::uint64_t seed, const std::string& data) {
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;

}  // namespace logcov
