#pragma once

// Shared small types and helpers: integer lattice vectors, error types,
// deterministic hashing.  Everything is exact integer arithmetic.

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace hnnpat {

using Coord = std::int32_t;
using Vec = std::vector<Coord>;

class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A word or expression failed to parse, or refers to unknown generators.
class malformed_word_error : public error {
 public:
  using error::error;
};

// A query needs data outside the computed ball.
class out_of_radius_error : public error {
 public:
  using error::error;
};

// An operation was called with arguments outside its stated domain.
class precondition_error : public error {
 public:
  using error::error;
};

// A configured resource limit (memory, element count, word length) was hit.
class resource_error : public error {
 public:
  resource_error(const std::string& what, int completed_radius = -1)
      : error(what), completed_radius(completed_radius) {}
  int completed_radius;
};

// Largest word length accepted by word-level operations.
inline constexpr std::size_t kMaxWordLetters = 1000000;

inline Coord floordiv(Coord a, Coord b) {
  Coord q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline std::uint64_t fnv1a64(const void* data, std::size_t n,
                             std::uint64_t h = 1469598103934665603ull) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t fnv1a64(const std::string& s) {
  return fnv1a64(s.data(), s.size());
}

inline Vec vec_add(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec vec_sub(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec vec_scale(Coord k, const Vec& a) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = k * a[i];
  return r;
}

inline bool vec_is_zero(const Vec& a) {
  for (Coord c : a)
    if (c != 0) return false;
  return true;
}

struct VecHash {
  std::size_t operator()(const Vec& v) const {
    return static_cast<std::size_t>(
        fnv1a64(v.data(), v.size() * sizeof(Coord)));
  }
};

// Saturating add used by geodesic counters; counts beyond the cap are
// reported as the cap ("effectively infinite" for uniqueness questions).
inline constexpr std::uint64_t kCountCap = 4000000000000000000ull;

inline std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a + b;
  if (s < a || s > kCountCap) return kCountCap;
  return s;
}

inline std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > kCountCap / b) return kCountCap;
  std::uint64_t s = a * b;
  return s > kCountCap ? kCountCap : s;
}

}  // namespace hnnpat
