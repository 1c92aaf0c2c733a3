#pragma once

#include <charconv>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace aanet {

// Error hierarchy. Everything user-facing derives from aanet::error so the
// CLI can map it to exit code 1; plain std::logic_error means a broken
// internal invariant (exit code 2).
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Argument outside its admissible domain (bad latitude, negative distance, ...).
struct input_error : error {
  using error::error;
};

/// Malformed CSV / config text.
struct format_error : error {
  using error::error;
};

/// Kinematic precondition violated (e.g. link already past its range threshold).
struct state_error : error {
  using error::error;
};

/// A node id that does not resolve in the snapshot.
struct resolution_error : error {
  using error::error;
};

/// Problem instance too small for the requested operation.
struct instance_error : error {
  using error::error;
};

/// Exhaustive enumeration refused without an explicit override.
struct size_error : error {
  using error::error;
};

using Rng = std::mt19937_64;

// The standard <random> distributions are implementation-defined, so results
// would differ between standard libraries. These helpers keep every draw a
// pure function of the mt19937_64 stream.
inline double uniform_real01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  if (n == 0) throw input_error("uniform_index: empty range");
  // rejection sampling to stay unbiased
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v = rng();
  while (v >= limit) v = rng();
  return static_cast<std::size_t>(v % n);
}

inline double uniform_range(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_real01(rng);
}

// 64-bit FNV-1a, used to derive independent sub-seeds (per budget, per
// flight, per hour) from one base seed.
inline std::uint64_t fnv1a(std::uint64_t state, const void* data, std::size_t len) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    state ^= bytes[i];
    state *= 0x100000001b3ull;
  }
  return state;
}

inline std::uint64_t seed_mix(std::uint64_t base, std::uint64_t value) {
  std::uint64_t s = fnv1a(0xcbf29ce484222325ull, &base, sizeof base);
  return fnv1a(s, &value, sizeof value);
}

inline std::uint64_t seed_mix(std::uint64_t base, std::string_view text) {
  std::uint64_t s = fnv1a(0xcbf29ce484222325ull, &base, sizeof base);
  return fnv1a(s, text.data(), text.size());
}

inline std::uint64_t seed_mix(std::uint64_t base, std::string_view text, std::uint64_t value) {
  return seed_mix(seed_mix(base, text), value);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

inline bool parse_double(std::string_view field, double& out) {
  field = trim(field);
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && !field.empty();
}

inline bool parse_int(std::string_view field, long long& out) {
  field = trim(field);
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && !field.empty();
}

/// Shortest round-trip decimal form; locale independent, so file output is
/// byte-stable across runs and machines.
inline std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace detail

}  // namespace aanet
