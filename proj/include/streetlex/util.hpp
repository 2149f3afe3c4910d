// Shared plumbing: error types, seeded shuffling, number formatting,
// atomic file output.
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace streetlex {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input; carries the 1-based line number when one is known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A precondition on an argument was violated.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Deterministic random source. mt19937_64 output is fixed by the standard;
/// the bounded draw below is ours so results do not depend on the library's
/// distribution implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = std::uint64_t(-1) - (std::uint64_t(-1) % bound);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  /// Uniform real in [0, 1) with 53 bits of precision.
  double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// 0..n-1 in an order drawn from rng.
std::vector<std::size_t> shuffled_indices(std::size_t n, Rng& rng);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

/// Fixed-point formatting with `digits` decimals.
std::string format_fixed(double v, int digits);

/// Parse a full string as a double / integer; throws ArgumentError on junk.
double parse_double(std::string_view s, std::string_view what);
long long parse_int(std::string_view s, std::string_view what);

/// ASCII lowercase; bytes >= 0x80 pass through.
std::string ascii_lower(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_ws(std::string_view s);
std::string_view trim(std::string_view s);

/// Write to `path` through a sibling temp file and rename into place.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view contents);

/// Whole file as bytes; throws Error naming the path when unreadable.
std::string read_file(const std::filesystem::path& path);

}  // namespace streetlex
