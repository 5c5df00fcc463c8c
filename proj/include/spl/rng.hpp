#pragma once

#include <cstdint>
#include <random>

namespace spl {

/// Seedable generator with a pinned algorithm so artifacts reproduce across
/// implementations: mt19937_64 raw draws; uniform() maps the top 53 bits to
/// (0,1]; each normal() consumes exactly two uniforms through the Box-Muller
/// cosine branch (no pair caching).
class Rng {
 public:
  static constexpr const char* kAlgorithmId = "mt19937_64/box-muller-cos";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t raw() { return engine_(); }

  /// Uniform draw in (0,1]: ((raw >> 11) + 1) * 2^-53.
  double uniform() {
    return (static_cast<double>(raw() >> 11) + 1.0) * 0x1p-53;
  }

  /// Standard normal via sqrt(-2 ln u1) * cos(2 pi u2).
  double normal();

  /// Unbiased integer in [0, n) by rejection on the top of the raw range.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace spl
