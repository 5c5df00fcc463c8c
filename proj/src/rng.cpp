#include "spl/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spl {

double Rng::normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("below(0) is undefined");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t r = raw();
  while (r >= limit) r = raw();
  return r % n;
}

}  // namespace spl
