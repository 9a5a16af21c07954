#include "imhdc/rng.hpp"

#include <cmath>
#include <numbers>

namespace imhdc::rng {

namespace {

__extension__ using u128 = unsigned __int128;

double box_muller(double u1, double u2) noexcept {
  // u1 in (0, 1] keeps the log finite.
  const double radius = std::sqrt(-2.0 * std::log(1.0 - u1));
  return radius * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

double normal_from(std::uint64_t key) noexcept {
  const double u1 = to_unit(mix64(key + kGolden));
  const double u2 = to_unit(mix64(key + 2 * kGolden));
  return box_muller(u1, u2);
}

std::uint64_t Stream::below(std::uint64_t bound) noexcept {
  // Lemire's nearly-divisionless method.
  u128 m = static_cast<u128>(next()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<u128>(next()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double Stream::normal() noexcept {
  const double u1 = uniform();
  const double u2 = uniform();
  return box_muller(u1, u2);
}

}  // namespace imhdc::rng
