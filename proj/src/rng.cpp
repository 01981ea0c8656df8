#include "apnlc/rng.hpp"

#include <cmath>
#include <numbers>

namespace apnlc {

std::uint64_t Rng::below(std::uint64_t n) {
  // Rejection keeps the draw unbiased.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

std::complex<double> Rng::normal_pair() {
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

std::complex<double> Rng::complex_gaussian(double variance) {
  return normal_pair() * std::sqrt(variance / 2.0);
}

}  // namespace apnlc
