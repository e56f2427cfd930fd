#include "projlim/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace projlim {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kStreamMult = 0xD2B74407B1CE6E93ull;

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

}  // namespace

SeededRng SeededRng::at_stream(std::uint64_t k) const {
  return SeededRng{seed, mix64(stream * kGolden + k + 1)};
}

RandomSource::RandomSource(SeededRng id)
    : id_(id), engine_(mix64(mix64(id.seed + kGolden) ^ (id.stream * kStreamMult + 1))) {}

double RandomSource::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomSource::uniform_open() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomSource::normal() {
  const double u1 = uniform_open();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double RandomSource::gamma(double shape) {
  if (std::isnan(shape) || shape < 0.0) {
    throw std::domain_error("gamma shape must be >= 0");
  }
  if (shape == 0.0) return 0.0;
  if (shape < 1.0) {
    const double g = gamma(shape + 1.0);
    return g * std::pow(uniform_open(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double RandomSource::beta(double a, double b) {
  if (std::isnan(a) || std::isnan(b) || a < 0.0 || b < 0.0 || (a == 0.0 && b == 0.0)) {
    throw std::domain_error("beta needs a,b >= 0, not both zero");
  }
  if (a == 0.0) return 0.0;
  if (b == 0.0) return 1.0;
  for (int attempt = 0; attempt < 100; ++attempt) {
    const double x = gamma(a);
    const double y = gamma(b);
    if (x + y > 0.0) return x / (x + y);
  }
  throw std::runtime_error("beta sampler: gamma draws underflowed to zero");
}

double RandomSource::inverse_gaussian(double alpha, double gamma_rate) {
  if (!(alpha > 0.0) || !(gamma_rate > 0.0)) {
    throw std::domain_error("inverse_gaussian needs alpha > 0 and gamma > 0");
  }
  const double mu = alpha / gamma_rate;
  const double lambda = alpha * alpha;
  const double nu = normal();
  const double y = nu * nu;
  // Small root of the quadratic, written to avoid cancellation for large y.
  const double w = mu * y / (2.0 * lambda);
  const double x = mu / (1.0 + w + std::sqrt(w * (w + 2.0)));
  const double u = uniform01();
  return u <= mu / (mu + x) ? x : mu * mu / x;
}

}  // namespace projlim
