#pragma once

#include <cstdint>
#include <random>

namespace projlim {

/// Value handle for a reproducible random stream: a master seed plus a
/// stream index. Equal handles always reproduce bit-identical draw
/// sequences; distinct streams are derived through a 64-bit mixing
/// function and behave as statistically independent generators.
struct SeededRng {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  /// Deterministic sub-stream derivation (counter k under this stream).
  SeededRng at_stream(std::uint64_t k) const;

  friend bool operator==(const SeededRng&, const SeededRng&) = default;
};

/// Materialized generator for one stream. All variate algorithms are
/// implemented here rather than through std:: distributions so that draw
/// sequences are identical across standard library implementations.
class RandomSource {
 public:
  explicit RandomSource(SeededRng id);

  const SeededRng& id() const { return id_; }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0,1) with 53 random bits.
  double uniform01();
  /// Uniform on the open interval (0,1).
  double uniform_open();
  /// Standard normal (Box-Muller).
  double normal();
  /// Gamma(shape) with unit scale. shape == 0 returns exactly 0; shapes in
  /// (0,1) use the Gamma(shape+1) boost followed by a U^(1/shape) factor;
  /// shapes >= 1 use the Marsaglia-Tsang squeeze.
  double gamma(double shape);
  /// Beta(a,b) from a pair of gammas; a == 0 gives exactly 0, b == 0 exactly 1.
  double beta(double a, double b);
  /// Inverse Gaussian with density
  ///   alpha/sqrt(2 pi) z^{-3/2} exp(-(alpha^2/z + gamma^2 z)/2 + gamma alpha),
  /// i.e. mean alpha/gamma and shape parameter alpha^2. Sampled by the
  /// two-root transformation method with a uniform acceptance step.
  double inverse_gaussian(double alpha, double gamma);

 private:
  SeededRng id_;
  std::mt19937_64 engine_;
};

}  // namespace projlim
