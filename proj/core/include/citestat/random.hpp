#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace citestat {

/// mt19937_64 with portable draw mappings. The std:: distributions are
/// implementation-defined, which would make generated corpora differ between
/// standard libraries; these helpers produce the same stream everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, n); n > 0.
  std::uint64_t below(std::uint64_t n);

  /// Uniform on [lo, hi] inclusive.
  std::int64_t between(std::int64_t lo, std::int64_t hi);

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  bool bernoulli(double p) { return uniform() < p; }

  /// Index drawn with probability proportional to weights.
  std::size_t categorical(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
};

}  // namespace citestat
