#pragma once

#include <cstdint>
#include <limits>

namespace evolvekit {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
std::uint64_t mix64(std::uint64_t x);

/// xoshiro256** generator keyed by (seed, stream).
///
/// Stream derivation: key = mix64(seed ^ mix64(stream + 0x9E3779B97F4A7C15)),
/// then the four state words are successive SplitMix64 outputs starting from
/// key. Every sample or quadrature block owns stream = its index, so results
/// do not depend on how work is partitioned across threads.
///
/// Variates are produced by explicit inversion rather than <random>
/// distributions so that output is identical across standard libraries.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Exponential with unit rate, via -log(1 - U).
  double standard_exponential();
  double exponential(double rate) { return standard_exponential() / rate; }
  /// Uniform integer in [0, bound), bound > 0 (Lemire multiply-shift with rejection).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t s_[4];
};

}  // namespace evolvekit
