#pragma once

namespace evolvekit {

/// Parameters of the cyclic random evolution: dimension, switching rate and speed.
struct EvolutionParams {
  int n = 1;
  double lambda = 1.0;
  double v = 1.0;

  /// Throws InvalidArgument unless n >= 1, lambda > 0, v > 0 (all finite).
  void validate() const;
};

}  // namespace evolvekit
