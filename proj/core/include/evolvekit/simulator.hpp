#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "evolvekit/geometry.hpp"
#include "evolvekit/params.hpp"
#include "evolvekit/random.hpp"

namespace evolvekit {

/// Initial-direction policy: uniform over {0..n} or a fixed index.
struct InitialDirection {
  enum class Kind { uniform, fixed };
  Kind kind = Kind::uniform;
  int index = 0;

  static InitialDirection uniform() { return {}; }
  static InitialDirection fixed(int i) { return {Kind::fixed, i}; }

  /// Parses "uniform" or "fixed:<i>"; throws InvalidArgument otherwise.
  static InitialDirection parse(const std::string& text);
  std::string to_string() const;
};

struct SimulationConfig {
  std::uint64_t seed = 0;
  std::size_t samples = 1;
  double horizon = 0.0;
  InitialDirection initial_direction;
  std::vector<double> start_point;  // empty means the origin
  unsigned threads = 0;             // 0: hardware concurrency

  void validate(int n) const;
};

/// Endpoint of one trajectory at the horizon.
struct PathSample {
  std::vector<double> position;
  std::uint64_t switches = 0;
  int current_direction = 0;
  int initial_direction = 0;
};

/// Runs one trajectory: exponential(lambda) holding times, speed v along
/// tau_d, direction d -> (d+1) mod (n+1) at every switch, stopped exactly at
/// the horizon.
PathSample simulate_path(const EvolutionParams& params, const SimplexGeometry& geometry,
                         const SimulationConfig& config, RandomStream& rng);

/// config.samples endpoints; sample i draws from RandomStream(seed, i), so the
/// dataset is identical for any thread count. Allocation failure surfaces as
/// SimulationError and no partial dataset is returned.
std::vector<PathSample> simulate_batch(const EvolutionParams& params, const SimulationConfig& config);

struct FitOptions {
  int cells_per_edge = 12;
  /// Quadrature points per cell; 0 sizes each cell so that its quadrature
  /// standard error is at most `precision_ratio` times the Poisson noise of
  /// the cell's expected count.
  std::size_t quadrature_points = 0;
  double precision_ratio = 0.1;
  std::size_t pilot_points = 2000;
  std::uint64_t quadrature_seed = 0x5eed;
  double min_expected = 5.0;
  double series_tol = 1e-12;
  unsigned threads = 0;
};

struct CellFit {
  double expected = 0.0;
  std::uint64_t observed = 0;
  double mass = 0.0;             // integral of the density over the cell
  double mass_std_error = 0.0;
};

struct FitReport {
  double chi_square = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 0.0;
  double reduced_chi_square = 0.0;
  std::size_t conditioned_samples = 0;
  double target_mass = 0.0;      // ac_mass, the normalizer of the conditional law
  double density_mass = 0.0;     // sum of the cell masses
  double max_noise_ratio = 0.0;  // max over cells of quadrature SE / sqrt(expected)
  /// Same statistic with expected counts rescaled to sum to the conditioned
  /// sample size, i.e. comparing shape only.
  double shape_chi_square = 0.0;
  double shape_p_value = 0.0;
  std::vector<CellFit> cells;
};

/// Chi-square comparison of endpoints with at least n switches against the
/// conditional law f / ac_mass over an equal-volume subdivision of T_vt.
/// Endpoints are taken relative to the origin. Throws FitError when the
/// conditional set is empty or any expected count is below min_expected.
FitReport histogram_fit(const EvolutionParams& params, std::span<const PathSample> dataset, double t,
                        const FitOptions& options = {});

}  // namespace evolvekit
