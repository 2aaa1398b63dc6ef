#include "evolvekit/simulator.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <charconv>
#include <cmath>
#include <new>

#include "evolvekit/density.hpp"
#include "evolvekit/errors.hpp"
#include "evolvekit/parallel.hpp"
#include "evolvekit/simplex_cells.hpp"
#include "evolvekit/verification.hpp"

namespace evolvekit {

InitialDirection InitialDirection::parse(const std::string& text) {
  if (text == "uniform") return uniform();
  constexpr std::string_view prefix = "fixed:";
  if (text.rfind(prefix, 0) == 0) {
    int index = -1;
    const char* first = text.data() + prefix.size();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, index);
    if (ec == std::errc{} && ptr == last && first != last && index >= 0) return fixed(index);
  }
  throw InvalidArgument("initial direction policy must be 'uniform' or 'fixed:<i>', got '" + text + "'");
}

std::string InitialDirection::to_string() const {
  return kind == Kind::uniform ? std::string("uniform") : "fixed:" + std::to_string(index);
}

void SimulationConfig::validate(int n) const {
  if (samples < 1) throw InvalidArgument("sample count must be >= 1");
  if (!std::isfinite(horizon) || horizon < 0.0) throw InvalidArgument("horizon must be finite and >= 0");
  if (initial_direction.kind == InitialDirection::Kind::fixed &&
      (initial_direction.index < 0 || initial_direction.index > n))
    throw InvalidArgument("fixed initial direction must lie in [0, n]");
  if (!start_point.empty() && start_point.size() != static_cast<std::size_t>(n))
    throw InvalidArgument("start point dimension does not match n");
}

PathSample simulate_path(const EvolutionParams& params, const SimplexGeometry& geometry,
                         const SimulationConfig& config, RandomStream& rng) {
  const int n = params.n;
  const int directions = n + 1;
  PathSample s;
  s.position = config.start_point.empty() ? std::vector<double>(n, 0.0) : config.start_point;
  s.initial_direction = config.initial_direction.kind == InitialDirection::Kind::fixed
                            ? config.initial_direction.index
                            : static_cast<int>(rng.below(directions));
  int direction = s.initial_direction;
  double remaining = config.horizon;
  for (;;) {
    const double hold = rng.exponential(params.lambda);
    const double duration = std::min(hold, remaining);
    auto tau = geometry.vertex(direction);
    const double step = params.v * duration;
    for (int j = 0; j < n; ++j) s.position[j] += step * tau[j];
    if (hold >= remaining) break;
    remaining -= hold;
    direction = (direction + 1) % directions;
    ++s.switches;
  }
  s.current_direction = direction;
  return s;
}

std::vector<PathSample> simulate_batch(const EvolutionParams& params, const SimulationConfig& config) {
  params.validate();
  config.validate(params.n);
  const SimplexGeometry geometry(params.n);
  constexpr std::size_t kBlock = 4096;
  try {
    std::vector<PathSample> out(config.samples);
    const std::size_t blocks = (config.samples + kBlock - 1) / kBlock;
    parallel_for_blocks(blocks, config.threads, [&](std::size_t b) {
      const std::size_t end = std::min(config.samples, (b + 1) * kBlock);
      for (std::size_t i = b * kBlock; i < end; ++i) {
        RandomStream rng(config.seed, i);
        out[i] = simulate_path(params, geometry, config, rng);
      }
    });
    return out;
  } catch (const std::bad_alloc&) {
    throw SimulationError("out of memory while simulating " + std::to_string(config.samples) + " paths");
  }
}

FitReport histogram_fit(const EvolutionParams& params, std::span<const PathSample> dataset, double t,
                        const FitOptions& options) {
  params.validate();
  if (!(t > 0.0)) throw InvalidArgument("fit horizon must be > 0");
  if (dataset.empty()) throw FitError("empty dataset");
  const int n = params.n;
  const SimplexGeometry geometry(n);
  const SimplexSubdivision cells(n, options.cells_per_edge);
  const double vt = params.v * t;

  FitReport report;
  report.cells.resize(cells.size());
  std::vector<double> bary(n + 1);
  for (const auto& s : dataset) {
    if (s.switches < static_cast<std::uint64_t>(n)) continue;
    geometry.barycentric(s.position, vt, bary);
    ++report.cells[cells.locate(bary)].observed;
    ++report.conditioned_samples;
  }
  if (report.conditioned_samples == 0) throw FitError("no samples with at least n switches; nothing to fit");

  const DensityModel model(params);
  const double tol = options.series_tol;
  const Integrand f = [&](std::span<const double> x) { return model(x, t, tol); };
  report.target_mass = ac_mass(params, t);
  const double count_scale = static_cast<double>(report.conditioned_samples) / report.target_mass;
  const double cell_volume = geometry.volume(vt) / static_cast<double>(cells.size());
  const auto vertices = geometry.vertices_at(vt);

  for (std::size_t c = 0; c < cells.size(); ++c) {
    std::vector<std::vector<double>> corners;
    for (const auto& b : cells.cell_vertices(c)) {
      std::vector<double> x(n, 0.0);
      for (int i = 0; i <= n; ++i)
        for (int j = 0; j < n; ++j) x[j] += b[i] * vertices[i][j];
      corners.push_back(std::move(x));
    }
    const std::uint64_t stream_base = (static_cast<std::uint64_t>(c) << 34);
    std::size_t points = options.quadrature_points;
    if (points == 0) {
      const auto pilot =
          integrate_over_simplex(corners, cell_volume, f, options.pilot_points, options.quadrature_seed,
                                 stream_base, options.threads);
      const double expected = count_scale * pilot.value;
      const double sd_per_point = pilot.standard_error * std::sqrt(static_cast<double>(pilot.samples));
      const double allowed = options.precision_ratio * std::sqrt(std::max(expected, 1.0)) / count_scale;
      points = static_cast<std::size_t>(std::ceil(std::pow(sd_per_point / allowed, 2)));
      points = std::max(points, options.pilot_points);
    }
    const auto est = integrate_over_simplex(corners, cell_volume, f, points, options.quadrature_seed,
                                            stream_base + (1ull << 33), options.threads);
    CellFit& cell = report.cells[c];
    cell.mass = est.value;
    cell.mass_std_error = est.standard_error;
    cell.expected = count_scale * est.value;
    report.density_mass += est.value;
  }

  for (const CellFit& cell : report.cells) {
    if (cell.expected < options.min_expected)
      throw FitError("expected count " + std::to_string(cell.expected) + " below " +
                     std::to_string(options.min_expected) + "; coarsen the subdivision");
    const double diff = static_cast<double>(cell.observed) - cell.expected;
    report.chi_square += diff * diff / cell.expected;
    report.max_noise_ratio =
        std::max(report.max_noise_ratio, count_scale * cell.mass_std_error / std::sqrt(cell.expected));
  }
  const double shape_scale = report.target_mass / report.density_mass;
  for (const CellFit& cell : report.cells) {
    const double expected = cell.expected * shape_scale;
    const double diff = static_cast<double>(cell.observed) - expected;
    report.shape_chi_square += diff * diff / expected;
  }
  report.degrees_of_freedom = static_cast<int>(cells.size()) - 1;
  if (report.degrees_of_freedom > 0) {
    const double half_dof = 0.5 * report.degrees_of_freedom;
    report.reduced_chi_square = report.chi_square / report.degrees_of_freedom;
    report.p_value = boost::math::gamma_q(half_dof, 0.5 * report.chi_square);
    report.shape_p_value = boost::math::gamma_q(half_dof, 0.5 * report.shape_chi_square);
  } else {
    report.p_value = 1.0;
    report.shape_p_value = 1.0;
  }
  return report;
}

}  // namespace evolvekit
