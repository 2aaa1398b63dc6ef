#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "evolvekit/density.hpp"
#include "evolvekit/errors.hpp"
#include "evolvekit/simulator.hpp"

using namespace evolvekit;

namespace {

SimulationConfig config(std::size_t samples, double t, std::uint64_t seed = 7) {
  SimulationConfig c;
  c.samples = samples;
  c.horizon = t;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("initial direction policy parsing") {
  CHECK(InitialDirection::parse("uniform").kind == InitialDirection::Kind::uniform);
  const auto f = InitialDirection::parse("fixed:2");
  CHECK(f.kind == InitialDirection::Kind::fixed);
  CHECK(f.index == 2);
  CHECK(f.to_string() == "fixed:2");
  for (const char* bad : {"", "fixed:", "fixed:-1", "fixed:x", "random"})
    CHECK_THROWS_AS(InitialDirection::parse(bad), InvalidArgument);
}

TEST_CASE("configuration validation") {
  const EvolutionParams p{2, 1.0, 1.0};
  CHECK_THROWS_AS(simulate_batch(p, config(0, 1.0)), InvalidArgument);
  CHECK_THROWS_AS(simulate_batch(p, config(10, -1.0)), InvalidArgument);
  auto c = config(10, 1.0);
  c.initial_direction = InitialDirection::fixed(3);
  CHECK_THROWS_AS(simulate_batch(p, c), InvalidArgument);
  c = config(10, 1.0);
  c.start_point = {0.0};
  CHECK_THROWS_AS(simulate_batch(p, c), InvalidArgument);
}

TEST_CASE("unswitched paths end at a scaled vertex") {
  const EvolutionParams p{3, 1.0, 2.0};
  const SimplexGeometry g(3);
  const double t = 1e-6;
  for (const auto& s : simulate_batch(p, config(2000, t))) {
    if (s.switches != 0) continue;
    auto tau = g.vertex(s.initial_direction);
    for (int j = 0; j < 3; ++j) CHECK(s.position[j] == doctest::Approx(p.v * t * tau[j]).epsilon(1e-12).scale(1e-18));
  }
}

TEST_CASE("switch counts are Poisson and directions cycle") {
  const EvolutionParams p{2, 1.5, 1.0};
  const double t = 2.0;
  const std::size_t count = 200000;
  const auto data = simulate_batch(p, config(count, t));
  const SimplexGeometry g(2);
  double mean = 0.0;
  std::size_t below_n = 0, outside = 0;
  for (const auto& s : data) {
    mean += static_cast<double>(s.switches);
    if (s.switches < 2) ++below_n;
    CHECK(s.current_direction == static_cast<int>((s.initial_direction + s.switches) % 3));
    if (g.classify(s.position, p.v * t) == Membership::outside) ++outside;
  }
  const double mu = p.lambda * t;
  mean /= count;
  CHECK(std::abs(mean - mu) <= 3.0 * std::sqrt(mu / count));
  const double pb = boundary_probability(p, t);
  CHECK(std::abs(static_cast<double>(below_n) / count - pb) <= 3.0 * std::sqrt(pb * (1 - pb) / count));
  CHECK(outside == 0);
}

TEST_CASE("datasets do not depend on the thread count") {
  const EvolutionParams p{3, 1.0, 1.0};
  auto c1 = config(10000, 1.5, 99);
  auto c4 = c1;
  c1.threads = 1;
  c4.threads = 4;
  const auto a = simulate_batch(p, c1);
  const auto b = simulate_batch(p, c4);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].position == b[i].position);
    CHECK(a[i].switches == b[i].switches);
  }
}

TEST_CASE("single switch from a fixed start lands uniformly") {
  const EvolutionParams p{1, 1.0, 1.0};
  auto c = config(200000, 1.0, 5);
  c.initial_direction = InitialDirection::fixed(0);
  std::vector<double> xs;
  for (const auto& s : simulate_batch(p, c))
    if (s.switches == 1) xs.push_back(s.position[0]);
  std::sort(xs.begin(), xs.end());
  double ks = 0.0;
  const double m = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double cdf = (xs[i] + 1.0) / 2.0;
    ks = std::max({ks, std::abs(cdf - i / m), std::abs(cdf - (i + 1) / m)});
  }
  CHECK(ks < 1.63 / std::sqrt(m));
}

TEST_CASE("histogram fit against the telegraph law") {
  const EvolutionParams p{1, 1.0, 1.0};
  const auto data = simulate_batch(p, config(200000, 1.0, 21));
  FitOptions o;
  o.cells_per_edge = 20;
  const auto fit = histogram_fit(p, data, 1.0, o);
  CHECK(fit.degrees_of_freedom == 19);
  CHECK(fit.p_value > 0.001);
  CHECK(fit.density_mass == doctest::Approx(fit.target_mass).epsilon(2e-3));
  CHECK(fit.max_noise_ratio <= 0.1 + 1e-9);
}

TEST_CASE("fit error paths") {
  const EvolutionParams p{3, 1.0, 1.0};
  const auto data = simulate_batch(p, config(100, 1e-6));
  CHECK_THROWS_AS(histogram_fit(p, data, 1e-6), FitError);
  const auto few = simulate_batch({2, 1.0, 1.0}, config(200, 1.0));
  FitOptions o;
  o.cells_per_edge = 12;
  CHECK_THROWS_AS(histogram_fit({2, 1.0, 1.0}, few, 1.0, o), FitError);
  CHECK_THROWS_AS(histogram_fit(p, std::vector<PathSample>{}, 1.0), FitError);
}
