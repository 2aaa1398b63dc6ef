#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "evolvekit/density.hpp"
#include "evolvekit/errors.hpp"
#include "evolvekit/geometry.hpp"
#include "evolvekit/special_functions.hpp"
#include "evolvekit/verification.hpp"

using namespace evolvekit;

TEST_CASE("uniform simplex samples") {
  const EvolutionParams p{3, 1.0, 1.0};
  const auto pts = sample_uniform_simplex(p, 1.0, 20000, 4);
  const SimplexGeometry g(3);
  std::vector<double> mean(3, 0.0);
  for (const auto& x : pts) {
    CHECK(g.classify(x, 1.0) != Membership::outside);
    for (int j = 0; j < 3; ++j) mean[j] += x[j] / pts.size();
  }
  // Coordinates are bounded by 1, so sd <= 1.
  for (double m : mean) CHECK(std::abs(m) <= 3.0 / std::sqrt(20000.0));

  auto line = sample_uniform_simplex({1, 1.0, 1.0}, 1.0, 20000, 8);
  std::vector<double> xs;
  for (const auto& x : line) xs.push_back(x[0]);
  std::sort(xs.begin(), xs.end());
  double ks = 0.0;
  const double m = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double cdf = (xs[i] + 1.0) / 2.0;
    ks = std::max({ks, std::abs(cdf - i / m), std::abs(cdf - (i + 1) / m)});
  }
  CHECK(ks < 1.63 / std::sqrt(m));
}

TEST_CASE("quadrature over the support") {
  const EvolutionParams p{2, 1.0, 1.0};
  const auto one = integrate_over_support(p, 1.5, [](std::span<const double>) { return 1.0; }, 5000, 1);
  CHECK(one.value == doctest::Approx(volume(p, 1.5)).epsilon(1e-14));
  CHECK(one.standard_error == 0.0);
  const auto x1 = integrate_over_support(p, 1.5, [](std::span<const double> x) { return x[0]; }, 50000, 2);
  CHECK(std::abs(x1.value) <= 3.0 * x1.standard_error);

  const double t = 1.0;
  const double alpha = DerivedConstants::from(p).alpha;
  const auto bessel = integrate_over_support(
      p, t, [&](std::span<const double> x) { return eval_hyper_bessel(2, alpha * to_y_coordinates(p, x, t).require_z()).value; },
      100000, 3);
  CHECK(std::abs(bessel.value - analytic_bessel_integral(p, t)) <= 3.0 * bessel.standard_error);
}

TEST_CASE("quadrature is independent of the thread count") {
  const EvolutionParams p{3, 1.0, 1.0};
  const Integrand f = [](std::span<const double> x) { return std::exp(x[0] - x[2]); };
  const auto a = integrate_over_support(p, 1.0, f, 30000, 5, 1);
  const auto b = integrate_over_support(p, 1.0, f, 30000, 5, 3);
  CHECK(a.value == b.value);
  CHECK(a.standard_error == b.standard_error);
}

TEST_CASE("normalization check") {
  CHECK(check_normalization({1, 1.0, 1.0}, 1.0, 200000).pass);
  const auto r = check_normalization({1, 1.0, 1.0}, 1.0, 200000);
  CHECK(r.target == doctest::Approx(0.6321206).epsilon(1e-7));
  const auto tiny = check_normalization({2, 1.0, 1.0}, 1e-3, 20000);
  CHECK(tiny.target < 1e-6);
  CHECK(tiny.pass);
}

TEST_CASE("Beta integrals") {
  const auto a = check_beta_integrals(1, 1);
  CHECK(a.estimate == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(a.target == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  const auto b = check_beta_integrals(1, 2);
  CHECK(b.estimate == doctest::Approx(1.0 / 20.0).epsilon(1e-12));
  CHECK(b.target == doctest::Approx(1.0 / 20.0).epsilon(1e-12));
  for (int m = 1; m <= 5; ++m)
    for (int k = 0; k <= 10; ++k) CHECK(check_beta_integrals(k, m).pass);
  CHECK_THROWS_AS(check_beta_integrals(-1, 1), InvalidArgument);
  CHECK_THROWS_AS(check_beta_integrals(1, 0), InvalidArgument);
}

TEST_CASE("exact density mass") {
  for (double t : {0.5, 1.0, 2.0, 4.0})
    CHECK(density_mass_closed_form({1, 1.0, 1.0}, t) == doctest::Approx(ac_mass({1, 1.0, 1.0}, t)).epsilon(1e-13));
  CHECK(density_mass_closed_form({2, 1.0, 1.0}, 0.0) == 0.0);
  // Independent values from exact Dirichlet-moment enumeration.
  const struct {
    int n;
    double t, mass;
  } cases[] = {{2, 0.5, 0.08599199196082326}, {2, 1.0, 0.2438033709253686}, {2, 2.0, 0.533845135518334},
               {3, 0.5, 0.013360994792264297}, {3, 1.0, 0.06995421753881756}, {3, 2.0, 0.25785782577509886}};
  for (const auto& c : cases)
    CHECK(density_mass_closed_form({c.n, 1.0, 1.0}, c.t) == doctest::Approx(c.mass).epsilon(1e-12));
  // Quadrature of the density agrees with the exact value.
  const EvolutionParams p{2, 1.0, 1.0};
  const DensityModel model(p);
  const auto q = integrate_over_support(p, 1.0, [&](std::span<const double> x) { return model(x, 1.0); }, 100000, 6);
  CHECK(std::abs(q.value - density_mass_closed_form(p, 1.0)) <= 3.0 * q.standard_error);
}

TEST_CASE("suite names") {
  for (const char* name :
       {"geometry", "coefficients", "telegraph", "normalization", "bessel-integral", "beta", "remark", "mc-fit", "all"}) {
    const auto s = parse_suite(name);
    REQUIRE(s);
    CHECK(to_string(*s) == name);
  }
  CHECK_FALSE(parse_suite("nosuch"));
}

TEST_CASE("run_all statuses and mutation hooks") {
  VerifyOptions o;
  o.budget = 0;
  CHECK(run_all(o).status == RunStatus::empty);

  o.budget = 2000;
  o.suite = Suite::coefficients;
  o.grid.dimensions = {3};
  CHECK(run_all(o).status == RunStatus::all_passed);

  auto failing = [&](Suite suite, Mutation mutation) {
    VerifyOptions m = o;
    m.suite = suite;
    m.mutation = mutation;
    return run_all(m).failures;
  };
  CHECK(failing(Suite::telegraph, Mutation::none) == 0);
  CHECK(failing(Suite::telegraph, Mutation::prefactor) > 0);
  CHECK(failing(Suite::telegraph, Mutation::alpha) > 0);
  CHECK(failing(Suite::coefficients, Mutation::alpha) > 0);
  CHECK(failing(Suite::remark, Mutation::none) == 0);
  CHECK(failing(Suite::remark, Mutation::volume) > 0);
  CHECK(failing(Suite::remark, Mutation::prefactor) > 0);

  VerifyOptions bad = o;
  bad.grid.dimensions = {0};
  CHECK_THROWS_AS(run_all(bad), InvalidArgument);
}
