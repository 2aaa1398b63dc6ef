#include "evolvekit/verification.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "evolvekit/density.hpp"
#include "evolvekit/errors.hpp"
#include "evolvekit/geometry.hpp"
#include "evolvekit/parallel.hpp"
#include "evolvekit/random.hpp"
#include "evolvekit/simulator.hpp"
#include "evolvekit/special_functions.hpp"

namespace evolvekit {

namespace {

constexpr std::size_t kBlock = 4096;

struct BlockMoments {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;
};

// Chan et al. pairwise update of mean / sum of squared deviations.
void merge(BlockMoments& into, const BlockMoments& other) {
  if (other.count == 0) return;
  if (into.count == 0) {
    into = other;
    return;
  }
  const double total = static_cast<double>(into.count + other.count);
  const double delta = other.mean - into.mean;
  into.mean += delta * static_cast<double>(other.count) / total;
  into.m2 += other.m2 + delta * delta * static_cast<double>(into.count) * static_cast<double>(other.count) / total;
  into.count += other.count;
}

// Dirichlet(1,...,1) weights on the corners into x.
void dirichlet_point(RandomStream& rng, const std::vector<std::vector<double>>& corners, std::span<double> weights,
                     std::span<double> x) {
  double total = 0.0;
  for (double& w : weights) {
    w = rng.standard_exponential();
    total += w;
  }
  std::fill(x.begin(), x.end(), 0.0);
  for (std::size_t i = 0; i < corners.size(); ++i) {
    const double w = weights[i] / total;
    for (std::size_t j = 0; j < x.size(); ++j) x[j] += w * corners[i][j];
  }
}

void require_positive_time(double t) {
  if (!std::isfinite(t) || t <= 0.0) throw InvalidArgument("time t must be finite and > 0");
}

std::string format(const char* fmt, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, a, b, c);
  return buf;
}

double relative_error(double estimate, double target) {
  if (target == 0.0) return std::abs(estimate);
  return std::abs(estimate - target) / std::abs(target);
}

}  // namespace

std::vector<std::vector<double>> sample_uniform_simplex(const EvolutionParams& params, double t, std::size_t count,
                                                        std::uint64_t seed) {
  params.validate();
  require_positive_time(t);
  const SimplexGeometry geometry(params.n);
  const auto corners = geometry.vertices_at(params.v * t);
  std::vector<std::vector<double>> out(count, std::vector<double>(params.n));
  std::vector<double> weights(params.n + 1);
  for (std::size_t b = 0; b * kBlock < count; ++b) {
    RandomStream rng(seed, b);
    const std::size_t end = std::min(count, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) dirichlet_point(rng, corners, weights, out[i]);
  }
  return out;
}

QuadratureEstimate integrate_over_simplex(const std::vector<std::vector<double>>& corners, double volume,
                                          const Integrand& integrand, std::size_t count, std::uint64_t seed,
                                          std::uint64_t stream_base, unsigned threads) {
  if (corners.empty()) throw InvalidArgument("simplex needs at least one corner");
  if (count == 0) throw InvalidArgument("quadrature needs at least one sample");
  const std::size_t dim = corners.front().size();
  const std::size_t blocks = (count + kBlock - 1) / kBlock;
  std::vector<BlockMoments> moments(blocks);
  parallel_for_blocks(blocks, threads, [&](std::size_t b) {
    RandomStream rng(seed, stream_base + b);
    std::vector<double> weights(corners.size());
    std::vector<double> x(dim);
    BlockMoments m;
    const std::size_t end = std::min(count, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) {
      dirichlet_point(rng, corners, weights, x);
      const double fx = integrand(x);
      if (!std::isfinite(fx)) throw RangeError("integrand is not finite on the simplex");
      ++m.count;
      const double delta = fx - m.mean;
      m.mean += delta / static_cast<double>(m.count);
      m.m2 += delta * (fx - m.mean);
    }
    moments[b] = m;
  });
  BlockMoments total;
  for (const auto& m : moments) merge(total, m);
  QuadratureEstimate est;
  est.samples = total.count;
  est.value = volume * total.mean;
  const double variance = total.count > 1 ? total.m2 / static_cast<double>(total.count - 1) : 0.0;
  est.standard_error = volume * std::sqrt(variance / static_cast<double>(total.count));
  return est;
}

QuadratureEstimate integrate_over_support(const EvolutionParams& params, double t, const Integrand& integrand,
                                          std::size_t count, std::uint64_t seed, unsigned threads) {
  params.validate();
  require_positive_time(t);
  const SimplexGeometry geometry(params.n);
  const double vt = params.v * t;
  return integrate_over_simplex(geometry.vertices_at(vt), geometry.volume(vt), integrand, count, seed, 0, threads);
}

namespace {

VerificationReport normalization_report(const DensityModel& model, double t, std::size_t count, std::uint64_t seed,
                                        unsigned threads) {
  const EvolutionParams& p = model.params();
  const Integrand f = [&](std::span<const double> x) { return model(x, t); };
  const auto est = integrate_over_support(p, t, f, count, seed, threads);
  VerificationReport r;
  r.suite = "normalization";
  r.check = "quadrature n=" + std::to_string(p.n) + format(" lambda=%g v=%g t=%g", p.lambda, p.v, t);
  r.target = ac_mass(p, t);
  r.estimate = est.value;
  r.error = est.standard_error;
  r.rule = "|estimate - ac_mass| <= max(3 se, 5e-3)";
  r.pass = std::abs(est.value - r.target) <= std::max(3.0 * est.standard_error, 5e-3);
  return r;
}

}  // namespace

VerificationReport check_normalization(const EvolutionParams& params, double t, std::size_t count,
                                       std::uint64_t seed, unsigned threads) {
  require_positive_time(t);
  return normalization_report(DensityModel(params), t, count, seed, threads);
}

VerificationReport check_beta_integrals(int k, int m) {
  if (k < 0) throw InvalidArgument("k must be >= 0");
  if (m < 1 || m > 10) throw InvalidArgument("m must lie in [1, 10]");
  using boost::math::quadrature::gauss_kronrod;
  VerificationReport r;
  r.suite = "beta";
  r.rule = "relative error <= 1e-10";
  double err = 0.0;
  if (m == 1) {
    r.check = "int_{-1}^{1} (1-z^2)^k, k=" + std::to_string(k);
    auto f = [k](double z) { return std::pow(1.0 - z * z, k); };
    r.estimate = gauss_kronrod<double, 61>::integrate(f, -1.0, 1.0, 8, 1e-13, &err);
    r.target = std::exp((2 * k + 1) * std::log(2.0) + 2.0 * std::lgamma(k + 1.0) - std::lgamma(2.0 * k + 2.0));
  } else {
    r.check = "int_0^1 z^k (1-z)^{m(k+1)-1}, k=" + std::to_string(k) + " m=" + std::to_string(m);
    const int b = m * (k + 1) - 1;
    auto f = [k, b](double z) { return std::pow(z, k) * std::pow(1.0 - z, b); };
    r.estimate = gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 8, 1e-13, &err);
    r.target = std::exp(std::lgamma(m * (k + 1.0)) + std::lgamma(k + 1.0) - std::lgamma((m + 1.0) * (k + 1.0)));
  }
  r.error = err;
  r.pass = relative_error(r.estimate, r.target) <= 1e-10;
  return r;
}

double density_mass_closed_form(const EvolutionParams& params, double t, double tol) {
  params.validate();
  if (!std::isfinite(t) || t < 0.0) throw InvalidArgument("time t must be finite and >= 0");
  if (t == 0.0) return 0.0;
  const int n = params.n;
  const int order = n + 1;
  const double mu = params.lambda * t;
  const double mu_step = std::pow(mu, order);

  // N(m, k) for all m <= n via the truncated exponential polynomial.
  auto coefficients = [&](int k) {
    std::vector<double> e(n + 1, 0.0);
    double inv_fact = 1.0;
    for (int j = 0; j <= std::min(k, n); ++j) {
      e[j] = inv_fact;
      inv_fact /= (j + 1);
    }
    std::vector<double> acc(n + 1, 0.0);
    acc[0] = 1.0;
    for (int f = 0; f < order; ++f) {
      std::vector<double> next(n + 1, 0.0);
      for (int a = 0; a <= n; ++a)
        for (int b = 0; a + b <= n; ++b) next[a + b] += acc[a] * e[b];
      acc.swap(next);
    }
    return acc;
  };

  double total = 0.0;
  for (int m = 0; m <= n; ++m) {
    // base_k = mu^{(n+1)k} / ((n+1)k + n - m)!
    int e = n - m;
    double base = 1.0;
    for (int i = 2; i <= e; ++i) base /= i;
    double series = 0.0;
    for (int k = 0; k < 100000; ++k) {
      const double term = base * coefficients(k)[m];
      series += term;
      double denom = 1.0;
      for (int i = 1; i <= order; ++i) denom *= (e + i);
      const double r = mu_step / denom;
      if (k >= m && r < 1.0 && base * r / (1.0 - r) * coefficients(k + 1)[m] <= tol * series) break;
      base *= r;
      e += order;
    }
    double factorial_m = 1.0;
    for (int i = 2; i <= m; ++i) factorial_m *= i;
    const double g_m = factorial_m / std::pow(order * t, m) * series;
    total += std::pow(params.lambda, n - m) * g_m;
  }
  const SimplexGeometry geometry(n);
  const double vol_nfact = geometry.volume(params.v * t) * std::exp(std::lgamma(n + 1.0));
  return DerivedConstants::from(params).prefactor * std::exp(-mu) * vol_nfact * total;
}

std::optional<Suite> parse_suite(std::string_view name) {
  if (name == "geometry") return Suite::geometry;
  if (name == "coefficients") return Suite::coefficients;
  if (name == "telegraph") return Suite::telegraph;
  if (name == "normalization") return Suite::normalization;
  if (name == "bessel-integral") return Suite::bessel_integral;
  if (name == "beta") return Suite::beta;
  if (name == "remark") return Suite::remark;
  if (name == "mc-fit") return Suite::mc_fit;
  if (name == "all") return Suite::all;
  return std::nullopt;
}

std::string_view to_string(Suite suite) {
  switch (suite) {
    case Suite::geometry: return "geometry";
    case Suite::coefficients: return "coefficients";
    case Suite::telegraph: return "telegraph";
    case Suite::normalization: return "normalization";
    case Suite::bessel_integral: return "bessel-integral";
    case Suite::beta: return "beta";
    case Suite::remark: return "remark";
    case Suite::mc_fit: return "mc-fit";
    case Suite::all: return "all";
  }
  return "unknown";
}

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::all_passed: return "all_passed";
    case RunStatus::failures: return "failures";
    case RunStatus::empty: return "empty";
  }
  return "unknown";
}

namespace {

constexpr double kMutationFactor = 1.001;

DerivedConstants constants_for(const EvolutionParams& p, Mutation mutation) {
  DerivedConstants c = DerivedConstants::from(p);
  if (mutation == Mutation::prefactor) c.prefactor *= kMutationFactor;
  if (mutation == Mutation::alpha) c.alpha *= kMutationFactor;
  return c;
}

double volume_factor(Mutation mutation) { return mutation == Mutation::volume ? kMutationFactor : 1.0; }

struct Context {
  const VerifyOptions& options;
  std::vector<VerificationReport>& out;

  std::vector<EvolutionParams> grid_params() const {
    std::vector<EvolutionParams> ps;
    for (int n : options.grid.dimensions) ps.push_back({n, options.grid.lambda, options.grid.v});
    return ps;
  }
  double time_of(double lambda_t) const { return lambda_t / options.grid.lambda; }
  std::uint64_t seed(std::uint64_t salt) const { return mix64(options.seed ^ mix64(salt)); }
};

// Sampling box slightly larger than the support so that n = 1 is not degenerate.
constexpr double kBoxHalfWidth = 1.2;

void run_geometry(Context& ctx) {
  int max_n = 10;
  for (int n : ctx.options.grid.dimensions) max_n = std::max(max_n, n);
  double norm_dev = 0.0, centroid_dev = 0.0, tail_dev = 0.0, dot_dev = 0.0;
  bool vertices_on_boundary = true;
  for (int n = 1; n <= max_n; ++n) {
    const SimplexGeometry g(n);
    std::vector<double> centroid(n, 0.0);
    for (int i = 0; i <= n; ++i) {
      auto a = g.vertex(i);
      double norm2 = 0.0;
      for (int j = 0; j < n; ++j) {
        norm2 += a[j] * a[j];
        centroid[j] += a[j];
        if (j > i) tail_dev = std::max(tail_dev, std::abs(a[j]));
      }
      norm_dev = std::max(norm_dev, std::abs(std::sqrt(norm2) - 1.0));
      for (int k = i + 1; k <= n; ++k) {
        auto b = g.vertex(k);
        double dot = 0.0;
        for (int j = 0; j < n; ++j) dot += a[j] * b[j];
        dot_dev = std::max(dot_dev, std::abs(dot + 1.0 / n));
      }
    }
    for (double c : centroid) centroid_dev = std::max(centroid_dev, std::abs(c));
    for (const auto& p : g.vertices_at(1.7))
      vertices_on_boundary = vertices_on_boundary && g.classify(p, 1.7) == Membership::boundary;
  }
  auto push = [&](const std::string& name, double dev) {
    ctx.out.push_back({"geometry", name + " (n<=" + std::to_string(max_n) + ")", 0.0, dev, 0.0,
                       "max deviation <= 1e-12", dev <= 1e-12, false, ""});
  };
  push("unit vertex norms", norm_dev);
  push("centroid at origin", centroid_dev);
  push("zero tail components", tail_dev);
  push("pairwise dot products -1/n", dot_dev);
  ctx.out.push_back({"geometry", "scaled vertices classify as boundary", 1.0, vertices_on_boundary ? 1.0 : 0.0, 0.0,
                     "all vertices on boundary", vertices_on_boundary, false, ""});

  const std::size_t budget = ctx.options.budget;
  for (const EvolutionParams& p : ctx.grid_params()) {
    const SimplexGeometry g(p.n);
    const double t = ctx.time_of(ctx.options.grid.lambda_t.back());
    const double vt = p.v * t;
    RandomStream rng(ctx.seed(100 + p.n), 0);
    std::size_t hits = 0, mismatches = 0;
    std::vector<double> x(p.n), y(p.n + 1);
    const double eps = boundary_tolerance(vt);
    for (std::size_t s = 0; s < budget; ++s) {
      for (double& c : x) c = (2.0 * rng.uniform() - 1.0) * kBoxHalfWidth * vt;
      const Membership mem = g.classify(x, vt);
      g.y_values(x, vt, y);
      const double ymin = *std::min_element(y.begin(), y.end());
      if (mem == Membership::inside) ++hits;
      if (std::abs(ymin) <= 1e3 * eps) continue;
      if ((mem == Membership::inside) != (ymin > 0.0)) ++mismatches;
    }
    ctx.out.push_back({"geometry", "membership matches min y > 0, n=" + std::to_string(p.n), 0.0,
                       static_cast<double>(mismatches), 0.0, "zero mismatches", mismatches == 0, false, ""});
    const double box = std::pow(2.0 * kBoxHalfWidth * vt, p.n);
    const double frac = static_cast<double>(hits) / static_cast<double>(budget);
    const double est = box * frac;
    const double se = box * std::sqrt(frac * (1.0 - frac) / static_cast<double>(budget));
    const double target = g.volume(vt) * volume_factor(ctx.options.mutation);
    ctx.out.push_back({"geometry", "box hit-ratio volume, n=" + std::to_string(p.n), target, est, se,
                       "|estimate - volume| <= 3 se", std::abs(est - target) <= 3.0 * se, false, ""});
  }
}

void run_coefficients(Context& ctx) {
  double worst = 0.0;
  double worst_constant = 0.0;
  for (int n = 1; n <= 6; ++n) {
    const EvolutionParams p{n, ctx.options.grid.lambda, ctx.options.grid.v};
    const DerivedConstants c = constants_for(p, ctx.options.mutation);
    const double ratio = std::pow(c.alpha / (n + 1), n + 1);
    worst_constant = std::max(worst_constant, relative_error(ratio, c.pde_constant));
    for (int k = 1; k <= 30; ++k) {
      const double lhs = series_coefficient(n, c.alpha, k) * std::pow(static_cast<double>(k), n + 1);
      const double rhs = ratio * series_coefficient(n, c.alpha, k - 1);
      worst = std::max(worst, relative_error(lhs, rhs));
    }
  }
  ctx.out.push_back({"coefficients", "c_k k^{n+1} = (alpha/(n+1))^{n+1} c_{k-1}, k<=30, n<=6", 0.0, worst, 0.0,
                     "max relative error <= 1e-12", worst <= 1e-12, false, ""});
  ctx.out.push_back({"coefficients", "pde_constant = (alpha/(n+1))^{n+1}, n<=6", 0.0, worst_constant, 0.0,
                     "max relative error <= 1e-12", worst_constant <= 1e-12, false, ""});

  for (int n = 1; n <= 2; ++n) {
    const EvolutionParams p{n, ctx.options.grid.lambda, ctx.options.grid.v};
    const double alpha = constants_for(p, ctx.options.mutation).alpha;
    double worst_res = 0.0;
    for (int i = 0; i < 10; ++i) {
      const double z = 0.25 + 0.5 * i;
      worst_res = std::max(worst_res, hyper_bessel_ode_residual_richardson(n, alpha, z).residual);
    }
    ctx.out.push_back({"coefficients", "hyper-Bessel ODE residual, 10 arguments, n=" + std::to_string(n), 0.0,
                       worst_res, 0.0, "max relative residual <= 1e-2", worst_res <= 1e-2, false, ""});
  }
}

// Classical telegraph density with symmetric initial direction.
double telegraph_density(double lambda, double v, double t, double x) {
  const double s = std::sqrt(v * v * t * t - x * x);
  const double w = lambda / v * s;
  return std::exp(-lambda * t) / (2.0 * v) *
         (lambda * std::cyl_bessel_i(0.0, w) + lambda * v * t / s * std::cyl_bessel_i(1.0, w));
}

void run_telegraph(Context& ctx) {
  const double combos[5][3] = {{1, 1, 1}, {0.5, 1, 2}, {2, 0.5, 1}, {1, 2, 0.5}, {2, 2, 2}};
  for (const auto& c : combos) {
    const EvolutionParams p{1, c[0], c[1]};
    const double t = c[2];
    const DensityModel model(p, constants_for(p, ctx.options.mutation));
    const double vt = p.v * t;
    double worst = 0.0;
    for (int i = 0; i < 101; ++i) {
      const double x = -vt + (i + 1) * 2.0 * vt / 102.0;
      const double xs[1] = {x};
      worst = std::max(worst, std::abs(model(xs, t) - telegraph_density(p.lambda, p.v, t, x)));
    }
    ctx.out.push_back({"telegraph", format("n=1 lambda=%g v=%g t=%g, 101 interior points", c[0], c[1], c[2]), 0.0,
                       worst, 0.0, "max absolute deviation <= 1e-10", worst <= 1e-10, false, ""});
  }
}

void run_normalization(Context& ctx) {
  for (const EvolutionParams& p : ctx.grid_params()) {
    for (double lt : ctx.options.grid.lambda_t) {
      const double t = ctx.time_of(lt);
      const double target = ac_mass(p, t);
      const double chain = normalization_series_identity(p, t);
      const std::string tag = "n=" + std::to_string(p.n) + format(" lambda*t=%g", lt);
      ctx.out.push_back({"normalization", "closed-form chain " + tag, target, chain, 0.0,
                         "relative error <= 1e-12", relative_error(chain, target) <= 1e-12, false, ""});

      const DensityModel model(p, constants_for(p, ctx.options.mutation));
      auto r = normalization_report(model, t, ctx.options.budget, ctx.seed(200 + 17 * p.n) + static_cast<std::uint64_t>(lt * 1000),
                                    ctx.options.threads);
      r.check = "quadrature " + tag;
      ctx.out.push_back(r);

      const double exact = density_mass_closed_form(p, t);
      ctx.out.push_back({"normalization", "exact moment integral of the density " + tag, target, exact, 0.0,
                         "diagnostic: compare with ac_mass", relative_error(exact, target) <= 1e-10, true,
                         format("relative shortfall %.6g", (target - exact) / target)});
    }
  }
}

void run_bessel_integral(Context& ctx) {
  for (const EvolutionParams& p : ctx.grid_params()) {
    const DerivedConstants c = constants_for(p, ctx.options.mutation);
    const SimplexGeometry g(p.n);
    for (double lt : ctx.options.grid.lambda_t) {
      const double t = ctx.time_of(lt);
      const double vt = p.v * t;
      const Integrand f = [&](std::span<const double> x) {
        const auto yc = g.y_coordinates(x, vt);
        return yc.z ? eval_hyper_bessel(p.n, c.alpha * *yc.z).value : 0.0;
      };
      const auto est = integrate_over_simplex(g.vertices_at(vt), g.volume(vt) * volume_factor(ctx.options.mutation), f,
                                              ctx.options.budget, ctx.seed(300 + p.n) + static_cast<std::uint64_t>(lt * 1000),
                                              0, ctx.options.threads);
      const double target = analytic_bessel_integral(p, t);
      ctx.out.push_back({"bessel-integral", "n=" + std::to_string(p.n) + format(" lambda*t=%g", lt), target,
                         est.value, est.standard_error, "|estimate - series| <= 3 se",
                         std::abs(est.value - target) <= 3.0 * est.standard_error, false, ""});
    }
  }
}

void run_beta(Context& ctx) {
  for (int m = 1; m <= 5; ++m) {
    double worst = 0.0;
    bool pass = true;
    for (int k = 0; k <= 10; ++k) {
      const auto r = check_beta_integrals(k, m);
      worst = std::max(worst, relative_error(r.estimate, r.target));
      pass = pass && r.pass;
    }
    ctx.out.push_back({"beta", "Gamma-ratio closed forms, k<=10, m=" + std::to_string(m), 0.0, worst, 0.0,
                       "max relative error <= 1e-10", pass, false, ""});
  }
}

void run_remark(Context& ctx) {
  for (const EvolutionParams& p : ctx.grid_params()) {
    for (double lt : ctx.options.grid.lambda_t) {
      const double t = ctx.time_of(lt);
      const auto rc = remark_constant_check(p, t);
      const double closed = constants_for(p, ctx.options.mutation).prefactor;
      const double ratio = rc.volume_ratio / volume_factor(ctx.options.mutation);
      ctx.out.push_back({"remark", "prefactor = t^n/(n! Vol), n=" + std::to_string(p.n) + format(" t=%g", t), ratio,
                         closed, 0.0, "relative error <= 1e-12", relative_error(closed, ratio) <= 1e-12, false, ""});
    }
  }
}

int default_cells_per_edge(int n) {
  switch (n) {
    case 1: return 20;
    case 2: return 12;
    case 3: return 4;
    default: return 2;
  }
}

void run_mc_fit(Context& ctx) {
  for (const EvolutionParams& p : ctx.grid_params()) {
    const double t = ctx.time_of(ctx.options.grid.lambda_t.back());
    const std::string tag = "n=" + std::to_string(p.n) + format(" t=%g", t);
    SimulationConfig config;
    config.seed = ctx.seed(400 + p.n);
    config.samples = ctx.options.budget;
    config.horizon = t;
    config.threads = ctx.options.threads;
    const auto data = simulate_batch(p, config);

    const SimplexGeometry g(p.n);
    const double vt = p.v * t;
    std::size_t outside = 0, vertex_misses = 0;
    std::vector<std::size_t> switch_counts(p.n, 0);
    for (const auto& s : data) {
      if (g.classify(s.position, vt) == Membership::outside) ++outside;
      if (s.switches < static_cast<std::uint64_t>(p.n)) ++switch_counts[s.switches];
      if (s.switches == 0) {
        auto tau = g.vertex(s.initial_direction);
        for (int j = 0; j < p.n; ++j)
          if (std::abs(s.position[j] - vt * tau[j]) > 1e-12 * vt) {
            ++vertex_misses;
            break;
          }
      }
    }
    ctx.out.push_back({"mc-fit", "endpoints in closure of support " + tag, 0.0, static_cast<double>(outside), 0.0,
                       "zero endpoints outside", outside == 0, false, ""});
    ctx.out.push_back({"mc-fit", "unswitched endpoints at vt*tau_i0 " + tag, 0.0, static_cast<double>(vertex_misses),
                       0.0, "zero mismatches at 1e-12 vt", vertex_misses == 0, false, ""});
    const double N = static_cast<double>(data.size());
    double poisson = std::exp(-p.lambda * t);
    for (int k = 0; k < p.n; ++k) {
      const double frac = static_cast<double>(switch_counts[k]) / N;
      const double se = std::sqrt(poisson * (1.0 - poisson) / N);
      ctx.out.push_back({"mc-fit", "P{switches=" + std::to_string(k) + "} " + tag, poisson, frac, se,
                         "|empirical - Poisson| <= 3 se", std::abs(frac - poisson) <= 3.0 * se, false, ""});
      poisson *= p.lambda * t / (k + 1);
    }

    FitOptions fo;
    fo.cells_per_edge = default_cells_per_edge(p.n);
    fo.threads = ctx.options.threads;
    fo.quadrature_seed = ctx.seed(500 + p.n);
    VerificationReport r{"mc-fit", "chi-square vs f/ac_mass " + tag, 0.001, 0.0, 0.0, "p-value > 0.001", false,
                         false, ""};
    VerificationReport shape{"mc-fit", "shape-only chi-square vs f/density mass " + tag, 0.001, 0.0, 0.0,
                             "p-value > 0.001", false, true, ""};
    try {
      const FitReport fit = histogram_fit(p, data, t, fo);
      shape.estimate = fit.shape_p_value;
      shape.pass = fit.shape_p_value > 0.001;
      shape.detail = format("chi2=%.6g dof=%.0f", fit.shape_chi_square, fit.degrees_of_freedom);
      r.estimate = fit.p_value;
      r.pass = fit.p_value > 0.001;
      r.detail = format("chi2=%.6g dof=%.0f reduced=%.6g", fit.chi_square, fit.degrees_of_freedom,
                        fit.reduced_chi_square) +
                 format(" cells=%.0f density_mass/ac_mass=%.6g", static_cast<double>(fit.cells.size()),
                        fit.density_mass / fit.target_mass);
    } catch (const FitError& e) {
      r.detail = e.what();
      shape.detail = e.what();
    }
    ctx.out.push_back(r);
    ctx.out.push_back(shape);

    // Fixed initial direction against the same density: reported, not judged.
    SimulationConfig fixed = config;
    fixed.initial_direction = InitialDirection::fixed(0);
    fixed.seed = ctx.seed(600 + p.n);
    const auto fixed_data = simulate_batch(p, fixed);
    VerificationReport info{"mc-fit", "fixed:0 initial direction vs f/ac_mass " + tag, 0.001, 0.0, 0.0,
                            "p-value > 0.001", false, true, ""};
    try {
      const FitReport fit = histogram_fit(p, fixed_data, t, fo);
      info.estimate = fit.p_value;
      info.pass = fit.p_value > 0.001;
      info.detail = format("chi2=%.6g dof=%.0f reduced=%.6g", fit.chi_square, fit.degrees_of_freedom,
                           fit.reduced_chi_square);
    } catch (const FitError& e) {
      info.detail = e.what();
    }
    ctx.out.push_back(info);
  }
}

}  // namespace

RunResult run_all(const VerifyOptions& options) {
  RunResult result;
  if (options.budget == 0) {
    result.status = RunStatus::empty;
    return result;
  }
  if (options.grid.dimensions.empty() || options.grid.lambda_t.empty())
    throw InvalidArgument("verification grid must be non-empty");
  for (int n : options.grid.dimensions) EvolutionParams{n, options.grid.lambda, options.grid.v}.validate();
  for (double lt : options.grid.lambda_t)
    if (!(lt > 0.0) || !std::isfinite(lt)) throw InvalidArgument("lambda*t grid values must be finite and > 0");

  Context ctx{options, result.reports};
  const auto selected = [&](Suite s) { return options.suite == Suite::all || options.suite == s; };
  if (selected(Suite::geometry)) run_geometry(ctx);
  if (selected(Suite::coefficients)) run_coefficients(ctx);
  if (selected(Suite::telegraph)) run_telegraph(ctx);
  if (selected(Suite::normalization)) run_normalization(ctx);
  if (selected(Suite::bessel_integral)) run_bessel_integral(ctx);
  if (selected(Suite::beta)) run_beta(ctx);
  if (selected(Suite::remark)) run_remark(ctx);
  if (selected(Suite::mc_fit)) run_mc_fit(ctx);

  for (const auto& r : result.reports)
    if (!r.informational && !r.pass) ++result.failures;
  result.status = result.reports.empty() ? RunStatus::empty
                  : result.failures == 0 ? RunStatus::all_passed
                                         : RunStatus::failures;
  return result;
}

}  // namespace evolvekit
