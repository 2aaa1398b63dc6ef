#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evolvekit/params.hpp"

namespace evolvekit {

struct QuadratureEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
};

struct VerificationReport {
  std::string suite;
  std::string check;
  double target = 0.0;
  double estimate = 0.0;
  double error = 0.0;  // standard error of the estimate, 0 for deterministic checks
  std::string rule;
  bool pass = false;
  /// Reported for context only; never counted as a failure.
  bool informational = false;
  std::string detail;
};

using Integrand = std::function<double(std::span<const double>)>;

/// Points uniform on T_vt: Dirichlet(1,...,1) weights from normalized
/// exponential spacings applied to the vertices vt * tau_i.
std::vector<std::vector<double>> sample_uniform_simplex(const EvolutionParams& params, double t, std::size_t count,
                                                        std::uint64_t seed);

/// Monte Carlo integral over the simplex with the given corners and volume.
/// Samples are drawn in blocks; block b uses RandomStream(seed, stream_base + b),
/// and block sums are combined in block order, so the estimate does not depend
/// on the thread count.
QuadratureEstimate integrate_over_simplex(const std::vector<std::vector<double>>& corners, double volume,
                                          const Integrand& integrand, std::size_t count, std::uint64_t seed,
                                          std::uint64_t stream_base = 0, unsigned threads = 0);

/// Vol T_vt times the sample mean of the integrand, with standard error Vol * sd / sqrt(count).
QuadratureEstimate integrate_over_support(const EvolutionParams& params, double t, const Integrand& integrand,
                                          std::size_t count, std::uint64_t seed, unsigned threads = 0);

/// Quadrature of the density against ac_mass; passes within max(3 sigma, 5e-3).
VerificationReport check_normalization(const EvolutionParams& params, double t, std::size_t count,
                                       std::uint64_t seed = 1, unsigned threads = 0);

/// Adaptive Gauss-Kronrod quadrature against the Gamma-ratio closed forms:
/// m = 1 checks int_{-1}^{1} (1 - z^2)^k dz = 2^{2k+1} (k!)^2 / (2k+1)!,
/// m >= 2 checks int_0^1 z^k (1 - z)^{m(k+1)-1} dz = G(m(k+1)) G(k+1) / G((m+1)(k+1)).
/// Passes at 1e-10 relative.
VerificationReport check_beta_integrals(int k, int m);

/// Exact integral of the density over T_vt from Dirichlet moments of the
/// y-coordinates: for each operator order m the k-th series term integrates to
///   Vol n! m! / ((n+1) t)^m (lambda t)^{(n+1)k} N(m,k) / ((n+1)k + n - m)!,
/// with N(m,k) the x^m coefficient of (sum_{j<=k} x^j / j!)^{n+1}.
double density_mass_closed_form(const EvolutionParams& params, double t, double tol = 1e-15);

enum class Suite { geometry, coefficients, telegraph, normalization, bessel_integral, beta, remark, mc_fit, all };

std::optional<Suite> parse_suite(std::string_view name);
std::string_view to_string(Suite suite);

/// Deliberate corruption of one constant, used to check that the harness
/// notices a wrong implementation.
enum class Mutation { none, prefactor, alpha, volume };

struct VerifyGrid {
  std::vector<int> dimensions{1, 2, 3};
  std::vector<double> lambda_t{0.5, 1.0, 2.0};
  double lambda = 1.0;
  double v = 1.0;
};

struct VerifyOptions {
  Suite suite = Suite::all;
  VerifyGrid grid;
  /// Monte Carlo sample count per stochastic check; 0 runs nothing.
  std::size_t budget = 200000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  Mutation mutation = Mutation::none;
};

enum class RunStatus { all_passed, failures, empty };

struct RunResult {
  std::vector<VerificationReport> reports;
  RunStatus status = RunStatus::empty;
  std::size_t failures = 0;
};

std::string_view to_string(RunStatus status);

RunResult run_all(const VerifyOptions& options);

}  // namespace evolvekit
