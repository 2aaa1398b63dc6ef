#include "evolvekit/special_functions.hpp"

#include <cfloat>
#include <cmath>
#include <functional>
#include <string>

#include "evolvekit/errors.hpp"

namespace evolvekit {

namespace {

constexpr int kMaxTerms = 100000;

void require_dimension(int n) {
  if (n < 1) throw InvalidArgument("dimension n must be >= 1, got " + std::to_string(n));
}

double ipow(double base, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

HyperBesselEval eval_hyper_bessel(int n, double w, double tol) {
  require_dimension(n);
  if (!std::isfinite(w)) throw InvalidArgument("hyper-Bessel argument must be finite");
  if (w < 0.0) throw InvalidArgument("hyper-Bessel argument must be >= 0");
  if (!(tol > 0.0) || tol > 1e-6) throw InvalidArgument("series tolerance must lie in (0, 1e-6]");

  const int order = n + 1;
  const double q = ipow(w / order, order);
  double term = 1.0;
  double sum = 1.0;
  double bound = 0.0;
  int k = 0;
  for (;;) {
    const double r = q / ipow(k + 1.0, order);
    if (r < 1.0) {
      bound = term * r / (1.0 - r);
      if (bound <= tol * sum) break;
    }
    if (++k > kMaxTerms) throw RangeError("hyper-Bessel series did not converge");
    term *= r;
    sum += term;
    if (!std::isfinite(sum)) throw RangeError("hyper-Bessel series overflowed");
  }
  return HyperBesselEval{order, w, sum, k + 1, bound};
}

double series_coefficient(int n, double alpha, int k) {
  require_dimension(n);
  if (k < 0) throw InvalidArgument("series index k must be >= 0");
  if (!std::isfinite(alpha) || alpha < 0.0) throw InvalidArgument("alpha must be finite and >= 0");
  if (k == 0) return 1.0;
  if (alpha == 0.0) return 0.0;
  const int order = n + 1;
  const double log_c = order * (k * std::log(alpha / order) - std::lgamma(k + 1.0));
  if (log_c > std::log(DBL_MAX)) throw RangeError("series coefficient overflows double");
  if (log_c < std::log(DBL_MIN)) throw RangeError("series coefficient underflows double");
  return std::exp(log_c);
}

DerivedConstants DerivedConstants::from(const EvolutionParams& params) {
  params.validate();
  const double n = params.n;
  const double order = n + 1.0;
  const double root = std::exp(std::log(2.0 * n + 2.0) / (2.0 * n + 2.0));
  DerivedConstants c;
  c.alpha = (params.lambda / params.v) * std::sqrt(n * order) / root;
  c.prefactor = std::exp(0.5 * n * std::log(n) - 0.5 * order * std::log(order) - n * std::log(params.v));
  c.pde_constant = std::exp(order * std::log(params.lambda / params.v) + 0.5 * order * std::log(n / order) -
                            0.5 * std::log(2.0 * n + 2.0));
  return c;
}

TimeJet jet_of_hyper_bessel(int n, double alpha, std::span<const TimeJet> y_jets, double tol) {
  require_dimension(n);
  if (y_jets.size() != static_cast<std::size_t>(n + 1)) throw InvalidArgument("expected n+1 y-coordinate jets");
  if (!(tol > 0.0) || tol > 1e-6) throw InvalidArgument("series tolerance must lie in (0, 1e-6]");
  const int degree = y_jets[0].degree();
  for (const auto& y : y_jets) {
    if (y.degree() != degree) throw InvalidArgument("y-coordinate jets must share a degree");
    if (y.value() < 0.0) throw OutsideSupport("y-coordinate jet with negative base value");
  }

  TimeJet product = y_jets[0];
  TimeJet scratch(degree);
  for (std::size_t i = 1; i < y_jets.size(); ++i) {
    TimeJet::multiply_into(product, y_jets[i], scratch);
    std::swap(product, scratch);
  }

  // Termwise ratio c_k / c_{k-1} = C / k^{n+1}. Convergence of every slot is
  // controlled by the majorant series sum_k c_k p^k with p = sum_m |P_m|.
  const int order = n + 1;
  const double big_c = ipow(alpha / order, order);
  double p = 0.0;
  for (double c : product.coefficients()) p += std::abs(c);

  TimeJet term = TimeJet::constant(degree, 1.0);
  TimeJet sum = term;
  double majorant = 1.0;
  for (int k = 0;; ++k) {
    const double r = big_c * p / ipow(k + 1.0, order);
    if (r < 1.0) {
      double scale = 0.0;
      for (double c : sum.coefficients()) scale += std::abs(c);
      if (majorant * r / (1.0 - r) <= tol * scale) break;
    }
    if (k >= kMaxTerms) throw RangeError("hyper-Bessel jet series did not converge");
    TimeJet::multiply_into(term, product, scratch);
    scratch *= big_c / ipow(k + 1.0, order);
    std::swap(term, scratch);
    sum += term;
    majorant *= r;
    if (!std::isfinite(sum.value()) || !std::isfinite(majorant)) throw RangeError("hyper-Bessel jet series overflowed");
  }
  return sum;
}

namespace {

// (z d/dz)^power g at z by nested central differences.
double euler_operator(const std::function<double(double)>& g, int power, double z, double h) {
  if (power == 0) return g(z);
  const double up = euler_operator(g, power - 1, z + h, h);
  const double down = euler_operator(g, power - 1, z - h, h);
  return z * (up - down) / (2.0 * h);
}

}  // namespace

double hyper_bessel_ode_residual(int n, double alpha, double z, double h) {
  require_dimension(n);
  if (!(h > 0.0) || !std::isfinite(z)) throw InvalidArgument("step h must be > 0 and z finite");
  if (!(z - (n + 1) * h > 0.0)) throw InvalidArgument("step too large: need z - (n+1) h > 0");
  auto g = [&](double s) { return eval_hyper_bessel(n, alpha * s, 1e-15).value; };
  const double gz = g(z);
  const double lhs = euler_operator(g, n + 1, z, h);
  const double rhs = ipow(alpha * z, n + 1) * gz;
  return std::abs(lhs - rhs) / std::abs(gz);
}

OdeResidual hyper_bessel_ode_residual_richardson(int n, double alpha, double z, double agreement, int max_halvings) {
  require_dimension(n);
  if (!(z > 0.0) || !std::isfinite(z)) throw InvalidArgument("z must be finite and > 0");
  auto g = [&](double s) { return eval_hyper_bessel(n, alpha * s, 1e-15).value; };
  const double gz = g(z);
  const double rhs = ipow(alpha * z, n + 1) * gz;

  double h = 0.5 * z / (n + 1);
  double coarse = euler_operator(g, n + 1, z, h);
  double prev_extrapolant = NAN;
  double best = NAN;
  double best_change = INFINITY;
  OdeResidual out;
  for (int j = 1; j <= max_halvings; ++j) {
    h *= 0.5;
    const double fine = euler_operator(g, n + 1, z, h);
    const double extrapolant = (4.0 * fine - coarse) / 3.0;
    if (!std::isnan(prev_extrapolant)) {
      const double change = std::abs(extrapolant - prev_extrapolant) / std::abs(gz);
      if (change < best_change) {
        best_change = change;
        best = extrapolant;
        out.step = h;
        out.halvings = j;
      }
      if (change <= agreement) break;
    }
    prev_extrapolant = extrapolant;
    coarse = fine;
  }
  if (std::isnan(best)) best = prev_extrapolant;
  out.residual = std::abs(best - rhs) / std::abs(gz);
  return out;
}

}  // namespace evolvekit
