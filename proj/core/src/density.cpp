#include "evolvekit/density.hpp"

#include <cmath>
#include <algorithm>

#include "evolvekit/errors.hpp"

namespace evolvekit {

namespace {

void require_positive_time(double t) {
  if (!std::isfinite(t) || t <= 0.0) throw InvalidArgument("time t must be finite and > 0");
}

void require_time(double t) {
  if (!std::isfinite(t) || t < 0.0) throw InvalidArgument("time t must be finite and >= 0");
}

// log((sqrt(n+1))^{n+1} / (sqrt n)^n), the volume constant with n! removed.
double log_volume_constant(int n) {
  const double dn = n;
  return 0.5 * (dn + 1.0) * std::log(dn + 1.0) - 0.5 * dn * std::log(dn);
}

// x^e / e! by direct product, e >= 0.
double power_over_factorial(double x, int e) {
  double r = 1.0;
  for (int i = 1; i <= e; ++i) r *= x / i;
  return r;
}

// sum_{k>=0, e_k>=0} x^{e_k} / e_k!, e_k = step*k + offset.
double lacunary_exponential(double x, int step, int offset, double tol) {
  int k0 = 0;
  while (step * k0 + offset < 0) ++k0;
  int e = step * k0 + offset;
  double term = power_over_factorial(x, e);
  double sum = term;
  const double xs = std::pow(x, step);
  for (int guard = 0; guard < 1000000; ++guard) {
    double denom = 1.0;
    for (int i = 1; i <= step; ++i) denom *= (e + i);
    const double r = xs / denom;
    if (r < 1.0 && term * r / (1.0 - r) <= tol * sum) return sum;
    term *= r;
    sum += term;
    e += step;
    if (!std::isfinite(sum)) throw RangeError("exponential series overflowed");
  }
  throw RangeError("exponential series did not converge");
}

}  // namespace

DensityModel::DensityModel(const EvolutionParams& params)
    : DensityModel(params, DerivedConstants::from(params)) {}

DensityModel::DensityModel(const EvolutionParams& params, const DerivedConstants& constants)
    : params_(params), geometry_((params.validate(), params.n)), constants_(constants) {}

double DensityModel::evaluate_inside(std::span<const double> x, double t, double tol,
                                     std::vector<double>* terms) const {
  const int n = params_.n;
  const double vt = params_.v * t;
  std::vector<TimeJet> jets;
  jets.reserve(n + 1);
  for (int k = 0; k <= n; ++k) {
    double y = geometry_.y_time_coefficient(k) * vt;
    for (int j = 0; j < n; ++j) y += geometry_.y_space_coefficient(k, j) * x[j];
    // The density is only evaluated on the open support; clamp roundoff.
    jets.emplace_back(n, std::max(y, 0.0), geometry_.y_time_coefficient(k) * params_.v);
  }
  const TimeJet bessel = jet_of_hyper_bessel(n, constants_.alpha, jets, tol);

  double sum = 0.0;
  double lambda_power = std::pow(params_.lambda, n);
  for (int m = 0; m <= n; ++m) {
    const double term = lambda_power * bessel.derivative(m);
    if (terms) (*terms)[m] = term;
    sum += term;
    lambda_power /= params_.lambda;
  }
  return constants_.prefactor * std::exp(-params_.lambda * t) * sum;
}

DensityValue DensityModel::evaluate(std::span<const double> x, double t, double tol) const {
  require_positive_time(t);
  if (x.size() != static_cast<std::size_t>(params_.n)) throw InvalidArgument("point dimension does not match n");
  for (double c : x)
    if (!std::isfinite(c)) throw InvalidArgument("point coordinates must be finite");
  DensityValue out;
  out.operator_terms.assign(params_.n + 1, 0.0);
  out.location = geometry_.classify(x, params_.v * t);
  if (out.location == Membership::inside) out.value = evaluate_inside(x, t, tol, &out.operator_terms);
  return out;
}

double DensityModel::operator()(std::span<const double> x, double t, double tol) const {
  require_positive_time(t);
  if (x.size() != static_cast<std::size_t>(params_.n)) throw InvalidArgument("point dimension does not match n");
  if (geometry_.classify(x, params_.v * t) != Membership::inside) return 0.0;
  return evaluate_inside(x, t, tol, nullptr);
}

DensityValue density(const EvolutionParams& params, std::span<const double> x, double t, double tol) {
  return DensityModel(params).evaluate(x, t, tol);
}

double boundary_probability(const EvolutionParams& params, double t) {
  params.validate();
  require_time(t);
  const double mu = params.lambda * t;
  double term = 1.0;
  double sum = 0.0;
  for (int k = 0; k < params.n; ++k) {
    sum += term;
    term *= mu / (k + 1);
  }
  return std::exp(-mu) * sum;
}

double ac_mass(const EvolutionParams& params, double t) {
  params.validate();
  require_time(t);
  const double mu = params.lambda * t;
  if (mu > params.n) return 1.0 - boundary_probability(params, t);
  // Poisson tail summed directly; terms decrease from k = n on.
  double term = std::exp(-mu) * power_over_factorial(mu, params.n);
  double sum = 0.0;
  for (int k = params.n; term > 1e-18 * sum && k < params.n + 10000; ++k) {
    sum += term;
    term *= mu / (k + 1);
  }
  return sum;
}

double analytic_bessel_integral_derivative(const EvolutionParams& params, double t, int m, double tol) {
  params.validate();
  require_time(t);
  if (m < 0) throw InvalidArgument("derivative order must be >= 0");
  if (!(tol > 0.0) || tol > 1e-6) throw InvalidArgument("series tolerance must lie in (0, 1e-6]");
  const int n = params.n;
  const double series = lacunary_exponential(params.lambda * t, n + 1, n - m, std::min(tol, 1e-17));
  const double scale = std::exp(log_volume_constant(n) + n * std::log(params.v) + (m - n) * std::log(params.lambda));
  return scale * series;
}

double analytic_bessel_integral(const EvolutionParams& params, double t, double tol) {
  return analytic_bessel_integral_derivative(params, t, 0, tol);
}

double normalization_series_identity(const EvolutionParams& params, double t, double tol) {
  params.validate();
  require_time(t);
  const int n = params.n;
  const double volume_scale = std::exp(log_volume_constant(n) + n * std::log(params.v));
  double total = 0.0;
  for (int m = 0; m <= n; ++m) {
    double piece = analytic_bessel_integral_derivative(params, t, m, tol);
    // Moving-boundary term: the integrand equals 1 on the boundary, so each
    // time derivative of the domain integral sheds d^m/dt^m Vol T_vt.
    if (m >= 1) piece -= volume_scale * power_over_factorial(t, n - m);
    total += std::pow(params.lambda, n - m) * piece;
  }
  const DerivedConstants c = DerivedConstants::from(params);
  return c.prefactor * std::exp(-params.lambda * t) * total;
}

RemarkConstants remark_constant_check(const EvolutionParams& params, double t) {
  params.validate();
  require_positive_time(t);
  const SimplexGeometry geometry(params.n);
  RemarkConstants out;
  out.closed_form = DerivedConstants::from(params).prefactor;
  out.volume_ratio = std::exp(params.n * std::log(t) - std::lgamma(params.n + 1.0)) / geometry.volume(params.v * t);
  return out;
}

}  // namespace evolvekit
