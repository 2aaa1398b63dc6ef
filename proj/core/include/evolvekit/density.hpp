#pragma once

#include <span>
#include <vector>

#include "evolvekit/geometry.hpp"
#include "evolvekit/params.hpp"
#include "evolvekit/special_functions.hpp"

namespace evolvekit {

struct DensityValue {
  double value = 0.0;
  /// lambda^{n-m} d^m/dt^m I_{0,n}, m = 0..n (all zero off the open support).
  std::vector<double> operator_terms;
  Membership location = Membership::outside;
};

/// Absolutely continuous part of the position law at time t,
///   f(x, t) = prefactor e^{-lambda t} sum_m lambda^{n-m} d^m/dt^m I_{0,n}(alpha z(x, t)),
/// for a uniformly random initial direction. The time derivatives are taken
/// at fixed x through truncated Taylor jets of the y-coordinates. The density
/// is reported as 0 on the boundary and outside the open simplex.
class DensityModel {
 public:
  explicit DensityModel(const EvolutionParams& params);
  /// Uses caller-supplied constants instead of the closed forms.
  DensityModel(const EvolutionParams& params, const DerivedConstants& constants);

  const EvolutionParams& params() const { return params_; }
  const SimplexGeometry& geometry() const { return geometry_; }
  const DerivedConstants& constants() const { return constants_; }

  DensityValue evaluate(std::span<const double> x, double t, double tol = kDefaultSeriesTol) const;

  /// Value only; skips the operator-term breakdown.
  double operator()(std::span<const double> x, double t, double tol = kDefaultSeriesTol) const;

 private:
  double evaluate_inside(std::span<const double> x, double t, double tol, std::vector<double>* terms) const;

  EvolutionParams params_;
  SimplexGeometry geometry_;
  DerivedConstants constants_;
};

DensityValue density(const EvolutionParams& params, std::span<const double> x, double t,
                     double tol = kDefaultSeriesTol);

/// Mass of the singular component: e^{-lambda t} sum_{k<n} (lambda t)^k / k!.
double boundary_probability(const EvolutionParams& params, double t);

/// Mass of the absolutely continuous component, the Poisson tail P{N(t) >= n}.
double ac_mass(const EvolutionParams& params, double t);

/// Closed-form series for the integral of I_{0,n}(alpha z) over the support:
///   (v/lambda)^n (sqrt(n+1))^{n+1} / (sqrt n)^n sum_k (lambda t)^{(n+1)(k+1)-1} / ((n+1)(k+1)-1)!
double analytic_bessel_integral(const EvolutionParams& params, double t, double tol = kDefaultSeriesTol);

/// d^m/dt^m of analytic_bessel_integral, summed termwise.
double analytic_bessel_integral_derivative(const EvolutionParams& params, double t, int m,
                                           double tol = kDefaultSeriesTol);

/// Normalization reached by the moving-domain argument: the integral of the
/// operator applied to I_{0,n} is taken as
///   lambda^n F + sum_{m>=1} lambda^{n-m} (F^{(m)} - Vol^{(m)})
/// with F = analytic_bessel_integral, then multiplied by prefactor e^{-lambda t}.
double normalization_series_identity(const EvolutionParams& params, double t, double tol = kDefaultSeriesTol);

struct RemarkConstants {
  double closed_form = 0.0;   // (sqrt n)^n / ((sqrt(n+1))^{n+1} v^n)
  double volume_ratio = 0.0;  // t^n / (n! Vol T_vt)
};

RemarkConstants remark_constant_check(const EvolutionParams& params, double t);

}  // namespace evolvekit
