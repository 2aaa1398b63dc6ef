#pragma once

#include <span>

#include "evolvekit/params.hpp"
#include "evolvekit/time_jet.hpp"

namespace evolvekit {

inline constexpr double kDefaultSeriesTol = 1e-12;

/// Result of summing the order-(n+1) hyper-Bessel series
///   I_{0,n}(w) = sum_k (w/(n+1))^{(n+1)k} / (k!)^{n+1}.
struct HyperBesselEval {
  int order = 0;  // n + 1
  double argument = 0.0;
  double value = 0.0;
  int terms_used = 0;
  double truncation_bound = 0.0;  // bound on the omitted tail
};

/// Sums terms until the geometric tail bound drops below tol * partial sum.
/// Requires n >= 1, finite w >= 0 and 0 < tol <= 1e-6.
HyperBesselEval eval_hyper_bessel(int n, double w, double tol = kDefaultSeriesTol);

/// c_k = (alpha/(n+1))^{(n+1)k} / (k!)^{n+1}, evaluated in log space.
/// Throws RangeError when the magnitude is not representable.
double series_coefficient(int n, double alpha, int k);

/// Constant multipliers of the density and of the product-derivative equation.
struct DerivedConstants {
  double alpha = 0.0;         // (lambda/v) sqrt(n(n+1)) / (2n+2)^{1/(2n+2)}
  double prefactor = 0.0;     // (sqrt n)^n / ((sqrt(n+1))^{n+1} v^n)
  double pde_constant = 0.0;  // (lambda/v)^{n+1} (n/(n+1))^{(n+1)/2} (2n+2)^{-1/2}

  static DerivedConstants from(const EvolutionParams& params);
};

/// Degree-n time jet of I_{0,n}(alpha * (y_1 ... y_{n+1})^{1/(n+1)}) given the
/// affine jets of the y-coordinates. The series is summed as sum_k c_k P^k on
/// the product jet P, so no fractional power is ever formed.
TimeJet jet_of_hyper_bessel(int n, double alpha, std::span<const TimeJet> y_jets,
                            double tol = kDefaultSeriesTol);

/// Relative residual |(z d/dz)^{n+1} g - (alpha z)^{n+1} g| / |g| for
/// g(z) = I_{0,n}(alpha z), with the Euler operator applied by nested central
/// differences of step h. Requires z - (n+1) h > 0.
double hyper_bessel_ode_residual(int n, double alpha, double z, double h);

struct OdeResidual {
  double residual = 0.0;
  double step = 0.0;  // finest step used
  int halvings = 0;
};

/// Same residual with Richardson extrapolation over successively halved steps,
/// stopping once two extrapolants agree to `agreement` relative.
OdeResidual hyper_bessel_ode_residual_richardson(int n, double alpha, double z,
                                                 double agreement = 1e-9, int max_halvings = 12);

}  // namespace evolvekit
