#include "evolvekit/geometry.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>
#include <string>

#include "evolvekit/errors.hpp"

namespace evolvekit {

void EvolutionParams::validate() const {
  if (n < 1) throw InvalidArgument("dimension n must be >= 1, got " + std::to_string(n));
  if (!std::isfinite(lambda) || lambda <= 0.0) throw InvalidArgument("switching rate lambda must be finite and > 0");
  if (!std::isfinite(v) || v <= 0.0) throw InvalidArgument("speed v must be finite and > 0");
}

std::string_view to_string(Membership m) {
  switch (m) {
    case Membership::inside: return "inside";
    case Membership::boundary: return "boundary";
    case Membership::outside: return "outside";
  }
  return "unknown";
}

double boundary_tolerance(double vt) { return 1e-9 * std::max(vt, DBL_MIN); }

double YCoordinates::min() const { return *std::min_element(y.begin(), y.end()); }

double YCoordinates::require_z() const {
  if (!z) throw OutsideSupport("geometric mean of y-coordinates requested outside the support");
  return *z;
}

namespace {

// sum_{i=a}^{b} ln i, zero for an empty range.
double log_range(int a, int b) {
  double s = 0.0;
  for (int i = a; i <= b; ++i) s += std::log(static_cast<double>(i));
  return s;
}

// Telescoping coefficient sqrt(((n-j)...(n-K+1)) / ((n-j+2)...(n-K+3))) multiplying
// x_j (1-based) in the K-th chained bound. K = n+1 addresses the last
// y-coordinate, where the vanishing factor drops out: (n-j)...1 / (n-j+2)...3.
double telescoping(int n, int big_k, int j) {
  const int lo = std::max(n - big_k + 1, 1);
  return std::exp(0.5 * (log_range(lo, n - j) - log_range(lo + 2, n - j + 2)));
}

}  // namespace

SimplexGeometry::SimplexGeometry(int n) : n_(n) {
  if (n < 1) throw InvalidArgument("dimension n must be >= 1, got " + std::to_string(n));
  const double dn = n;

  vertices_.assign(static_cast<std::size_t>(n + 1) * n, 0.0);
  for (int i = 0; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      double c = 0.0;
      if (j < i + 1) {
        c = -(1.0 / dn) * std::sqrt(dn * (dn + 1.0) / ((dn - j + 1.0) * (dn - j + 2.0)));
      } else if (j == i + 1) {
        c = std::sqrt((dn + 1.0) * (dn - i) / (dn * (dn - i + 1.0)));
      }
      vertices_[static_cast<std::size_t>(i) * n + (j - 1)] = c;
    }
  }

  y_time_.assign(n + 1, 0.0);
  y_space_.assign(static_cast<std::size_t>(n + 1) * n, 0.0);
  lower_time_.assign(n, 0.0);
  upper_time_.assign(n, 0.0);
  lower_space_.assign(static_cast<std::size_t>(n) * n, 0.0);
  upper_space_.assign(static_cast<std::size_t>(n) * n, 0.0);

  // First axis: -vt/n < x_1 < vt, y_1 = vt/n + x_1.
  y_time_[0] = 1.0 / dn;
  y_space_[0] = 1.0;
  lower_time_[0] = -1.0 / dn;
  upper_time_[0] = 1.0;

  for (int big_k = 2; big_k <= n; ++big_k) {
    const int k = big_k - 1;
    const double inv = 1.0 / (n - big_k + 1);
    const double q1 = telescoping(n, big_k, 1);
    lower_time_[k] = -inv * q1;
    upper_time_[k] = q1;
    y_time_[k] = inv * q1;
    for (int j = 1; j < big_k; ++j) {
      const double q = telescoping(n, big_k, j);
      lower_space_[static_cast<std::size_t>(k) * n + (j - 1)] = inv * q;
      upper_space_[static_cast<std::size_t>(k) * n + (j - 1)] = -q;
      y_space_[static_cast<std::size_t>(k) * n + (j - 1)] = -inv * q;
    }
    y_space_[static_cast<std::size_t>(k) * n + k] = 1.0;
  }

  y_time_[n] = telescoping(n, n + 1, 1);
  for (int j = 1; j < n; ++j) y_space_[static_cast<std::size_t>(n) * n + (j - 1)] = -telescoping(n, n + 1, j);
  y_space_[static_cast<std::size_t>(n) * n + (n - 1)] = -1.0;
}

std::span<const double> SimplexGeometry::vertex(int i) const {
  if (i < 0 || i > n_) throw InvalidArgument("vertex index out of range");
  return {vertices_.data() + static_cast<std::size_t>(i) * n_, static_cast<std::size_t>(n_)};
}

std::vector<std::vector<double>> SimplexGeometry::vertices_at(double vt) const {
  std::vector<std::vector<double>> out;
  out.reserve(n_ + 1);
  for (int i = 0; i <= n_; ++i) {
    auto tau = vertex(i);
    std::vector<double> p(tau.begin(), tau.end());
    for (double& c : p) c *= vt;
    out.push_back(std::move(p));
  }
  return out;
}

double SimplexGeometry::volume(double vt) const {
  const double dn = n_;
  const double unit = std::exp(0.5 * (dn + 1.0) * std::log(dn + 1.0) - 0.5 * dn * std::log(dn) - std::lgamma(dn + 1.0));
  return unit * std::pow(vt, n_);
}

Membership SimplexGeometry::classify(std::span<const double> x, double vt) const {
  if (x.size() != static_cast<std::size_t>(n_)) throw InvalidArgument("point dimension does not match n");
  const double eps = boundary_tolerance(vt);
  double min_slack = INFINITY;
  for (int k = 0; k < n_; ++k) {
    double lo = lower_time_[k] * vt;
    double hi = upper_time_[k] * vt;
    for (int j = 0; j < k; ++j) {
      lo += lower_space_[static_cast<std::size_t>(k) * n_ + j] * x[j];
      hi += upper_space_[static_cast<std::size_t>(k) * n_ + j] * x[j];
    }
    min_slack = std::min({min_slack, x[k] - lo, hi - x[k]});
  }
  if (std::isnan(min_slack) || min_slack < -eps) return Membership::outside;
  if (min_slack <= eps) return Membership::boundary;
  return Membership::inside;
}

void SimplexGeometry::y_values(std::span<const double> x, double vt, std::span<double> out) const {
  for (int k = 0; k <= n_; ++k) {
    double y = y_time_[k] * vt;
    const double* row = y_space_.data() + static_cast<std::size_t>(k) * n_;
    for (int j = 0; j < n_; ++j) y += row[j] * x[j];
    out[k] = y;
  }
}

YCoordinates SimplexGeometry::y_coordinates(std::span<const double> x, double vt) const {
  if (x.size() != static_cast<std::size_t>(n_)) throw InvalidArgument("point dimension does not match n");
  YCoordinates yc;
  yc.y.resize(n_ + 1);
  y_values(x, vt, yc.y);
  const double lo = yc.min();
  if (lo == 0.0) {
    yc.z = 0.0;
  } else if (lo > 0.0) {
    double log_sum = 0.0;
    for (double y : yc.y) log_sum += std::log(y);
    yc.z = std::exp(log_sum / (n_ + 1));
  }
  return yc;
}

void SimplexGeometry::barycentric(std::span<const double> x, double vt, std::span<double> out) const {
  if (!(vt > 0.0)) throw InvalidArgument("barycentric coordinates need vt > 0");
  const double scale = n_ / ((n_ + 1.0) * vt);
  for (int i = 0; i <= n_; ++i) {
    auto tau = vertex(i);
    double dot = 0.0;
    for (int j = 0; j < n_; ++j) dot += tau[j] * x[j];
    out[i] = (dot + vt / n_) * scale;
  }
}

SimplexGeometry build_simplex(int n) { return SimplexGeometry(n); }

namespace {
void require_time(double t) {
  if (!std::isfinite(t) || t < 0.0) throw InvalidArgument("time t must be finite and >= 0");
}
}  // namespace

Membership support_contains(const EvolutionParams& params, std::span<const double> x, double t) {
  params.validate();
  require_time(t);
  return SimplexGeometry(params.n).classify(x, params.v * t);
}

YCoordinates to_y_coordinates(const EvolutionParams& params, std::span<const double> x, double t) {
  params.validate();
  require_time(t);
  return SimplexGeometry(params.n).y_coordinates(x, params.v * t);
}

double volume(const EvolutionParams& params, double t) {
  params.validate();
  require_time(t);
  return SimplexGeometry(params.n).volume(params.v * t);
}

std::vector<std::vector<double>> vertices_at_time(const EvolutionParams& params, double t) {
  params.validate();
  require_time(t);
  return SimplexGeometry(params.n).vertices_at(params.v * t);
}

}  // namespace evolvekit
