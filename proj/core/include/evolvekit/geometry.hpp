#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "evolvekit/params.hpp"

namespace evolvekit {

enum class Membership { inside, boundary, outside };

std::string_view to_string(Membership m);

/// Relative boundary tolerance: 1e-9 * max(vt, DBL_MIN).
double boundary_tolerance(double vt);

/// Affine coordinates y_1..y_{n+1} of a space-time point. Every y_i is
/// positive exactly on the open support; z is the geometric mean of the
/// y_i and is only engaged when all of them are non-negative.
struct YCoordinates {
  std::vector<double> y;
  std::optional<double> z;

  double min() const;
  /// Returns z or throws OutsideSupport.
  double require_z() const;
};

/// Regular (n+1)-hedron inscribed in the unit sphere of R^n, with vertex i
/// living in the span of the first i+1 coordinate axes. Also owns the
/// coefficient table of the y-coordinate transform and the chained support
/// inequalities, both precomputed once per dimension.
class SimplexGeometry {
 public:
  explicit SimplexGeometry(int n);

  int dimension() const { return n_; }
  int vertex_count() const { return n_ + 1; }

  /// Unit direction tau_i, i in [0, n].
  std::span<const double> vertex(int i) const;

  /// Vertices scaled by vt, i.e. the extreme points of the support at time t.
  std::vector<std::vector<double>> vertices_at(double vt) const;

  /// Volume of the support simplex with circumradius vt.
  double volume(double vt) const;

  /// Chained inequalities of the support, classified with boundary_tolerance(vt).
  Membership classify(std::span<const double> x, double vt) const;

  /// y-coordinates from the telescoping-product coefficients.
  YCoordinates y_coordinates(std::span<const double> x, double vt) const;

  /// Writes y_1..y_{n+1} into out (size n+1) without allocating.
  void y_values(std::span<const double> x, double vt, std::span<double> out) const;

  /// d y_k / d(vt); y_k is affine in vt with this slope.
  double y_time_coefficient(int k) const { return y_time_[k]; }
  /// Coefficient of x_j (0-based) in y_k (0-based, k in [0, n]).
  double y_space_coefficient(int k, int j) const { return y_space_[k * n_ + j]; }

  /// Barycentric weights of x with respect to the vertices vt*tau_i (sum to 1).
  void barycentric(std::span<const double> x, double vt, std::span<double> out) const;

 private:
  int n_;
  std::vector<double> vertices_;  // (n+1) x n, row-major
  std::vector<double> y_time_;    // n+1
  std::vector<double> y_space_;   // (n+1) x n
  // Support bounds: for axis k, lower/upper are affine in (x_0..x_{k-1}, vt).
  // bound = time * vt + sum_j space[j] * x_j
  std::vector<double> lower_time_, upper_time_;
  std::vector<double> lower_space_, upper_space_;  // n x n, row k uses j < k
};

SimplexGeometry build_simplex(int n);

Membership support_contains(const EvolutionParams& params, std::span<const double> x, double t);
YCoordinates to_y_coordinates(const EvolutionParams& params, std::span<const double> x, double t);
double volume(const EvolutionParams& params, double t);
std::vector<std::vector<double>> vertices_at_time(const EvolutionParams& params, double t);

}  // namespace evolvekit
