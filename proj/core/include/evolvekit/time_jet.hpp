#pragma once

#include <span>
#include <vector>

namespace evolvekit {

/// Truncated Taylor expansion sum_m a_m eps^m of a function of time around a
/// base point. Arithmetic is exact polynomial arithmetic truncated at the
/// jet's degree; the m-th time derivative at the base point is m! * a_m.
class TimeJet {
 public:
  explicit TimeJet(int degree);
  TimeJet(int degree, double value, double slope = 0.0);

  static TimeJet constant(int degree, double value) { return TimeJet(degree, value, 0.0); }
  static TimeJet affine(int degree, double value, double slope) { return TimeJet(degree, value, slope); }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const double> coefficients() const { return coeffs_; }

  double operator[](int m) const { return coeffs_[m]; }
  double& operator[](int m) { return coeffs_[m]; }

  double value() const { return coeffs_[0]; }
  /// d^m/dt^m at the base point.
  double derivative(int m) const;

  TimeJet& operator+=(const TimeJet& other);
  TimeJet& operator-=(const TimeJet& other);
  TimeJet& operator*=(const TimeJet& other);
  TimeJet& operator*=(double s);

  TimeJet pow(unsigned exponent) const;

  /// out = a * b truncated; out must not alias a or b.
  static void multiply_into(const TimeJet& a, const TimeJet& b, TimeJet& out);

 private:
  std::vector<double> coeffs_;
};

TimeJet operator+(TimeJet a, const TimeJet& b);
TimeJet operator-(TimeJet a, const TimeJet& b);
TimeJet operator*(const TimeJet& a, const TimeJet& b);
TimeJet operator*(TimeJet a, double s);
TimeJet operator*(double s, TimeJet a);

}  // namespace evolvekit
