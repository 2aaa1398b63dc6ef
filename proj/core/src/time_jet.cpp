#include "evolvekit/time_jet.hpp"

#include <algorithm>

#include "evolvekit/errors.hpp"

namespace evolvekit {

TimeJet::TimeJet(int degree) {
  if (degree < 0) throw InvalidArgument("jet degree must be >= 0");
  coeffs_.assign(degree + 1, 0.0);
}

TimeJet::TimeJet(int degree, double value, double slope) : TimeJet(degree) {
  coeffs_[0] = value;
  if (degree >= 1) coeffs_[1] = slope;
}

double TimeJet::derivative(int m) const {
  double f = 1.0;
  for (int i = 2; i <= m; ++i) f *= i;
  return f * coeffs_[m];
}

TimeJet& TimeJet::operator+=(const TimeJet& other) {
  if (other.degree() != degree()) throw InvalidArgument("jet degree mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

TimeJet& TimeJet::operator-=(const TimeJet& other) {
  if (other.degree() != degree()) throw InvalidArgument("jet degree mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

void TimeJet::multiply_into(const TimeJet& a, const TimeJet& b, TimeJet& out) {
  const int d = a.degree();
  if (b.degree() != d || out.degree() != d) throw InvalidArgument("jet degree mismatch");
  for (int m = 0; m <= d; ++m) {
    double s = 0.0;
    for (int i = 0; i <= m; ++i) s += a.coeffs_[i] * b.coeffs_[m - i];
    out.coeffs_[m] = s;
  }
}

TimeJet& TimeJet::operator*=(const TimeJet& other) {
  TimeJet out(degree());
  multiply_into(*this, other, out);
  coeffs_.swap(out.coeffs_);
  return *this;
}

TimeJet& TimeJet::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

TimeJet TimeJet::pow(unsigned exponent) const {
  TimeJet result = constant(degree(), 1.0);
  TimeJet base = *this;
  while (exponent > 0) {
    if (exponent & 1u) result *= base;
    exponent >>= 1u;
    if (exponent > 0) base *= base;
  }
  return result;
}

TimeJet operator+(TimeJet a, const TimeJet& b) { return a += b; }
TimeJet operator-(TimeJet a, const TimeJet& b) { return a -= b; }
TimeJet operator*(const TimeJet& a, const TimeJet& b) {
  TimeJet out(a.degree());
  TimeJet::multiply_into(a, b, out);
  return out;
}
TimeJet operator*(TimeJet a, double s) { return a *= s; }
TimeJet operator*(double s, TimeJet a) { return a *= s; }

}  // namespace evolvekit
