#include <doctest.h>

#include <cmath>

#include "evolvekit/time_jet.hpp"

using namespace evolvekit;

TEST_CASE("affine jet derivatives") {
  const TimeJet a = TimeJet::affine(3, 2.0, 0.5);
  CHECK(a.value() == 2.0);
  CHECK(a.derivative(1) == 0.5);
  CHECK(a.derivative(2) == 0.0);
  CHECK(TimeJet::constant(2, 4.0).derivative(1) == 0.0);
}

TEST_CASE("products match the Taylor coefficients of polynomials") {
  // (1 + t)^4 = 1 + 4t + 6t^2 + 4t^3 + t^4, truncated at degree 3.
  const TimeJet p = TimeJet::affine(3, 1.0, 1.0).pow(4);
  CHECK(p[0] == doctest::Approx(1.0));
  CHECK(p[1] == doctest::Approx(4.0));
  CHECK(p[2] == doctest::Approx(6.0));
  CHECK(p[3] == doctest::Approx(4.0));
  CHECK(p.derivative(3) == doctest::Approx(24.0));

  const TimeJet a = TimeJet::affine(2, 2.0, 3.0);
  const TimeJet b = TimeJet::affine(2, -1.0, 5.0);
  const TimeJet c = a * b;  // (2+3t)(-1+5t) = -2 + 7t + 15t^2
  CHECK(c[0] == doctest::Approx(-2.0));
  CHECK(c[1] == doctest::Approx(7.0));
  CHECK(c[2] == doctest::Approx(15.0));
  TimeJet out(2);
  TimeJet::multiply_into(a, b, out);
  for (int m = 0; m <= 2; ++m) CHECK(out[m] == c[m]);
}

TEST_CASE("jet of a product matches finite differences") {
  // f(t) = (0.3 + 1.1t)(2 - 0.4t)(1 + 0.7t) at t = 0.
  TimeJet f = TimeJet::affine(3, 0.3, 1.1) * TimeJet::affine(3, 2.0, -0.4) * TimeJet::affine(3, 1.0, 0.7);
  auto eval = [](double t) { return (0.3 + 1.1 * t) * (2.0 - 0.4 * t) * (1.0 + 0.7 * t); };
  const double h = 1e-4;
  CHECK(f.derivative(1) == doctest::Approx((eval(h) - eval(-h)) / (2 * h)).epsilon(1e-7));
  CHECK(f.derivative(2) == doctest::Approx((eval(h) - 2 * eval(0) + eval(-h)) / (h * h)).epsilon(1e-5));
  CHECK(f.derivative(3) == doctest::Approx(6 * 1.1 * -0.4 * 0.7));
}

TEST_CASE("linear combinations") {
  TimeJet a = TimeJet::affine(1, 1.0, 2.0);
  const TimeJet b = TimeJet::affine(1, 3.0, -1.0);
  const TimeJet s = a + b;
  const TimeJet d = a - b;
  CHECK(s[0] == 4.0);
  CHECK(s[1] == 1.0);
  CHECK(d[0] == -2.0);
  CHECK(d[1] == 3.0);
  const TimeJet k = 2.0 * a;
  CHECK(k[1] == 4.0);
  a *= 0.5;
  CHECK(a[0] == 0.5);
}
