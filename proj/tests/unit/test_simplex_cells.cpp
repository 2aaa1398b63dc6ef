#include <doctest.h>

#include <cmath>
#include <vector>

#include "evolvekit/errors.hpp"
#include "evolvekit/random.hpp"
#include "evolvekit/simplex_cells.hpp"

using namespace evolvekit;

namespace {

// Volume of a cell in the coordinates (b_1..b_n), up to the common n! factor.
double cell_volume(const std::vector<std::vector<double>>& corners) {
  const std::size_t n = corners.size() - 1;
  std::vector<std::vector<double>> a(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = corners[i + 1][j + 1] - corners[0][j + 1];
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    std::swap(a[p], a[c]);
    if (a[c][c] == 0.0) return 0.0;
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return std::abs(det);
}

}  // namespace

TEST_CASE("subdivision sizes and equal volumes") {
  for (int n = 1; n <= 4; ++n)
    for (int m = 1; m <= 5; ++m) {
      CAPTURE(n);
      CAPTURE(m);
      const SimplexSubdivision s(n, m);
      REQUIRE(s.size() == static_cast<std::size_t>(std::pow(m, n) + 0.5));
      double fact = 1.0;
      for (int i = 2; i <= n; ++i) fact *= i;
      for (std::size_t c = 0; c < s.size(); ++c) {
        const auto corners = s.cell_vertices(c);
        REQUIRE(corners.size() == static_cast<std::size_t>(n + 1));
        for (const auto& b : corners) {
          double total = 0.0;
          for (double w : b) {
            CHECK(w >= -1e-15);
            total += w;
          }
          CHECK(total == doctest::Approx(1.0));
        }
        CHECK(cell_volume(corners) == doctest::Approx(1.0 / std::pow(m, n)).epsilon(1e-12));
      }
    }
}

TEST_CASE("cell centroids locate their own cell") {
  for (int n = 1; n <= 3; ++n) {
    const SimplexSubdivision s(n, 6);
    for (std::size_t c = 0; c < s.size(); ++c) {
      const auto corners = s.cell_vertices(c);
      std::vector<double> centroid(n + 1, 0.0);
      for (const auto& b : corners)
        for (int i = 0; i <= n; ++i) centroid[i] += b[i] / (n + 1);
      CHECK(s.locate(centroid) == c);
    }
  }
}

TEST_CASE("uniform points fill cells evenly") {
  const int n = 2, m = 5;
  const SimplexSubdivision s(n, m);
  std::vector<int> hits(s.size(), 0);
  RandomStream rng(3, 0);
  const int count = 100000;
  std::vector<double> b(n + 1);
  for (int i = 0; i < count; ++i) {
    double total = 0.0;
    for (double& w : b) total += (w = rng.standard_exponential());
    for (double& w : b) w /= total;
    ++hits[s.locate(b)];
  }
  const double expected = static_cast<double>(count) / s.size();
  double chi2 = 0.0;
  for (int h : hits) chi2 += (h - expected) * (h - expected) / expected;
  CHECK(chi2 < 51.18);  // chi-square(24) upper 0.1% point
}

TEST_CASE("corner points and clamping") {
  const SimplexSubdivision s(2, 4);
  const double vertex[3] = {1.0, 0.0, 0.0};
  const double noisy[3] = {1.0 + 1e-16, -1e-16, 0.0};
  CHECK(s.locate(vertex) < s.size());
  CHECK(s.locate(noisy) == s.locate(vertex));
  CHECK_THROWS_AS(SimplexSubdivision(0, 3), InvalidArgument);
  CHECK_THROWS_AS(SimplexSubdivision(2, 0), InvalidArgument);
}
