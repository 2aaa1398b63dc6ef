#include "evolvekit/simplex_cells.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "evolvekit/errors.hpp"

namespace evolvekit {

namespace {

// Lehmer rank of a permutation of 0..n-1.
std::size_t permutation_rank(std::span<const int> perm) {
  const std::size_t n = perm.size();
  std::size_t rank = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t smaller = 0;
    for (std::size_t j = i + 1; j < n; ++j)
      if (perm[j] < perm[i]) ++smaller;
    rank = rank * (n - i) + smaller;
  }
  return rank;
}

}  // namespace

SimplexSubdivision::SimplexSubdivision(int n, int cells_per_edge) : n_(n), m_(cells_per_edge) {
  if (n < 1) throw InvalidArgument("subdivision dimension must be >= 1");
  if (cells_per_edge < 1) throw InvalidArgument("cells per edge must be >= 1");
  permutations_ = 1;
  for (int i = 2; i <= n; ++i) permutations_ *= i;
  const double table = std::pow(static_cast<double>(m_), n) * static_cast<double>(permutations_);
  if (table > 5e7) throw InvalidArgument("subdivision too fine for the lookup table");
  lookup_.assign(static_cast<std::size_t>(table), -1);

  std::vector<int> base(n, 0);
  std::vector<int> order(n);
  for (;;) {
    const bool monotone = std::is_sorted(base.rbegin(), base.rend());
    if (monotone) {
      std::iota(order.begin(), order.end(), 0);
      do {
        bool valid = true;
        for (int j = 0; j + 1 < n && valid; ++j) {
          if (base[j] != base[j + 1]) continue;
          const auto pj = std::find(order.begin(), order.end(), j);
          const auto pk = std::find(order.begin(), order.end(), j + 1);
          valid = pj < pk;
        }
        if (valid) {
          lookup_[code(base, order)] = static_cast<std::ptrdiff_t>(cells_.size());
          cells_.push_back({base, order});
        }
      } while (std::next_permutation(order.begin(), order.end()));
    }
    int d = n - 1;
    while (d >= 0 && ++base[d] == m_) base[d--] = 0;
    if (d < 0) break;
  }
}

std::size_t SimplexSubdivision::code(std::span<const int> base, std::span<const int> order) const {
  std::size_t c = 0;
  for (int a : base) c = c * m_ + static_cast<std::size_t>(a);
  return c * permutations_ + permutation_rank(order);
}

std::size_t SimplexSubdivision::locate(std::span<const double> barycentric) const {
  if (barycentric.size() != static_cast<std::size_t>(n_ + 1)) throw InvalidArgument("expected n+1 barycentric weights");
  std::vector<double> u(n_);
  double acc = 0.0;
  for (int j = n_; j >= 1; --j) {
    acc += std::max(barycentric[j], 0.0) * m_;
    u[j - 1] = std::min(acc, static_cast<double>(m_));
  }
  std::vector<int> base(n_);
  std::vector<double> frac(n_);
  for (int j = 0; j < n_; ++j) {
    base[j] = std::min(static_cast<int>(std::floor(u[j])), m_ - 1);
    frac[j] = u[j] - base[j];
  }
  std::vector<int> order(n_);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return frac[a] > frac[b]; });
  const std::ptrdiff_t idx = lookup_[code(base, order)];
  if (idx < 0) throw OutsideSupport("point could not be assigned to a subdivision cell");
  return static_cast<std::size_t>(idx);
}

std::vector<std::vector<double>> SimplexSubdivision::cell_vertices(std::size_t c) const {
  const Cell& cell = cells_.at(c);
  std::vector<double> u(cell.base.begin(), cell.base.end());
  std::vector<std::vector<double>> corners;
  corners.reserve(n_ + 1);
  for (int step = 0; step <= n_; ++step) {
    if (step > 0) u[cell.order[step - 1]] += 1.0;
    std::vector<double> b(n_ + 1);
    b[0] = 1.0 - u[0] / m_;
    for (int j = 1; j < n_; ++j) b[j] = (u[j - 1] - u[j]) / m_;
    b[n_] = u[n_ - 1] / m_;
    corners.push_back(std::move(b));
  }
  return corners;
}

}  // namespace evolvekit
