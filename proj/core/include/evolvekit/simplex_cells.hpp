#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace evolvekit {

/// Freudenthal subdivision of an n-simplex into m^n cells of equal volume,
/// addressed in barycentric coordinates. With u_j = m (b_j + ... + b_n) the
/// simplex becomes {m >= u_1 >= ... >= u_n >= 0}; each cell is a Kuhn simplex
/// of the unit-cube lattice, identified by its base corner and by the order of
/// the fractional parts. For n = 1 the cells are m equal intervals.
class SimplexSubdivision {
 public:
  SimplexSubdivision(int n, int cells_per_edge);

  int dimension() const { return n_; }
  int cells_per_edge() const { return m_; }
  std::size_t size() const { return cells_.size(); }

  /// Cell containing the point with barycentric weights b (n+1 entries).
  /// Slightly negative weights from roundoff are clamped to the simplex.
  std::size_t locate(std::span<const double> barycentric) const;

  /// Barycentric weights of the n+1 corners of cell c, one row per corner.
  std::vector<std::vector<double>> cell_vertices(std::size_t c) const;

 private:
  struct Cell {
    std::vector<int> base;   // lattice corner, non-increasing
    std::vector<int> order;  // axes by decreasing fractional part
  };

  std::size_t code(std::span<const int> base, std::span<const int> order) const;

  int n_;
  int m_;
  std::size_t permutations_;
  std::vector<Cell> cells_;
  std::vector<std::ptrdiff_t> lookup_;  // code -> cell index or -1
};

}  // namespace evolvekit
