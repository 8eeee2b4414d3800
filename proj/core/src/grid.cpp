#include "hfmri/grid.hpp"

#include <cmath>

namespace hfmri {

Grid make_grid(int n) {
  if (n < 2) throw std::invalid_argument("make_grid: N must be >= 2");
  return Grid{n};
}

PatchSupport make_support(int k1, int k2) {
  if (k1 < 1 || k2 < 1) throw std::invalid_argument("make_support: K1, K2 must be positive");
  return PatchSupport{k1, k2};
}

double ComplexImage::norm() const {
  double s = 0.0;
  for (const Complex& z : values_) s += std::norm(z);
  return std::sqrt(s);
}

double ComplexImage::max_abs() const {
  double m = 0.0;
  for (const Complex& z : values_) m = std::max(m, std::abs(z));
  return m;
}

double GradientPair::norm() const {
  const double a = w1.norm();
  const double b = w2.norm();
  return std::sqrt(a * a + b * b);
}

std::vector<std::pair<int, int>> contract(const Grid& grid, const PatchSupport& support) {
  if (support.k1 > grid.n || support.k2 > grid.n)
    throw std::invalid_argument("contract: patch support larger than grid");
  const int lo = grid.min_index();
  const int hi1 = grid.max_index() - (support.k1 - 1);
  const int hi2 = grid.max_index() - (support.k2 - 1);
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<std::size_t>(hi1 - lo + 1) * (hi2 - lo + 1));
  for (int k2 = lo; k2 <= hi2; ++k2)
    for (int k1 = lo; k1 <= hi1; ++k1) out.emplace_back(k1, k2);
  return out;
}

Filter reshape_filter(std::span<const Complex> column, const PatchSupport& support) {
  if (column.size() != static_cast<std::size_t>(support.size()))
    throw std::invalid_argument("reshape_filter: column length != K1*K2");
  Filter f(support);
  std::copy(column.begin(), column.end(), f.taps.begin());
  return f;
}

std::vector<Complex> flatten_filter(const Filter& filter) {
  return filter.taps;
}

}  // namespace hfmri
