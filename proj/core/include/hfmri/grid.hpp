#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hfmri {

using Complex = std::complex<double>;

/// Centered square index grid {-floor(N/2), ..., -floor(N/2)+N-1}^2.
/// Index (0,0) always belongs to the grid; the first axis varies fastest
/// in every flattened ordering derived from it.
struct Grid {
  int n = 0;

  int half() const { return n / 2; }
  int min_index() const { return -half(); }
  int max_index() const { return n - half() - 1; }
  std::size_t size() const { return static_cast<std::size_t>(n) * n; }

  bool contains(int k1, int k2) const {
    return k1 >= min_index() && k1 <= max_index() && k2 >= min_index() && k2 <= max_index();
  }

  /// Storage slot of grid index (k1, k2), first axis fastest.
  std::size_t pos(int k1, int k2) const {
    return static_cast<std::size_t>(k1 + half()) + static_cast<std::size_t>(n) * (k2 + half());
  }

  /// Grid index stored at slot p.
  std::pair<int, int> index_at(std::size_t p) const {
    const int i1 = static_cast<int>(p % n);
    const int i2 = static_cast<int>(p / n);
    return {i1 - half(), i2 - half()};
  }

  /// Wraps an arbitrary integer index onto the grid (periodic extension).
  int wrap(int k) const {
    int m = (k + half()) % n;
    if (m < 0) m += n;
    return m - half();
  }

  bool operator==(const Grid&) const = default;
};

Grid make_grid(int n);

/// Rectangular filter support {0,...,K1-1} x {0,...,K2-1}.
struct PatchSupport {
  int k1 = 0;
  int k2 = 0;

  int size() const { return k1 * k2; }

  /// Slot of offset (l1, l2), first axis fastest; inverse of offset_at.
  int pos(int l1, int l2) const { return l1 + k1 * l2; }
  std::pair<int, int> offset_at(int p) const { return {p % k1, p / k1}; }

  bool operator==(const PatchSupport&) const = default;
};

PatchSupport make_support(int k1, int k2);

/// Complex-valued array over a centered grid; the shared carrier for
/// k-space data and image-domain samples.
class ComplexImage {
public:
  ComplexImage() = default;
  explicit ComplexImage(Grid grid) : grid_(grid), values_(grid.size(), Complex{}) {}
  ComplexImage(Grid grid, std::vector<Complex> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw std::invalid_argument("ComplexImage: value count != N^2");
  }

  const Grid& grid() const { return grid_; }
  int n() const { return grid_.n; }

  Complex& at(int k1, int k2) { return values_[grid_.pos(k1, k2)]; }
  const Complex& at(int k1, int k2) const { return values_[grid_.pos(k1, k2)]; }

  std::span<Complex> values() { return values_; }
  std::span<const Complex> values() const { return values_; }

  double norm() const;
  double max_abs() const;

private:
  Grid grid_;
  std::vector<Complex> values_;
};

/// Real-valued array over a centered grid (magnitude images, edge maps).
class RealImage {
public:
  RealImage() = default;
  explicit RealImage(Grid grid) : grid_(grid), values_(grid.size(), 0.0) {}
  RealImage(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw std::invalid_argument("RealImage: value count != N^2");
  }

  const Grid& grid() const { return grid_; }
  int n() const { return grid_.n; }

  double& at(int k1, int k2) { return values_[grid_.pos(k1, k2)]; }
  const double& at(int k1, int k2) const { return values_[grid_.pos(k1, k2)]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

private:
  Grid grid_;
  std::vector<double> values_;
};

/// Two-channel image (w1, w2) = gradient-weighted k-space.
struct GradientPair {
  ComplexImage w1;
  ComplexImage w2;

  GradientPair() = default;
  explicit GradientPair(Grid grid) : w1(grid), w2(grid) {}
  GradientPair(ComplexImage a, ComplexImage b) : w1(std::move(a)), w2(std::move(b)) {
    if (w1.grid() != w2.grid()) throw std::invalid_argument("GradientPair: channel grids differ");
  }

  const Grid& grid() const { return w1.grid(); }
  ComplexImage& channel(int i) { return i == 0 ? w1 : w2; }
  const ComplexImage& channel(int i) const { return i == 0 ? w1 : w2; }

  double norm() const;
};

/// 2-D complex filter on a PatchSupport; taps stored first-axis-fastest so
/// the flat view coincides with the matrix-column convention everywhere.
struct Filter {
  PatchSupport support;
  std::vector<Complex> taps;

  Filter() = default;
  explicit Filter(PatchSupport s) : support(s), taps(static_cast<std::size_t>(s.size()), Complex{}) {}

  Complex& at(int l1, int l2) { return taps[support.pos(l1, l2)]; }
  const Complex& at(int l1, int l2) const { return taps[support.pos(l1, l2)]; }
};

/// Contraction O:K = {k in O : k + j in O for all j in K}, ordered first
/// axis fastest. Size is (N-K1+1)(N-K2+1).
std::vector<std::pair<int, int>> contract(const Grid& grid, const PatchSupport& support);

/// Bijection between a length-M2 column vector and a K1 x K2 filter.
Filter reshape_filter(std::span<const Complex> column, const PatchSupport& support);
std::vector<Complex> flatten_filter(const Filter& filter);

}  // namespace hfmri
