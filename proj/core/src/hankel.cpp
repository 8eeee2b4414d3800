#include "hfmri/hankel.hpp"

#include <vector>

#include "hfmri/conv.hpp"
#include "hfmri/fft.hpp"
#include "hfmri/parallel.hpp"

namespace hfmri {

namespace {

void fill_block(Eigen::MatrixXcd& m, Eigen::Index row0, const ComplexImage& w,
                const PatchSupport& support, HankelBoundary boundary) {
  const Grid& g = w.grid();
  if (boundary == HankelBoundary::interior) {
    const auto rows = contract(g, support);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto [k1, k2] = rows[r];
      for (int l2 = 0; l2 < support.k2; ++l2)
        for (int l1 = 0; l1 < support.k1; ++l1)
          m(row0 + static_cast<Eigen::Index>(r), support.pos(l1, l2)) = w.at(k1 + l1, k2 + l2);
    }
  } else {
    for (std::size_t p = 0; p < g.size(); ++p) {
      const auto [k1, k2] = g.index_at(p);
      for (int l2 = 0; l2 < support.k2; ++l2)
        for (int l1 = 0; l1 < support.k1; ++l1)
          m(row0 + static_cast<Eigen::Index>(p), support.pos(l1, l2)) =
              w.at(g.wrap(k1 + l1), g.wrap(k2 + l2));
    }
  }
}

std::size_t block_rows(const Grid& g, const PatchSupport& support, HankelBoundary boundary) {
  if (support.k1 > g.n || support.k2 > g.n)
    throw std::invalid_argument("hankel_explicit: patch support larger than grid");
  if (boundary == HankelBoundary::interior)
    return static_cast<std::size_t>(g.n - support.k1 + 1) * (g.n - support.k2 + 1);
  return g.size();
}

void check_cap(std::size_t rows, std::size_t cols, std::size_t cap) {
  if (rows * cols > cap)
    throw std::length_error("hankel_explicit: matrix too large (" + std::to_string(rows) + " x " +
                            std::to_string(cols) + " entries exceed cap)");
}

}  // namespace

HankelMatrix hankel_explicit(const ComplexImage& w, const PatchSupport& support,
                             HankelBoundary boundary, std::size_t max_entries) {
  const std::size_t rows = block_rows(w.grid(), support, boundary);
  const std::size_t cols = static_cast<std::size_t>(support.size());
  check_cap(rows, cols, max_entries);
  HankelMatrix h{Eigen::MatrixXcd(rows, cols), w.grid(), support, boundary, false};
  fill_block(h.m, 0, w, support, boundary);
  return h;
}

HankelMatrix hankel_explicit(const GradientPair& w, const PatchSupport& support,
                             HankelBoundary boundary, std::size_t max_entries) {
  const std::size_t rows = block_rows(w.grid(), support, boundary);
  const std::size_t cols = static_cast<std::size_t>(support.size());
  check_cap(2 * rows, cols, max_entries);
  HankelMatrix h{Eigen::MatrixXcd(2 * rows, cols), w.grid(), support, boundary, true};
  fill_block(h.m, 0, w.w1, support, boundary);
  fill_block(h.m, static_cast<Eigen::Index>(rows), w.w2, support, boundary);
  return h;
}

Eigen::MatrixXcd hankel_gram(const GradientPair& v_pair, std::span<const GradientPair> coeffs,
                             const PatchSupport& support) {
  const Grid& grid = v_pair.grid();
  const int m2 = support.size();
  if (coeffs.size() != static_cast<std::size_t>(m2))
    throw std::invalid_argument("hankel_gram: need one coefficient pair per filter");
  for (const GradientPair& c : coeffs)
    if (c.grid() != grid) throw std::invalid_argument("hankel_gram: coefficient grid mismatch");

  const std::vector<Complex> wspec1 = image_spectrum(v_pair.w1);
  const std::vector<Complex> wspec2 = image_spectrum(v_pair.w2);

  // (H* C)[l, j] = sum_i sum_k conj(w_i[k + l]) c_{j,i}[k]
  //             = conj( IFFT( sum_i conj(F c_{j,i}) .* F w_i )[l] )
  Eigen::MatrixXcd gram(m2, m2);
  parallel_for(static_cast<std::size_t>(m2), [&](std::size_t j) {
    std::vector<Complex> s = image_spectrum(coeffs[j].w1);
    std::vector<Complex> s2 = image_spectrum(coeffs[j].w2);
    for (std::size_t t = 0; t < s.size(); ++t)
      s[t] = std::conj(s[t]) * wspec1[t] + std::conj(s2[t]) * wspec2[t];
    fft_backward_inplace(grid.n, s);
    const double scale = 1.0 / static_cast<double>(grid.size());
    for (int l2 = 0; l2 < support.k2; ++l2)
      for (int l1 = 0; l1 < support.k1; ++l1)
        gram(support.pos(l1, l2), static_cast<Eigen::Index>(j)) =
            std::conj(s[static_cast<std::size_t>(l1) + static_cast<std::size_t>(grid.n) * l2] * scale);
  });
  return gram;
}

}  // namespace hfmri
