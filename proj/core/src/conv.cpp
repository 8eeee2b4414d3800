#include "hfmri/conv.hpp"

#include "hfmri/fft.hpp"

namespace hfmri {

namespace {

std::vector<Complex> pad_filter_standard(const Filter& a, const Grid& grid) {
  if (a.support.k1 > grid.n || a.support.k2 > grid.n)
    throw std::invalid_argument("conv: filter support exceeds grid");
  std::vector<Complex> out(grid.size(), Complex{});
  for (int l2 = 0; l2 < a.support.k2; ++l2)
    for (int l1 = 0; l1 < a.support.k1; ++l1)
      out[static_cast<std::size_t>(l1) + static_cast<std::size_t>(grid.n) * l2] = a.at(l1, l2);
  return out;
}

}  // namespace

std::vector<Complex> filter_correlation_spectrum(const Filter& a, const Grid& grid) {
  std::vector<Complex> buf = pad_filter_standard(a, grid);
  fft_backward_inplace(grid.n, buf);
  return buf;
}

std::vector<Complex> image_spectrum(const ComplexImage& u) {
  std::vector<Complex> buf = to_standard_order(u);
  fft_forward_inplace(u.n(), buf);
  return buf;
}

ComplexImage image_from_spectrum(const Grid& grid, std::vector<Complex> spectrum) {
  fft_backward_inplace(grid.n, spectrum);
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (Complex& z : spectrum) z *= scale;
  return to_centered_order(grid, spectrum);
}

ComplexImage conv_periodic(const Filter& a, const ComplexImage& u, ConvMode mode) {
  const Grid& grid = u.grid();
  std::vector<Complex> factor = pad_filter_standard(a, grid);
  if (mode == ConvMode::convolve)
    fft_forward_inplace(grid.n, factor);
  else
    fft_backward_inplace(grid.n, factor);

  std::vector<Complex> spec = image_spectrum(u);
  for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= factor[i];
  return image_from_spectrum(grid, std::move(spec));
}

}  // namespace hfmri
