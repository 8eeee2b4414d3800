#pragma once

#include <vector>

#include "hfmri/grid.hpp"

namespace hfmri {

enum class ConvMode {
  convolve,   ///< (S_a u)[k] = sum_l a[k-l] u[l], indices mod N
  correlate,  ///< (S_{a[-.]} u)[k] = sum_j a[j] u[k+j], no conjugation
};

/// Periodic filtering of u by a on the full grid.
ComplexImage conv_periodic(const Filter& a, const ComplexImage& u, ConvMode mode);

// Spectral building blocks. A filter's "correlation spectrum" is
// G[t] = sum_j a[j] exp(+2*pi*i j.t/N) (unnormalized backward transform of
// the zero-padded taps). Then, with F the unnormalized forward transform:
//   correlate:  S_{a[-.]} u = IFFT(G .* F(u)) / N^2
//   convolve with conj(a):   IFFT(conj(G) .* F(u)) / N^2
// which covers both the analysis and synthesis sides of a filter bank.

std::vector<Complex> filter_correlation_spectrum(const Filter& a, const Grid& grid);

/// Forward spectrum of an image (standard order).
std::vector<Complex> image_spectrum(const ComplexImage& u);

/// Normalized inverse of a standard-order spectrum back to a centered image.
ComplexImage image_from_spectrum(const Grid& grid, std::vector<Complex> spectrum);

}  // namespace hfmri
