#pragma once

#include <vector>

#include "hfmri/grid.hpp"

namespace hfmri {

/// Forward DFT on the centered grid, f[k] = sum_p u[p] exp(-2*pi*i p.k/N),
/// no normalization.
ComplexImage dft(const ComplexImage& u);

/// Inverse DFT, u[p] = N^-2 sum_k f[k] exp(2*pi*i p.k/N); idft(dft(u)) = u.
ComplexImage idft(const ComplexImage& f);

// Low-level spectral plumbing shared by the convolution and solver paths.
// "Standard order" stores grid index k at slot (k mod N) per axis, which is
// the layout the FFT works in; centered storage and standard order differ by
// a circular shift of floor(N/2).

std::vector<Complex> to_standard_order(const ComplexImage& img);
ComplexImage to_centered_order(const Grid& grid, std::span<const Complex> std_order);

/// In-place unnormalized transforms of an N x N standard-order buffer.
/// Plans are cached per size and safe to execute concurrently.
void fft_forward_inplace(int n, std::span<Complex> data);
void fft_backward_inplace(int n, std::span<Complex> data);

}  // namespace hfmri
