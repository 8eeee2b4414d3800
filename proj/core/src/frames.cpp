#include "hfmri/frames.hpp"

#include <algorithm>
#include <cmath>

#include "hfmri/conv.hpp"
#include "hfmri/fft.hpp"
#include "hfmri/parallel.hpp"
#include "hfmri/svd.hpp"

namespace hfmri {

FilterBank FilterBank::from_matrix(const PatchSupport& support, Eigen::MatrixXcd matrix) {
  const int m2 = support.size();
  if (matrix.rows() != m2 || matrix.cols() != m2)
    throw std::invalid_argument("FilterBank: matrix must be M2 x M2");
  FilterBank bank;
  bank.support = support;
  bank.matrix = std::move(matrix);
  bank.filters.reserve(m2);
  for (int j = 0; j < m2; ++j) {
    std::vector<Complex> col(bank.matrix.col(j).data(), bank.matrix.col(j).data() + m2);
    bank.filters.push_back(reshape_filter(col, support));
  }
  return bank;
}

std::size_t CoefficientSet::nonzero_count() const {
  std::size_t n = 0;
  for (const GradientPair& pair : coeffs)
    for (int i = 0; i < 2; ++i)
      for (const Complex& z : pair.channel(i).values())
        if (z != Complex{}) ++n;
  return n;
}

double CoefficientSet::norm() const {
  double s = 0.0;
  for (const GradientPair& pair : coeffs) {
    const double t = pair.norm();
    s += t * t;
  }
  return std::sqrt(s);
}

CoefficientSet analyze(const FilterBank& bank, const GradientPair& w) {
  const Grid& grid = w.grid();
  if (bank.support.k1 > grid.n || bank.support.k2 > grid.n)
    throw std::invalid_argument("analyze: filter support exceeds grid");
  const int m2 = bank.filter_count();
  const std::vector<Complex> spec1 = image_spectrum(w.w1);
  const std::vector<Complex> spec2 = image_spectrum(w.w2);

  CoefficientSet out;
  out.support = bank.support;
  out.coeffs.assign(m2, GradientPair(grid));
  parallel_for(static_cast<std::size_t>(m2), [&](std::size_t j) {
    const std::vector<Complex> g = filter_correlation_spectrum(bank.filters[j], grid);
    std::vector<Complex> s(grid.size());
    for (std::size_t t = 0; t < s.size(); ++t) s[t] = g[t] * spec1[t];
    out.coeffs[j].w1 = image_from_spectrum(grid, std::move(s));
    s.resize(grid.size());
    for (std::size_t t = 0; t < s.size(); ++t) s[t] = g[t] * spec2[t];
    out.coeffs[j].w2 = image_from_spectrum(grid, std::move(s));
  });
  return out;
}

GradientPair synthesize(const FilterBank& bank, const CoefficientSet& c) {
  if (c.filter_count() != bank.filter_count() || c.support != bank.support)
    throw std::invalid_argument("synthesize: coefficient shape does not match bank");
  const Grid& grid = c.grid();
  const int m2 = bank.filter_count();
  const std::size_t sz = grid.size();

  // Accumulate spectra per chunk, then combine chunks in index order so the
  // result is reproducible for a fixed thread count.
  const int workers = std::max(1, std::min(thread_budget(), m2));
  std::vector<std::vector<Complex>> acc1(workers), acc2(workers);
  const int chunk = (m2 + workers - 1) / workers;
  parallel_for(static_cast<std::size_t>(workers), [&](std::size_t w) {
    acc1[w].assign(sz, Complex{});
    acc2[w].assign(sz, Complex{});
    const int begin = static_cast<int>(w) * chunk;
    const int end = std::min(begin + chunk, m2);
    for (int j = begin; j < end; ++j) {
      const std::vector<Complex> g = filter_correlation_spectrum(bank.filters[j], grid);
      const std::vector<Complex> s1 = image_spectrum(c.coeffs[j].w1);
      const std::vector<Complex> s2 = image_spectrum(c.coeffs[j].w2);
      for (std::size_t t = 0; t < sz; ++t) {
        const Complex gc = std::conj(g[t]);
        acc1[w][t] += gc * s1[t];
        acc2[w][t] += gc * s2[t];
      }
    }
  });
  for (int w = 1; w < workers; ++w)
    for (std::size_t t = 0; t < sz; ++t) {
      acc1[0][t] += acc1[w][t];
      acc2[0][t] += acc2[w][t];
    }
  return GradientPair(image_from_spectrum(grid, std::move(acc1[0])),
                      image_from_spectrum(grid, std::move(acc2[0])));
}

double check_uep(const FilterBank& bank) {
  const PatchSupport& sup = bank.support;
  // sum_j a_j[k+l] conj(a_j[l]) = (A A*)[pos(k+l), pos(l)]
  const Eigen::MatrixXcd p = bank.matrix * bank.matrix.adjoint();
  double worst = 0.0;
  for (int s2 = -(sup.k2 - 1); s2 <= sup.k2 - 1; ++s2) {
    for (int s1 = -(sup.k1 - 1); s1 <= sup.k1 - 1; ++s1) {
      Complex acc{};
      for (int l2 = std::max(0, -s2); l2 < std::min(sup.k2, sup.k2 - s2); ++l2)
        for (int l1 = std::max(0, -s1); l1 < std::min(sup.k1, sup.k1 - s1); ++l1)
          acc += p(sup.pos(l1 + s1, l2 + s2), sup.pos(l1, l2));
      if (s1 == 0 && s2 == 0) acc -= 1.0;
      worst = std::max(worst, std::abs(acc));
    }
  }
  return worst;
}

FilterBankSvd filters_from_svd(const HankelMatrix& h) {
  const int m2 = h.support.size();
  if (h.m.cols() != m2)
    throw std::invalid_argument("filters_from_svd: column count != support size");
  Svd svd = svd_full_v(h.m);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m2));
  return FilterBankSvd{FilterBank::from_matrix(h.support, scale * svd.v), std::move(svd.sigma)};
}

RealImage edge_map(const FilterBank& bank, int rank_cutoff, int resolution, double fov) {
  const int m2 = bank.filter_count();
  if (rank_cutoff < 0 || rank_cutoff >= m2)
    throw std::invalid_argument("edge_map: rank cutoff must satisfy 0 <= r < M2");
  if (resolution < bank.support.k1 || resolution < bank.support.k2)
    throw std::invalid_argument("edge_map: resolution smaller than filter support");
  if (!(fov > 0.0)) throw std::invalid_argument("edge_map: FOV must be positive");

  const int s = resolution;
  const std::size_t sz = static_cast<std::size_t>(s) * s;

  // phi_j at pixel x = -L/2 + p L/S is an S x S DFT of the taps modulated by
  // (-1)^(m1+m2); pixel p lands on DFT bin p directly.
  const int tail = m2 - rank_cutoff;
  const int workers = std::max(1, std::min(thread_budget(), tail));
  const int chunk = (tail + workers - 1) / workers;
  std::vector<std::vector<double>> partial(workers);
  parallel_for(static_cast<std::size_t>(workers), [&](std::size_t w) {
    partial[w].assign(sz, 0.0);
    std::vector<Complex> buf;
    const int begin = static_cast<int>(w) * chunk;
    const int end = std::min(begin + chunk, tail);
    for (int t = begin; t < end; ++t) {
      const Filter& a = bank.filters[rank_cutoff + t];
      buf.assign(sz, Complex{});
      for (int l2 = 0; l2 < a.support.k2; ++l2)
        for (int l1 = 0; l1 < a.support.k1; ++l1) {
          const double sign = ((l1 + l2) % 2 == 0) ? 1.0 : -1.0;
          buf[static_cast<std::size_t>(l1) + static_cast<std::size_t>(s) * l2] = sign * a.at(l1, l2);
        }
      fft_forward_inplace(s, buf);
      for (std::size_t p = 0; p < sz; ++p) partial[w][p] += std::norm(buf[p]);
    }
  });
  std::vector<double> sumsq(sz, 0.0);
  for (int w = 0; w < workers; ++w)
    for (std::size_t p = 0; p < sz; ++p) sumsq[p] += partial[w][p];

  RealImage out(make_grid(s));
  auto dst = out.values();
  for (std::size_t p = 0; p < sz; ++p) dst[p] = std::sqrt(sumsq[p]) / fov;
  return out;
}

}  // namespace hfmri
