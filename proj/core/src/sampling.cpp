#include "hfmri/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hfmri/rng.hpp"

namespace hfmri {

std::size_t SamplingMask::ones() const {
  return static_cast<std::size_t>(std::count(indicator.begin(), indicator.end(), std::uint8_t{1}));
}

SamplingMask vardensity_mask(const Grid& grid, double ratio, double decay, int center_radius,
                             std::uint64_t seed) {
  if (!(ratio > 0.0) || ratio > 1.0) throw std::invalid_argument("vardensity_mask: ratio must be in (0,1]");
  if (decay < 0.0) throw std::invalid_argument("vardensity_mask: decay must be >= 0");
  if (center_radius < 0) throw std::invalid_argument("vardensity_mask: center_radius must be >= 0");

  const std::size_t total = grid.size();
  const std::size_t target = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(total)));

  SamplingMask mask{grid, std::vector<std::uint8_t>(total, 0), 0.0, seed};

  const double r2 = static_cast<double>(center_radius) * center_radius;
  double kmax_sq = 0.0;
  for (std::size_t p = 0; p < total; ++p) {
    const auto [k1, k2] = grid.index_at(p);
    kmax_sq = std::max(kmax_sq, static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2);
  }
  const double kmax = std::sqrt(kmax_sq);

  std::size_t center_count = 0;
  for (std::size_t p = 0; p < total; ++p) {
    const auto [k1, k2] = grid.index_at(p);
    if (static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2 <= r2) {
      mask.indicator[p] = 1;
      ++center_count;
    }
  }
  if (center_count > target)
    throw std::invalid_argument("vardensity_mask: ratio too small for the fully sampled center");

  // Weighted sampling without replacement via exponential clocks: entry p
  // gets key Exp(1)/w_p and the smallest keys win. Zero-weight entries sort
  // last, so ratio = 1 still fills the grid.
  Rng rng(seed);
  std::vector<std::pair<double, std::size_t>> keys;
  keys.reserve(total - center_count);
  for (std::size_t p = 0; p < total; ++p) {
    if (mask.indicator[p]) continue;
    const auto [k1, k2] = grid.index_at(p);
    const double kn = std::sqrt(static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2);
    const double w = std::pow(std::max(0.0, 1.0 - kn / kmax), decay);
    double u = rng.uniform();
    while (u <= 0.0) u = rng.uniform();
    const double key = w > 0.0 ? -std::log(u) / w : std::numeric_limits<double>::infinity();
    keys.emplace_back(key, p);
  }
  std::sort(keys.begin(), keys.end());
  for (std::size_t i = 0; i < target - center_count; ++i) mask.indicator[keys[i].second] = 1;

  mask.ratio = static_cast<double>(target) / static_cast<double>(total);
  return mask;
}

NoisyData add_noise_to_snr(const ComplexImage& f, const SamplingMask& mask, double target_snr_db,
                           std::uint64_t seed) {
  if (f.grid() != mask.grid) throw std::invalid_argument("add_noise_to_snr: grid mismatch");

  double signal_sq = 0.0;
  std::size_t m = 0;
  auto src = f.values();
  for (std::size_t p = 0; p < src.size(); ++p) {
    if (!mask.indicator[p]) continue;
    signal_sq += std::norm(src[p]);
    ++m;
  }
  if (m == 0 || signal_sq <= 0.0)
    throw std::invalid_argument("add_noise_to_snr: zero signal on the mask");

  NoisyData out{f, std::numeric_limits<double>::infinity(), 0.0};
  if (std::isinf(target_snr_db)) return out;

  // E||n||^2 = m sigma^2, so sigma = ||f|| 10^(-snr/20) / sqrt(m).
  const double signal = std::sqrt(signal_sq);
  const double sigma = signal * std::pow(10.0, -target_snr_db / 20.0) / std::sqrt(static_cast<double>(m));

  Rng rng(seed);
  double noise_sq = 0.0;
  auto dst = out.data.values();
  for (std::size_t p = 0; p < dst.size(); ++p) {
    if (!mask.indicator[p]) continue;
    const Complex n = sigma * rng.complex_normal();
    noise_sq += std::norm(n);
    dst[p] += n;
  }
  out.sigma = sigma;
  out.realized_snr_db = 20.0 * std::log10(signal / std::sqrt(noise_sq));
  return out;
}

}  // namespace hfmri
