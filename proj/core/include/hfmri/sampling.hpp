#pragma once

#include <cstdint>
#include <vector>

#include "hfmri/grid.hpp"

namespace hfmri {

/// 0/1 undersampling pattern on the k-space grid.
struct SamplingMask {
  Grid grid;
  std::vector<std::uint8_t> indicator;  // storage order, values 0/1
  double ratio = 0.0;                   // achieved fraction of ones
  std::uint64_t seed = 0;

  bool at(int k1, int k2) const { return indicator[grid.pos(k1, k2)] != 0; }
  std::size_t ones() const;
};

/// Variable-density random mask: the disk |k| <= center_radius is always
/// fully sampled; the remaining samples are drawn without replacement with
/// probability proportional to (1 - |k|/k_max)^decay until exactly
/// round(ratio N^2) entries are set. Deterministic given the seed.
SamplingMask vardensity_mask(const Grid& grid, double ratio, double decay, int center_radius,
                             std::uint64_t seed);

struct NoisyData {
  ComplexImage data;
  double realized_snr_db = 0.0;
  double sigma = 0.0;  // per-sample complex std dev used
};

/// Adds i.i.d. circular complex Gaussian noise on the masked entries with
/// sigma chosen from the analytic expectation so the sample SNR hits the
/// target; +infinity passes the input through unchanged.
NoisyData add_noise_to_snr(const ComplexImage& f, const SamplingMask& mask, double target_snr_db,
                           std::uint64_t seed);

}  // namespace hfmri
