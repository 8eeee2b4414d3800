#pragma once

#include <string>

#include "hfmri/grid.hpp"

namespace hfmri {

/// 20 log10(||ref|| / || |test| - |ref| ||) over magnitude images; returns
/// +infinity when the error norm is exactly zero.
double snr_db(const ComplexImage& reference, const ComplexImage& test);

/// High-frequency error norm: relative L2 difference of the images after a
/// 15x15 Laplacian-of-Gaussian (sigma = 1.5 px) filter, periodic boundary,
/// on magnitude images.
double hfen(const ComplexImage& reference, const ComplexImage& test);

/// ||next - prev|| / ||prev|| (complex difference; the stopping quantity).
double rel_change(const ComplexImage& prev, const ComplexImage& next);

/// The LoG kernel used by hfen (mean-removed, so constants are annihilated).
RealImage hfen_kernel();

struct QualityReport {
  double snr_db = 0.0;  // +inf means "exact"
  double hfen = 0.0;
  int n_iters = 0;
  double wall_time_s = 0.0;
};

/// Flat key=value serialization (multi-line) and a one-line summary.
std::string report_keyvalue(const QualityReport& r);
std::string report_summary(const QualityReport& r);

}  // namespace hfmri
