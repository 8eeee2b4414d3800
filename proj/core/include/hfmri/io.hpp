#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hfmri/frames.hpp"
#include "hfmri/grid.hpp"
#include "hfmri/sampling.hpp"
#include "hfmri/solver.hpp"

namespace hfmri {

// Binary formats, all little-endian, payload in storage order (first grid
// axis fastest, origin at (-floor(N/2), -floor(N/2))):
//   KSP1: "KSP1" | u32 N | N^2 x (f64 re, f64 im)          size 8 + 16 N^2
//   MSK1: "MSK1" | u32 N | N^2 x u8 in {0,1}               size 8 + N^2
//   FLT1: "FLT1" | u32 M2 | u32 K | M2 columns x M2 x (f64 re, f64 im)
// Readers validate magic, declared sizes and value domains and throw
// FormatError instead of guessing.

void write_array(const std::string& path, const ComplexImage& img);
ComplexImage read_array(const std::string& path);

void write_mask(const std::string& path, const SamplingMask& mask);
SamplingMask read_mask(const std::string& path);

void write_filters(const std::string& path, const FilterBank& bank);
FilterBank read_filters(const std::string& path);

/// 16-bit binary PGM (P5, maxval 65535, big-endian samples per the format).
/// Values are clipped to [lo, hi], affinely mapped and floored.
void write_image_pgm(const std::string& path, const RealImage& img, double lo, double hi);

/// Solver configuration: flat "key = value" lines, '#' comments, unknown
/// keys rejected, missing keys take the documented defaults.
struct SolverConfig {
  SolverParams params;
  /// Every key with its fully resolved value, for provenance echoes.
  std::vector<std::pair<std::string, std::string>> resolved;
};

SolverConfig parse_config(const std::string& path);
SolverConfig config_from_params(const SolverParams& params);

}  // namespace hfmri
