#pragma once

#include <Eigen/Core>
#include <span>

#include "hfmri/grid.hpp"

namespace hfmri {

enum class HankelBoundary {
  interior,  ///< rows on O:K, entries never wrap (Fig.-1 layout)
  periodic,  ///< rows on all of O, index addition wrapped mod N
};

/// Dense (two-fold) Hankel matrix: entry[(k,l)] = w[k + offset(l)], columns
/// over the patch support, rows first-axis-fastest over the row index set.
/// The two-fold form stacks the channel-1 block above the channel-2 block.
struct HankelMatrix {
  Eigen::MatrixXcd m;
  Grid grid;
  PatchSupport support;
  HankelBoundary boundary = HankelBoundary::interior;
  bool twofold = false;
};

/// Entry-count guard for the dense constructors; the solver never builds
/// these inside its loop.
inline constexpr std::size_t kHankelEntryCap = 200'000'000;

HankelMatrix hankel_explicit(const ComplexImage& w, const PatchSupport& support,
                             HankelBoundary boundary,
                             std::size_t max_entries = kHankelEntryCap);

HankelMatrix hankel_explicit(const GradientPair& w, const PatchSupport& support,
                             HankelBoundary boundary,
                             std::size_t max_entries = kHankelEntryCap);

/// H* C for the PERIODIC two-fold Hankel H of v_pair, where column j of C
/// stacks the two coefficient images of filter j. Matrix-free: one
/// correlation per filter per channel, O(K^2 N^2 log N) total.
Eigen::MatrixXcd hankel_gram(const GradientPair& v_pair,
                             std::span<const GradientPair> coeffs,
                             const PatchSupport& support);

}  // namespace hfmri
