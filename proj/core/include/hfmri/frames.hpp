#pragma once

#include <Eigen/Core>
#include <vector>

#include "hfmri/grid.hpp"
#include "hfmri/hankel.hpp"

namespace hfmri {

/// M2 = K1*K2 complex filters whose matrix form A (column j = flattened
/// filter j) satisfies A A* = M2^-1 I, i.e. the filters meet the unitary
/// extension principle and analysis/synthesis is a tight frame.
struct FilterBank {
  PatchSupport support;
  Eigen::MatrixXcd matrix;
  std::vector<Filter> filters;

  int filter_count() const { return support.size(); }

  static FilterBank from_matrix(const PatchSupport& support, Eigen::MatrixXcd matrix);
};

/// Canonical coefficients: one two-channel image per filter.
struct CoefficientSet {
  PatchSupport support;
  std::vector<GradientPair> coeffs;

  const Grid& grid() const { return coeffs.front().grid(); }
  int filter_count() const { return static_cast<int>(coeffs.size()); }

  /// l0 count with exact-zero semantics.
  std::size_t nonzero_count() const;
  double norm() const;
};

/// Per-filter correlation of w's channels (no conjugation), periodic.
CoefficientSet analyze(const FilterBank& bank, const GradientPair& w);

/// Adjoint of analyze: w_i = sum_j conv(conj(a_j), c_{j,i}).
GradientPair synthesize(const FilterBank& bank, const CoefficientSet& c);

/// Max deviation of sum_j sum_l a_j[k+l] conj(a_j[l]) from delta[k] over all
/// shifts; a bank is tight iff this is <= 1e-10.
double check_uep(const FilterBank& bank);

struct FilterBankSvd {
  FilterBank bank;
  Eigen::VectorXd singular_values;  // nonincreasing
};

/// Tight frame from the full SVD H = X S Y*: filter j = M2^{-1/2} Y^(:,j).
/// Tail filters (past the numerical rank) annihilate the generating signal
/// on the contracted grid.
FilterBankSvd filters_from_svd(const HankelMatrix& h);

/// Annihilating-polynomial edge estimate on the S x S pixel grid of
/// [-L/2, L/2)^2: value(x) = sqrt(sum_{j > r} |phi_j(x)|^2) with
/// phi_j(x) = L^-1 sum_m a_j[m] exp(-2*pi*i m.x/L).
RealImage edge_map(const FilterBank& bank, int rank_cutoff, int resolution, double fov);

}  // namespace hfmri
