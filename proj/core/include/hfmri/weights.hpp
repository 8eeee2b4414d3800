#pragma once

#include "hfmri/grid.hpp"

namespace hfmri {

/// Field-of-view parameters for the gradient weight operator Lambda,
/// (Lambda_i v)[k] = (2*pi*i k_i / L) v[k].
struct WeightSpec {
  double fov = 1.0;  // L > 0

  /// |Lambda|^2 multiplier at index k: (2*pi/L)^2 (k1^2 + k2^2).
  double weight_sq(int k1, int k2) const;
};

WeightSpec make_weight_spec(double fov);

GradientPair gradient_weight(const ComplexImage& v, const WeightSpec& spec);
ComplexImage gradient_weight_adjoint(const GradientPair& w, const WeightSpec& spec);

}  // namespace hfmri
