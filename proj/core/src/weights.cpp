#include "hfmri/weights.hpp"

#include <numbers>

namespace hfmri {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

WeightSpec make_weight_spec(double fov) {
  if (!(fov > 0.0)) throw std::invalid_argument("WeightSpec: L must be positive");
  return WeightSpec{fov};
}

double WeightSpec::weight_sq(int k1, int k2) const {
  const double s = kTwoPi / fov;
  return s * s * (static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2);
}

GradientPair gradient_weight(const ComplexImage& v, const WeightSpec& spec) {
  const Grid& g = v.grid();
  GradientPair out(g);
  const double s = kTwoPi / spec.fov;
  auto src = v.values();
  auto d1 = out.w1.values();
  auto d2 = out.w2.values();
  for (std::size_t p = 0; p < src.size(); ++p) {
    const auto [k1, k2] = g.index_at(p);
    d1[p] = Complex(0.0, s * k1) * src[p];
    d2[p] = Complex(0.0, s * k2) * src[p];
  }
  return out;
}

ComplexImage gradient_weight_adjoint(const GradientPair& w, const WeightSpec& spec) {
  const Grid& g = w.grid();
  ComplexImage out(g);
  const double s = kTwoPi / spec.fov;
  auto s1 = w.w1.values();
  auto s2 = w.w2.values();
  auto dst = out.values();
  for (std::size_t p = 0; p < dst.size(); ++p) {
    const auto [k1, k2] = g.index_at(p);
    // conj(2*pi*i k/L) = -2*pi*i k/L
    dst[p] = Complex(0.0, -s * k1) * s1[p] + Complex(0.0, -s * k2) * s2[p];
  }
  return out;
}

}  // namespace hfmri
