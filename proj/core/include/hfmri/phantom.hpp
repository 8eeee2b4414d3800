#pragma once

#include <string>
#include <vector>

#include "hfmri/grid.hpp"

namespace hfmri {

/// Bessel function of the first kind, order 1, to <= 1e-10 absolute error
/// on [0, 1e3]. Power series below the crossover, Hankel asymptotic above.
double bessel_j1(double x);

/// One ellipse: the set |diag(1/d1, 1/d2) Q(theta) (x - center)| <= 1, i.e.
/// semi-axis d1 along direction (cos theta, sin theta).
struct Ellipse {
  Complex amplitude;
  double center[2] = {0.0, 0.0};
  double semi_axis[2] = {1.0, 1.0};
  double rotation = 0.0;  // radians
};

/// Piecewise-constant continuous-domain ground truth: a sum of ellipse
/// indicator functions supported inside [-L/2, L/2)^2.
struct EllipsePhantom {
  std::vector<Ellipse> components;
  double fov = 1.0;  // L
};

/// Validates component count, positive axes and containment in the FOV.
void validate_phantom(const EllipsePhantom& p);

/// Exact Fourier samples v[k] = F(u)(k/L) on the centered grid:
///   v[k] = sum_j alpha_j d1 d2 exp(-2 pi i k.y_j / L) B(|diag(d) Q_j k| / L)
/// with B(rho) = J1(2 pi rho)/rho, B(0) = pi.
ComplexImage ellipse_kspace(const EllipsePhantom& p, const Grid& grid);

/// Pixel rasterization of the same phantom (test/reference path, not exact
/// in k-space): u(x) sampled at x = p L/N.
RealImage rasterize_phantom(const EllipsePhantom& p, const Grid& grid);

/// The 10-ellipse head phantom shipped with the tool.
EllipsePhantom default_phantom();

/// Flat-text description: header lines "L <value>" and "N <value>", then one
/// ellipse per line "alpha_re alpha_im cx cy d1 d2 theta"; '#' comments.
struct PhantomFile {
  EllipsePhantom phantom;
  int n = 0;
};

PhantomFile read_phantom_file(const std::string& path);
void write_phantom_file(const std::string& path, const EllipsePhantom& p, int n);

}  // namespace hfmri
