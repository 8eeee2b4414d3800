#include "hfmri/phantom.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "hfmri/errors.hpp"
#include "hfmri/parallel.hpp"

namespace hfmri {

namespace {

constexpr double kPi = std::numbers::pi;

double j1_series(double x) {
  const double q = 0.25 * x * x;
  double term = 0.5 * x;
  double sum = term;
  for (int m = 1; m < 64; ++m) {
    term *= -q / (static_cast<double>(m) * (m + 1));
    sum += term;
    if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-300)) break;
  }
  return sum;
}

// Hankel expansion J1(x) = sqrt(2/(pi x)) (P cos chi - Q sin chi),
// chi = x - 3 pi/4, truncated at the smallest term.
double j1_asymptotic(double x) {
  const double mu = 4.0;
  double p = 1.0, q = 0.0;
  double term = 1.0;
  double prev = std::abs(term);
  for (int m = 1; m <= 40; ++m) {
    const double odd = 2.0 * m - 1.0;
    term *= (mu - odd * odd) / (static_cast<double>(m) * 8.0 * x);
    if (std::abs(term) >= prev) break;  // divergent tail reached
    prev = std::abs(term);
    const int k = m / 2;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    if (m % 2 == 1)
      q += sign * term;
    else
      p += sign * term;
    if (prev < 1e-18) break;
  }
  const double chi = x - 0.75 * kPi;
  return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double bessel_j1(double x) {
  if (std::isnan(x)) throw std::invalid_argument("bessel_j1: NaN input");
  if (x < 0.0) throw std::invalid_argument("bessel_j1: negative input");
  return x <= 14.0 ? j1_series(x) : j1_asymptotic(x);
}

void validate_phantom(const EllipsePhantom& p) {
  if (p.components.empty()) throw std::invalid_argument("phantom: needs at least one ellipse");
  if (!(p.fov > 0.0)) throw std::invalid_argument("phantom: FOV must be positive");
  const double half = 0.5 * p.fov;
  for (const Ellipse& e : p.components) {
    if (!(e.semi_axis[0] > 0.0) || !(e.semi_axis[1] > 0.0))
      throw std::invalid_argument("phantom: degenerate ellipse (semi-axis <= 0)");
    // rotated bounding box
    const double c = std::cos(e.rotation), s = std::sin(e.rotation);
    const double bx = std::hypot(e.semi_axis[0] * c, e.semi_axis[1] * s);
    const double by = std::hypot(e.semi_axis[0] * s, e.semi_axis[1] * c);
    if (std::abs(e.center[0]) + bx > half || std::abs(e.center[1]) + by > half)
      throw std::invalid_argument("phantom: ellipse not contained in [-L/2, L/2)^2");
  }
}

ComplexImage ellipse_kspace(const EllipsePhantom& p, const Grid& grid) {
  validate_phantom(p);
  ComplexImage out(grid);
  auto dst = out.values();
  const double inv_fov = 1.0 / p.fov;
  parallel_chunks(dst.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto [k1, k2] = grid.index_at(i);
      const double xi1 = k1 * inv_fov, xi2 = k2 * inv_fov;
      Complex acc{};
      for (const Ellipse& e : p.components) {
        const double c = std::cos(e.rotation), s = std::sin(e.rotation);
        const double q1 = e.semi_axis[0] * (c * xi1 + s * xi2);
        const double q2 = e.semi_axis[1] * (-s * xi1 + c * xi2);
        const double rho = std::hypot(q1, q2);
        const double disk = rho > 0.0 ? bessel_j1(2.0 * kPi * rho) / rho : kPi;
        const double phase = -2.0 * kPi * (xi1 * e.center[0] + xi2 * e.center[1]);
        acc += e.amplitude * e.semi_axis[0] * e.semi_axis[1] * disk *
               Complex(std::cos(phase), std::sin(phase));
      }
      dst[i] = acc;
    }
  });
  return out;
}

RealImage rasterize_phantom(const EllipsePhantom& p, const Grid& grid) {
  validate_phantom(p);
  RealImage out(grid);
  auto dst = out.values();
  const double step = p.fov / grid.n;
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const auto [p1, p2] = grid.index_at(i);
    const double x1 = p1 * step, x2 = p2 * step;
    double acc = 0.0;
    for (const Ellipse& e : p.components) {
      const double c = std::cos(e.rotation), s = std::sin(e.rotation);
      const double d1 = (c * (x1 - e.center[0]) + s * (x2 - e.center[1])) / e.semi_axis[0];
      const double d2 = (-s * (x1 - e.center[0]) + c * (x2 - e.center[1])) / e.semi_axis[1];
      if (d1 * d1 + d2 * d2 <= 1.0) acc += e.amplitude.real();
    }
    dst[i] = acc;
  }
  return out;
}

EllipsePhantom default_phantom() {
  // Head phantom: ten ellipses in [-1/2, 1/2)^2. Amplitudes carry a x100
  // scale so the shipped solver parameters operate at a sensible k-space
  // magnitude.
  const double a = 100.0;
  EllipsePhantom p;
  p.fov = 1.0;
  const double deg = kPi / 180.0;
  p.components = {
      {Complex(1.00 * a, 0), {0.0, 0.0}, {0.345, 0.460}, 0.0},
      {Complex(-0.80 * a, 0), {0.0, -0.0092}, {0.3312, 0.437}, 0.0},
      {Complex(-0.20 * a, 0), {0.11, 0.0}, {0.055, 0.155}, -18.0 * deg},
      {Complex(-0.20 * a, 0), {-0.11, 0.0}, {0.08, 0.205}, 18.0 * deg},
      {Complex(0.10 * a, 0), {0.0, 0.175}, {0.105, 0.125}, 0.0},
      {Complex(0.10 * a, 0), {0.0, 0.05}, {0.023, 0.023}, 0.0},
      {Complex(0.10 * a, 0), {0.0, -0.05}, {0.023, 0.023}, 0.0},
      {Complex(0.10 * a, 0), {-0.04, -0.3025}, {0.046, 0.023}, 0.0},
      {Complex(0.10 * a, 0), {0.0, -0.3025}, {0.023, 0.023}, 0.0},
      {Complex(0.10 * a, 0), {0.03, -0.3025}, {0.023, 0.046}, 0.0},
  };
  return p;
}

PhantomFile read_phantom_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("phantom file: cannot open " + path);
  PhantomFile out;
  bool have_l = false, have_n = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string first;
    if (!(ss >> first)) continue;  // blank
    if (first == "L") {
      if (!(ss >> out.phantom.fov)) throw FormatError("phantom file: bad L at line " + std::to_string(lineno));
      have_l = true;
    } else if (first == "N") {
      if (!(ss >> out.n)) throw FormatError("phantom file: bad N at line " + std::to_string(lineno));
      have_n = true;
    } else {
      Ellipse e;
      double re = 0.0, im = 0.0;
      std::istringstream row(line);
      if (!(row >> re >> im >> e.center[0] >> e.center[1] >> e.semi_axis[0] >> e.semi_axis[1] >>
            e.rotation))
        throw FormatError("phantom file: expected 7 numbers at line " + std::to_string(lineno));
      std::string extra;
      if (row >> extra) throw FormatError("phantom file: trailing tokens at line " + std::to_string(lineno));
      e.amplitude = Complex(re, im);
      out.phantom.components.push_back(e);
    }
  }
  if (!have_l || !have_n) throw FormatError("phantom file: missing L or N header");
  if (out.n < 2) throw FormatError("phantom file: N must be >= 2");
  validate_phantom(out.phantom);
  return out;
}

void write_phantom_file(const std::string& path, const EllipsePhantom& p, int n) {
  validate_phantom(p);
  std::ofstream out(path);
  if (!out) throw FormatError("phantom file: cannot write " + path);
  out.precision(17);
  out << "# alpha_re alpha_im cx cy d1 d2 theta\n";
  out << "L " << p.fov << "\n";
  out << "N " << n << "\n";
  for (const Ellipse& e : p.components)
    out << e.amplitude.real() << " " << e.amplitude.imag() << " " << e.center[0] << " "
        << e.center[1] << " " << e.semi_axis[0] << " " << e.semi_axis[1] << " " << e.rotation
        << "\n";
  if (!out) throw FormatError("phantom file: write failed for " + path);
}

}  // namespace hfmri
