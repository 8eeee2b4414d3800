#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "hfmri/errors.hpp"
#include "hfmri/fft.hpp"
#include "hfmri/phantom.hpp"
#include "oracles.hpp"

using namespace hfmri;

TEST_SUITE_BEGIN("phantom");

TEST_CASE("J1 at zero and the small-argument limit") {
  CHECK(bessel_j1(0.0) == 0.0);
  CHECK(bessel_j1(1e-6) / 1e-6 == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("J1 matches the series oracle at reference points") {
  for (double x : {0.5, 1.0, 2.0, 5.0, 10.0})
    CHECK(bessel_j1(x) == doctest::Approx(oracle::j1_series_quad(x)).epsilon(1e-12));
}

TEST_CASE("J1 across the series/asymptotic crossover") {
  for (double x = 0.0; x <= 50.0; x += 0.173)
    CHECK(std::abs(bessel_j1(x) - oracle::j1_series_quad(x)) < 1e-10);
}

TEST_CASE("J1 rejects NaN and negatives") {
  CHECK_THROWS_AS(bessel_j1(std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(bessel_j1(-1.0), std::invalid_argument);
}

TEST_CASE("unit disk has DC sample pi") {
  EllipsePhantom p;
  p.fov = 4.0;  // disk of radius 1 needs a FOV wider than 2
  p.components = {{Complex(1.0), {0.0, 0.0}, {1.0, 1.0}, 0.0}};
  const ComplexImage v = ellipse_kspace(p, make_grid(8));
  CHECK(v.at(0, 0).real() == doctest::Approx(oracle::kPi).epsilon(1e-14));
  CHECK(v.at(0, 0).imag() == 0.0);
}

TEST_CASE("translation multiplies samples by a phase ramp") {
  const Grid g = make_grid(16);
  EllipsePhantom centered;
  centered.components = {{Complex(2.0), {0.0, 0.0}, {0.2, 0.1}, 0.4}};
  EllipsePhantom moved = centered;
  moved.components[0].center[0] = 0.15;
  moved.components[0].center[1] = -0.2;

  const ComplexImage a = ellipse_kspace(centered, g);
  const ComplexImage b = ellipse_kspace(moved, g);
  for (int k2 = g.min_index(); k2 <= g.max_index(); ++k2)
    for (int k1 = g.min_index(); k1 <= g.max_index(); ++k1) {
      const double ang = -2.0 * oracle::kPi * (k1 * 0.15 + k2 * -0.2);
      const Complex expect = a.at(k1, k2) * Complex(std::cos(ang), std::sin(ang));
      CHECK(std::abs(b.at(k1, k2) - expect) < 1e-12 * (1.0 + std::abs(expect)));
    }
}

TEST_CASE("real amplitudes give Hermitian-symmetric k-space") {
  const Grid g = make_grid(12);
  const ComplexImage v = ellipse_kspace(default_phantom(), g);
  for (int k2 = g.min_index(); k2 <= g.max_index(); ++k2)
    for (int k1 = g.min_index(); k1 <= g.max_index(); ++k1) {
      if (!g.contains(-k1, -k2)) continue;
      CHECK(std::abs(v.at(k1, k2) - std::conj(v.at(-k1, -k2))) < 1e-12);
    }
}

TEST_CASE("synthesis is linear in the components") {
  const Grid g = make_grid(8);
  EllipsePhantom one, two, both;
  one.components = {{Complex(1.5), {0.1, 0.0}, {0.15, 0.1}, 0.0}};
  two.components = {{Complex(-0.5), {-0.2, 0.1}, {0.1, 0.2}, 1.0}};
  both.components = {one.components[0], two.components[0]};
  const ComplexImage va = ellipse_kspace(one, g);
  const ComplexImage vb = ellipse_kspace(two, g);
  const ComplexImage vc = ellipse_kspace(both, g);
  for (std::size_t i = 0; i < vc.values().size(); ++i)
    CHECK(std::abs(vc.values()[i] - (va.values()[i] + vb.values()[i])) < 1e-13);
}

TEST_CASE("degenerate ellipses are rejected") {
  EllipsePhantom p;
  p.components = {{Complex(1.0), {0.0, 0.0}, {0.0, 0.1}, 0.0}};
  CHECK_THROWS_AS(ellipse_kspace(p, make_grid(8)), std::invalid_argument);
  p.components = {{Complex(1.0), {0.4, 0.0}, {0.2, 0.1}, 0.0}};  // sticks out of the FOV
  CHECK_THROWS_AS(ellipse_kspace(p, make_grid(8)), std::invalid_argument);
}

TEST_CASE("inverse DFT of synthesized k-space approximates the rasterized phantom") {
  // interior pixels (>= 3 px from any edge) should match the piecewise
  // constant levels up to Gibbs ringing
  const Grid g = make_grid(128);
  const EllipsePhantom p = default_phantom();
  const ComplexImage img = idft(ellipse_kspace(p, g));
  const RealImage truth = rasterize_phantom(p, g);
  // the N^-2-normalized inverse DFT samples (L/N)^2 times the continuous levels
  const double img_scale = (g.n / p.fov) * (g.n / p.fov);

  double amp_max = 0.0;
  for (const Ellipse& e : p.components) amp_max = std::max(amp_max, std::abs(e.amplitude));

  // distance-to-boundary via the level sets of each ellipse
  const double px = p.fov / g.n;
  std::size_t checked = 0;
  struct Group {
    double level;
    double sum;
    long cnt;
  };
  std::vector<Group> groups;
  for (int q2 = g.min_index(); q2 <= g.max_index(); ++q2)
    for (int q1 = g.min_index(); q1 <= g.max_index(); ++q1) {
      const double x1 = q1 * px, x2 = q2 * px;
      double dist_min = 1e30;
      for (const Ellipse& e : p.components) {
        const double c = std::cos(e.rotation), s = std::sin(e.rotation);
        const double u1 = (c * (x1 - e.center[0]) + s * (x2 - e.center[1])) / e.semi_axis[0];
        const double u2 = (-s * (x1 - e.center[0]) + c * (x2 - e.center[1])) / e.semi_axis[1];
        const double r = std::sqrt(u1 * u1 + u2 * u2);
        // first-order distance estimate to the |.| = 1 level set
        const double g1 = u1 / e.semi_axis[0], g2 = u2 / e.semi_axis[1];
        const double grad = std::hypot(g1, g2);
        if (grad > 0.0) dist_min = std::min(dist_min, std::abs(r - 1.0) * r / grad);
      }
      if (dist_min < 3.0 * px) continue;
      ++checked;
      // group interior pixels by their piecewise-constant level
      const double level = truth.at(q1, q2);
      const double pixel = img.at(q1, q2).real() * img_scale;
      bool found = false;
      for (auto& [lv, sum, cnt] : groups)
        if (lv == level) {
          sum += pixel - level;
          cnt += 1;
          found = true;
        }
      if (!found) groups.push_back({level, pixel - level, 1});
      CHECK(std::abs(img.at(q1, q2).imag() * img_scale) <= 0.05 * amp_max);
    }
  CHECK(checked > g.size() / 2);
  for (const auto& [lv, sum, cnt] : groups) {
    REQUIRE(cnt > 0);
    CHECK(std::abs(sum / cnt) <= 0.05 * amp_max);
  }
}

TEST_CASE("phantom file round trip") {
  const auto path = std::filesystem::temp_directory_path() / "hfmri_phantom_rt.txt";
  const EllipsePhantom p = default_phantom();
  write_phantom_file(path.string(), p, 64);
  const PhantomFile back = read_phantom_file(path.string());
  CHECK(back.n == 64);
  CHECK(back.phantom.fov == p.fov);
  REQUIRE(back.phantom.components.size() == p.components.size());
  for (std::size_t j = 0; j < p.components.size(); ++j) {
    CHECK(back.phantom.components[j].amplitude == p.components[j].amplitude);
    CHECK(back.phantom.components[j].semi_axis[0] == p.components[j].semi_axis[0]);
    CHECK(back.phantom.components[j].rotation == p.components[j].rotation);
  }
  std::filesystem::remove(path);
}

TEST_CASE("phantom file rejects malformed input") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto write = [&](const char* name, const char* text) {
    const auto path = dir / name;
    std::ofstream out(path);
    out << text;
    return path.string();
  };
  CHECK_THROWS_AS(read_phantom_file(write("hfmri_p1.txt", "N 64\n1 0 0 0 0.1 0.1 0\n")), FormatError);
  CHECK_THROWS_AS(read_phantom_file(write("hfmri_p2.txt", "L 1\nN 64\n1 0 0 0 0.1\n")), FormatError);
  CHECK_THROWS_AS(read_phantom_file(write("hfmri_p3.txt", "L 1\nN 64\n1 0 0 0 0.1 0.1 0 9\n")), FormatError);
  CHECK_THROWS_AS(read_phantom_file((dir / "hfmri_nonexistent.txt").string()), FormatError);
}

TEST_SUITE_END();
