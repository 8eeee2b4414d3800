#include <doctest.h>

#include "hfmri/grid.hpp"
#include "hfmri/hankel.hpp"
#include "hfmri/rng.hpp"
#include "oracles.hpp"

using namespace hfmri;

TEST_SUITE_BEGIN("core");

TEST_CASE("grid index ranges") {
  const Grid g4 = make_grid(4);
  CHECK(g4.min_index() == -2);
  CHECK(g4.max_index() == 1);
  CHECK(g4.size() == 16);

  const Grid g5 = make_grid(5);
  CHECK(g5.min_index() == -2);
  CHECK(g5.max_index() == 2);
  CHECK(g5.size() == 25);

  CHECK(make_grid(256).size() == 65536);
  CHECK_THROWS_AS(make_grid(1), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(0), std::invalid_argument);
}

TEST_CASE("origin belongs to every grid") {
  for (int n = 2; n <= 9; ++n) CHECK(make_grid(n).contains(0, 0));
}

TEST_CASE("storage is first-axis-fastest") {
  const Grid g = make_grid(4);
  CHECK(g.pos(-2, -2) == 0);
  CHECK(g.pos(-1, -2) == 1);
  CHECK(g.pos(-2, -1) == 4);
  const auto [k1, k2] = g.index_at(7);
  CHECK(k1 == 1);
  CHECK(k2 == -1);
}

TEST_CASE("contract ranges and sizes") {
  const auto c1 = contract(make_grid(4), make_support(2, 2));
  CHECK(c1.size() == 9);
  CHECK(c1.front() == std::pair{-2, -2});
  CHECK(c1.back() == std::pair{0, 0});
  for (const auto& [a, b] : c1) {
    CHECK(a >= -2);
    CHECK(a <= 0);
    CHECK(b >= -2);
    CHECK(b <= 0);
  }

  const auto c2 = contract(make_grid(4), make_support(4, 4));
  REQUIRE(c2.size() == 1);
  CHECK(c2[0] == std::pair{-2, -2});

  CHECK(contract(make_grid(128), make_support(25, 25)).size() == 104 * 104);
  CHECK_THROWS_AS(contract(make_grid(4), make_support(5, 2)), std::invalid_argument);
}

TEST_CASE("contract size formula across patch sizes") {
  for (int n : {5, 8, 11})
    for (int k1 = 2; k1 <= n; k1 += 3)
      for (int k2 = 2; k2 <= n; k2 += 2)
        CHECK(contract(make_grid(n), make_support(k1, k2)).size() ==
              static_cast<std::size_t>((n - k1 + 1) * (n - k2 + 1)));
}

TEST_CASE("filter reshape ordering") {
  const std::vector<Complex> col = {1.0, 2.0, 3.0, 4.0};
  const Filter f = reshape_filter(col, make_support(2, 2));
  CHECK(f.at(0, 0) == Complex(1.0));
  CHECK(f.at(1, 0) == Complex(2.0));
  CHECK(f.at(0, 1) == Complex(3.0));
  CHECK(f.at(1, 1) == Complex(4.0));
  CHECK_THROWS_AS(reshape_filter(col, make_support(3, 3)), std::invalid_argument);
}

TEST_CASE("filter reshape round trip") {
  Rng rng(7);
  const PatchSupport s = make_support(3, 3);
  std::vector<Complex> col(9);
  for (Complex& z : col) z = Complex(rng.uniform(), rng.uniform());
  const std::vector<Complex> back = flatten_filter(reshape_filter(col, s));
  CHECK(back == col);
}

TEST_CASE("reshape ordering matches Hankel columns") {
  // applying the Hankel matrix to a unit column must pick out w[k + offset(l)]
  Rng rng(11);
  const Grid g = make_grid(4);
  const PatchSupport s = make_support(2, 2);
  const ComplexImage w = oracle::random_image(g, rng);
  const HankelMatrix h = hankel_explicit(w, s, HankelBoundary::interior);
  const auto rows = contract(g, s);
  for (int l = 0; l < s.size(); ++l) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(s.size());
    e(l) = 1.0;
    const Eigen::VectorXcd col = h.m * e;
    const auto [l1, l2] = s.offset_at(l);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto [k1, k2] = rows[r];
      CHECK(col(static_cast<Eigen::Index>(r)) == w.at(k1 + l1, k2 + l2));
    }
  }
}

TEST_CASE("rng streams are reproducible") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
}

TEST_SUITE_END();
