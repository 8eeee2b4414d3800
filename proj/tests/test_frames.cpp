#include <doctest.h>

#include <Eigen/Dense>

#include "hfmri/frames.hpp"
#include "hfmri/hankel.hpp"
#include "hfmri/weights.hpp"
#include "oracles.hpp"

using namespace hfmri;

TEST_SUITE_BEGIN("frames");

namespace {

FilterBank scaled_basis_bank(const PatchSupport& s) {
  const int m2 = s.size();
  const double scale = 1.0 / std::sqrt(static_cast<double>(m2));
  return FilterBank::from_matrix(s, scale * Eigen::MatrixXcd::Identity(m2, m2));
}

}  // namespace

TEST_CASE("analysis with basis filters yields shifted scaled copies") {
  Rng rng(30);
  const Grid g = make_grid(6);
  const PatchSupport s = make_support(2, 2);
  const FilterBank bank = scaled_basis_bank(s);
  const GradientPair w = oracle::random_pair(g, rng);
  const CoefficientSet c = analyze(bank, w);
  const double scale = 1.0 / std::sqrt(4.0);
  for (int j = 0; j < 4; ++j) {
    const auto [l1, l2] = s.offset_at(j);
    for (int k2 = g.min_index(); k2 <= g.max_index(); ++k2)
      for (int k1 = g.min_index(); k1 <= g.max_index(); ++k1) {
        const Complex expect = scale * w.w1.at(g.wrap(k1 + l1), g.wrap(k2 + l2));
        CHECK(std::abs(c.coeffs[j].w1.at(k1, k2) - expect) < 1e-13);
      }
  }
}

TEST_CASE("analysis of zero input is zero") {
  Rng rng(31);
  const Grid g = make_grid(6);
  const FilterBank bank = oracle::random_tight_bank(make_support(2, 2), rng);
  const CoefficientSet c = analyze(bank, GradientPair(g));
  CHECK(c.norm() == 0.0);
  CHECK(c.nonzero_count() == 0);
}

TEST_CASE("analysis coefficients match the periodic Hankel columns") {
  Rng rng(32);
  const Grid g = make_grid(8);
  const PatchSupport s = make_support(2, 2);
  const FilterBank bank = oracle::random_tight_bank(s, rng);
  const GradientPair w = oracle::random_pair(g, rng);
  const CoefficientSet c = analyze(bank, w);

  const HankelMatrix h = hankel_explicit(w, s, HankelBoundary::periodic);
  const Eigen::MatrixXcd prod = h.m * bank.matrix;  // rows: channel-1 block then channel-2
  for (int j = 0; j < s.size(); ++j)
    for (int ch = 0; ch < 2; ++ch) {
      auto vals = c.coeffs[j].channel(ch).values();
      for (std::size_t p = 0; p < vals.size(); ++p) {
        const Complex expect = prod(static_cast<Eigen::Index>(ch * g.size() + p), j);
        CHECK(std::abs(vals[p] - expect) < 1e-12);
      }
    }
}

TEST_CASE("tight banks reconstruct perfectly and preserve energy") {
  Rng rng(33);
  const Grid g = make_grid(8);
  for (int k : {2, 3}) {
    const FilterBank bank = oracle::random_tight_bank(make_support(k, k), rng);
    const GradientPair w = oracle::random_pair(g, rng);
    const CoefficientSet c = analyze(bank, w);
    const GradientPair back = synthesize(bank, c);
    CHECK(oracle::dist(back, w) <= 1e-10 * w.norm());
    // Parseval
    CHECK(c.norm() == doctest::Approx(w.norm()).epsilon(1e-10));
  }
}

TEST_CASE("analysis and synthesis are adjoint") {
  Rng rng(34);
  const Grid g = make_grid(8);
  const PatchSupport s = make_support(2, 2);
  const FilterBank bank = oracle::random_tight_bank(s, rng);
  const GradientPair w = oracle::random_pair(g, rng);

  CoefficientSet c;
  c.support = s;
  for (int j = 0; j < s.size(); ++j) c.coeffs.push_back(oracle::random_pair(g, rng));

  Complex lhs{};
  const CoefficientSet aw = analyze(bank, w);
  for (int j = 0; j < s.size(); ++j) lhs += oracle::inner(aw.coeffs[j], c.coeffs[j]);
  const Complex rhs = oracle::inner(w, synthesize(bank, c));
  CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(lhs)));
}

TEST_CASE("a non-tight bank fails perfect reconstruction") {
  Rng rng(35);
  const Grid g = make_grid(6);
  const PatchSupport s = make_support(2, 2);
  const FilterBank bank = FilterBank::from_matrix(s, oracle::random_matrix(4, 4, rng));
  const GradientPair w = oracle::random_pair(g, rng);
  const GradientPair back = synthesize(bank, analyze(bank, w));
  CHECK(oracle::dist(back, w) > 1e-6 * w.norm());
  CHECK(check_uep(bank) > 1e-6);
}

TEST_CASE("svd filters from a diagonal matrix are the scaled basis up to phase") {
  const PatchSupport s = make_support(2, 2);
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(4, 4);
  d.diagonal() << 4.0, 3.0, 2.0, 1.0;
  HankelMatrix h{d, make_grid(4), s, HankelBoundary::interior, false};
  const FilterBankSvd result = filters_from_svd(h);
  for (int j = 0; j < 4; ++j) {
    CHECK(result.singular_values(j) == doctest::Approx(4.0 - j));
    for (int l = 0; l < 4; ++l) {
      const double expect = (l == j) ? 0.5 : 0.0;  // M2^{-1/2} = 1/2, up to phase
      CHECK(std::abs(std::abs(result.bank.matrix(l, j)) - expect) < 1e-12);
    }
  }
}

TEST_CASE("svd filters always satisfy the UEP") {
  Rng rng(36);
  for (int trial = 0; trial < 5; ++trial) {
    const PatchSupport s = make_support(3, 3);
    HankelMatrix h{oracle::random_matrix(20, 9, rng), make_grid(8), s,
                   HankelBoundary::interior, false};
    const FilterBank bank = filters_from_svd(h).bank;
    CHECK(check_uep(bank) <= 1e-10);
    CHECK((bank.matrix * bank.matrix.adjoint() -
           Eigen::MatrixXcd::Identity(9, 9) / 9.0).norm() <= 1e-10);
  }
}

TEST_CASE("tail filters annihilate low-rank inputs on the contraction") {
  Rng rng(37);
  const Grid g = make_grid(16);
  const PatchSupport s = make_support(4, 4);
  const int rank = 3;
  const GradientPair w = oracle::exp_sum_pair(g, rank, rng);
  const HankelMatrix h = hankel_explicit(w, s, HankelBoundary::interior);
  const FilterBankSvd result = filters_from_svd(h);

  const CoefficientSet c = analyze(result.bank, w);
  const auto rows = contract(g, s);
  double worst = 0.0;
  for (int j = rank; j < s.size(); ++j)
    for (int ch = 0; ch < 2; ++ch)
      for (const auto& [k1, k2] : rows)
        worst = std::max(worst, std::abs(c.coeffs[j].channel(ch).at(k1, k2)));
  CHECK(worst <= 1e-8 * w.norm());
}

TEST_CASE("uep deviation of the scaled basis is zero") {
  // powers of four make M2^{-1/2} squares exact in binary
  CHECK(check_uep(scaled_basis_bank(make_support(2, 2))) == 0.0);
  CHECK(check_uep(scaled_basis_bank(make_support(4, 4))) == 0.0);
  CHECK(check_uep(scaled_basis_bank(make_support(3, 2))) <= 1e-14);
}

TEST_CASE("zeroing one filter leaves an energy deficit at shift zero") {
  Rng rng(38);
  const PatchSupport s = make_support(2, 2);
  FilterBank bank = oracle::random_tight_bank(s, rng);
  Eigen::MatrixXcd m = bank.matrix;
  m.col(3).setZero();
  const FilterBank broken = FilterBank::from_matrix(s, m);
  CHECK(check_uep(broken) >= 1.0 / s.size() - 1e-12);
}

TEST_CASE("edge map of an all-zero tail is zero") {
  Rng rng(39);
  const PatchSupport s = make_support(2, 2);
  FilterBank bank = oracle::random_tight_bank(s, rng);
  Eigen::MatrixXcd m = bank.matrix;
  m.col(3).setZero();
  const FilterBank zero_tail = FilterBank::from_matrix(s, m);
  const RealImage map = edge_map(zero_tail, 3, 16, 1.0);
  for (double v : map.values()) CHECK(v == 0.0);
}

TEST_CASE("edge map matches the direct trigonometric sum") {
  Rng rng(40);
  const PatchSupport s = make_support(3, 3);
  const FilterBank bank = oracle::random_tight_bank(s, rng);
  const int r = 4, res = 12;
  const double fov = 2.0;
  const RealImage map = edge_map(bank, r, res, fov);

  for (int p2 = 0; p2 < res; ++p2)
    for (int p1 = 0; p1 < res; ++p1) {
      const double x1 = -fov / 2 + p1 * fov / res;
      const double x2 = -fov / 2 + p2 * fov / res;
      double sumsq = 0.0;
      for (int j = r; j < s.size(); ++j) {
        Complex phi{};
        for (int l2 = 0; l2 < s.k2; ++l2)
          for (int l1 = 0; l1 < s.k1; ++l1) {
            const double ang = -2.0 * oracle::kPi * (l1 * x1 + l2 * x2) / fov;
            phi += bank.filters[j].at(l1, l2) * Complex(std::cos(ang), std::sin(ang));
          }
        sumsq += std::norm(phi / fov);
      }
      const double direct = std::sqrt(sumsq);
      const double fast = map.values()[static_cast<std::size_t>(p1) + static_cast<std::size_t>(res) * p2];
      CHECK(fast == doctest::Approx(direct).epsilon(1e-10));
    }
}

TEST_CASE("edge map is invariant to a common support translation") {
  // shifting every filter by the same offset multiplies each phi_j by a
  // unimodular factor, so the map is unchanged pointwise
  Rng rng(41);
  const PatchSupport small = make_support(2, 2);
  const PatchSupport big = make_support(4, 4);
  Eigen::MatrixXcd shifted = Eigen::MatrixXcd::Zero(16, 16);
  const FilterBank base = oracle::random_tight_bank(small, rng);
  // place the 2x2 filters at offset (2, 1) inside a 4x4 support, keeping only
  // the first four filters' tail structure comparable
  for (int j = 0; j < 4; ++j)
    for (int l2 = 0; l2 < 2; ++l2)
      for (int l1 = 0; l1 < 2; ++l1)
        shifted(big.pos(l1 + 2, l2 + 1), j) = base.matrix(small.pos(l1, l2), j);

  Eigen::MatrixXcd unshifted = Eigen::MatrixXcd::Zero(16, 16);
  for (int j = 0; j < 4; ++j)
    for (int l2 = 0; l2 < 2; ++l2)
      for (int l1 = 0; l1 < 2; ++l1)
        unshifted(big.pos(l1, l2), j) = base.matrix(small.pos(l1, l2), j);

  // tail = filters 1..3 in both banks (column 0 is the "kept" one)
  const FilterBank a = FilterBank::from_matrix(big, unshifted);
  const FilterBank b = FilterBank::from_matrix(big, shifted);
  const RealImage ma = edge_map(a, 1, 16, 1.0);
  const RealImage mb = edge_map(b, 1, 16, 1.0);
  for (std::size_t i = 0; i < ma.values().size(); ++i)
    CHECK(ma.values()[i] == doctest::Approx(mb.values()[i]).epsilon(1e-12));
}

TEST_CASE("svd filter phases do not affect observable outputs") {
  Rng rng(42);
  const Grid g = make_grid(8);
  const PatchSupport s = make_support(2, 2);
  const GradientPair w = oracle::random_pair(g, rng);
  const HankelMatrix h = hankel_explicit(w, s, HankelBoundary::interior);
  const FilterBank bank = filters_from_svd(h).bank;

  // re-phase every column with a random unimodular factor
  Eigen::MatrixXcd rephased = bank.matrix;
  for (int j = 0; j < s.size(); ++j) {
    const double ang = rng.uniform(0.0, 2.0 * oracle::kPi);
    rephased.col(j) *= Complex(std::cos(ang), std::sin(ang));
  }
  const FilterBank bank2 = FilterBank::from_matrix(s, rephased);

  CHECK(check_uep(bank2) <= 1e-10);
  const GradientPair r1 = synthesize(bank, analyze(bank, w));
  const GradientPair r2 = synthesize(bank2, analyze(bank2, w));
  CHECK(oracle::dist(r1, r2) <= 1e-10 * w.norm());
  const RealImage m1 = edge_map(bank, 2, 8, 1.0);
  const RealImage m2 = edge_map(bank2, 2, 8, 1.0);
  for (std::size_t i = 0; i < m1.values().size(); ++i)
    CHECK(m1.values()[i] == doctest::Approx(m2.values()[i]).epsilon(1e-10));
}

TEST_CASE("edge map rejects bad rank cutoffs") {
  Rng rng(43);
  const FilterBank bank = oracle::random_tight_bank(make_support(2, 2), rng);
  CHECK_THROWS_AS(edge_map(bank, 4, 16, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(edge_map(bank, -1, 16, 1.0), std::invalid_argument);
}

TEST_SUITE_END();
