#include "hfmri/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "hfmri/conv.hpp"
#include "hfmri/errors.hpp"
#include "hfmri/fft.hpp"
#include "hfmri/hankel.hpp"
#include "hfmri/parallel.hpp"
#include "hfmri/svd.hpp"
#include "hfmri/weights.hpp"

namespace hfmri {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Complex hard_threshold(Complex z, double level) {
  return std::abs(z) > level ? z : Complex{};
}

}  // namespace

double SolverParams::threshold() const { return std::sqrt(2.0 * gamma / (mu + beta2)); }

int SolverParams::subgrid_n(const Grid& grid) const {
  return std::max(2, 2 * static_cast<int>(std::floor(grid.n * init_subgrid / 2.0)));
}

void SolverParams::validate(const Grid& grid) const {
  if (patch_size < 1 || patch_size > grid.n)
    throw std::invalid_argument("solver: patch size K must satisfy 1 <= K <= N");
  if (patch_size > subgrid_n(grid))
    throw std::invalid_argument("solver: K exceeds the initialization subgrid O'");
  const int m2 = patch_size * patch_size;
  if (init_rank < 1 || init_rank > m2)
    throw std::invalid_argument("solver: init rank r must satisfy 1 <= r <= K^2");
  if (!(mu > 0.0)) throw std::invalid_argument("solver: mu must be positive");
  if (gamma < 0.0) throw std::invalid_argument("solver: gamma must be >= 0");
  if (!(beta1 > 0.0) || !(beta2 > 0.0) || !(beta3 > 0.0))
    throw std::invalid_argument("solver: beta weights must be positive");
  if (!(eps > 0.0)) throw std::invalid_argument("solver: eps must be positive");
  if (max_iter < 1) throw std::invalid_argument("solver: max_iter must be >= 1");
  if (!(fov > 0.0)) throw std::invalid_argument("solver: FOV must be positive");
  if (!(init_subgrid > 0.0) || init_subgrid > 1.0)
    throw std::invalid_argument("solver: init_subgrid must be in (0, 1]");
}

namespace {

// Clip one entry so that norm(z) <= R^2 holds exactly in floating point;
// the rescale alone can land one rounding step above the bound (or stall
// when R/|z| rounds to 1), so nudge down decisively until inside.
inline Complex clip_magnitude(Complex z, double bound, double bound_sq) {
  if (std::norm(z) <= bound_sq) return z;
  z *= bound / std::abs(z);
  while (std::norm(z) > bound_sq) z *= 0.999999999999999;
  return z;
}

}  // namespace

ComplexImage project_magnitude(const ComplexImage& v, double bound) {
  if (!(bound > 0.0)) throw std::invalid_argument("project_magnitude: bound must be positive");
  ComplexImage out = v;
  const double b2 = bound * bound;
  for (Complex& z : out.values()) z = clip_magnitude(z, bound, b2);
  return out;
}

double resolve_bound(const ComplexImage& data, const SamplingMask& mask, const SolverParams& p) {
  if (p.bound > 0.0) return p.bound;
  if (mask.at(0, 0)) {
    const double dc = std::abs(data.at(0, 0));
    if (dc > 0.0) return dc;
  }
  return 1e8;
}

ComplexImage zero_fill(const ComplexImage& data, const SamplingMask& mask) {
  if (data.grid() != mask.grid) throw std::invalid_argument("zero_fill: grid mismatch");
  ComplexImage out(data.grid());
  auto src = data.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i)
    if (mask.indicator[i]) dst[i] = src[i];
  return out;
}

SolverState init_state(const ComplexImage& data, const SamplingMask& mask, const SolverParams& p) {
  if (data.grid() != mask.grid) throw std::invalid_argument("init_state: grid mismatch");
  const Grid& grid = data.grid();
  p.validate(grid);
  if (mask.ones() == 0) throw std::invalid_argument("init_state: empty mask");

  SolverState s;
  s.bound = resolve_bound(data, mask, p);
  s.v = project_magnitude(zero_fill(data, mask), s.bound);

  const WeightSpec wspec{p.fov};
  const GradientPair lam = gradient_weight(s.v, wspec);

  // Initialization filters: SVD of the interior two-fold Hankel of Lambda v0
  // restricted to the dense low-frequency block O'.
  const int nsub = p.subgrid_n(grid);
  const Grid sub = make_grid(nsub);
  GradientPair sub_pair(sub);
  for (int k2 = sub.min_index(); k2 <= sub.max_index(); ++k2)
    for (int k1 = sub.min_index(); k1 <= sub.max_index(); ++k1) {
      sub_pair.w1.at(k1, k2) = lam.w1.at(k1, k2);
      sub_pair.w2.at(k1, k2) = lam.w2.at(k1, k2);
    }
  const PatchSupport support = make_support(p.patch_size, p.patch_size);
  const HankelMatrix h = hankel_explicit(sub_pair, support, HankelBoundary::interior);
  s.bank = filters_from_svd(h).bank;

  // c0: analysis coefficients for the first r filters, exact zeros past r.
  s.c = analyze(s.bank, lam);
  for (int j = p.init_rank; j < support.size(); ++j) {
    GradientPair zero(grid);
    s.c.coeffs[j] = std::move(zero);
  }
  s.iter = 0;
  s.rel_change = kInf;
  return s;
}

ComplexImage update_v(const SolverState& s, const ComplexImage& data, const SamplingMask& mask,
                      const SolverParams& p) {
  const Grid& grid = s.v.grid();
  if (data.grid() != grid || mask.grid != grid) throw std::invalid_argument("update_v: grid mismatch");
  const WeightSpec wspec{p.fov};
  const GradientPair syn = synthesize(s.bank, s.c);
  const ComplexImage adj = gradient_weight_adjoint(syn, wspec);

  ComplexImage out(grid);
  auto f = data.values();
  auto vn = s.v.values();
  auto aj = adj.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const auto [k1, k2] = grid.index_at(i);
    const double m = mask.indicator[i] ? 1.0 : 0.0;
    const double den = m + p.mu * wspec.weight_sq(k1, k2) + p.beta1;
    dst[i] = (m * f[i] + p.mu * aj[i] + p.beta1 * vn[i]) / den;
  }
  return project_magnitude(out, s.bound);
}

CoefficientSet update_c(const SolverState& s, const SolverParams& p) {
  const GradientPair lam = gradient_weight(s.v, WeightSpec{p.fov});
  const CoefficientSet a = analyze(s.bank, lam);
  const double level = p.threshold();
  const double wa = p.mu / (p.mu + p.beta2);
  const double wb = p.beta2 / (p.mu + p.beta2);

  CoefficientSet out = a;
  for (int j = 0; j < out.filter_count(); ++j)
    for (int i = 0; i < 2; ++i) {
      auto az = a.coeffs[j].channel(i).values();
      auto cz = s.c.coeffs[j].channel(i).values();
      auto oz = out.coeffs[j].channel(i).values();
      for (std::size_t t = 0; t < oz.size(); ++t)
        oz[t] = hard_threshold(wa * az[t] + wb * cz[t], level);
    }
  return out;
}

FilterBank update_w(const SolverState& s, const SolverParams& p) {
  const GradientPair lam = gradient_weight(s.v, WeightSpec{p.fov});
  Eigen::MatrixXcd g = hankel_gram(lam, s.c.coeffs, s.bank.support);
  g += (p.beta3 / p.mu) * s.bank.matrix;
  const Svd svd = svd_full_v(g);
  const double scale = 1.0 / std::sqrt(static_cast<double>(s.bank.support.size()));
  return FilterBank::from_matrix(s.bank.support, scale * (svd.u * svd.v.adjoint()));
}

double objective(const SolverState& s, const ComplexImage& data, const SamplingMask& mask,
                 const SolverParams& p) {
  auto f = data.values();
  auto v = s.v.values();
  double fidelity = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (mask.indicator[i]) fidelity += std::norm(v[i] - f[i]);

  const GradientPair lam = gradient_weight(s.v, WeightSpec{p.fov});
  const CoefficientSet a = analyze(s.bank, lam);
  double quad = 0.0;
  for (int j = 0; j < a.filter_count(); ++j)
    for (int i = 0; i < 2; ++i) {
      auto az = a.coeffs[j].channel(i).values();
      auto cz = s.c.coeffs[j].channel(i).values();
      for (std::size_t t = 0; t < az.size(); ++t) quad += std::norm(az[t] - cz[t]);
    }
  return 0.5 * fidelity + 0.5 * p.mu * quad +
         p.gamma * static_cast<double>(s.c.nonzero_count());
}

void step(SolverState& s, const ComplexImage& data, const SamplingMask& mask,
          const SolverParams& p) {
  ComplexImage vnew = update_v(s, data, mask, p);
  s.rel_change = 0.0;
  {
    double num = 0.0, den = 0.0;
    auto a = s.v.values();
    auto b = vnew.values();
    for (std::size_t i = 0; i < a.size(); ++i) {
      num += std::norm(b[i] - a[i]);
      den += std::norm(a[i]);
    }
    s.rel_change = den > 0.0 ? std::sqrt(num / den) : kInf;
  }
  s.v = std::move(vnew);
  s.c = update_c(s, p);
  s.bank = update_w(s, p);
  ++s.iter;
  s.trace.push_back({s.iter, objective(s, data, mask, p), s.rel_change});
}

// ---------------------------------------------------------------------------
// Fused reconstruction loop. Same math as the public updates, but keeps the
// coefficient spectra cached so each iteration costs ~6 K^2 transforms.
// ---------------------------------------------------------------------------

namespace {

class FastLoop {
public:
  FastLoop(const ComplexImage& data, const SamplingMask& mask, const SolverParams& p,
           SolverState&& s0)
      : data_(zero_fill(data, mask)),
        mask_(mask),
        p_(p),
        grid_(data.grid()),
        sz_(grid_.size()),
        m2_(p.patch_size * p.patch_size),
        wspec_{p.fov},
        state_(std::move(s0)) {
    wsq_.resize(sz_);
    denom_.resize(sz_);
    for (std::size_t i = 0; i < sz_; ++i) {
      const auto [k1, k2] = grid_.index_at(i);
      wsq_[i] = wspec_.weight_sq(k1, k2);
      denom_[i] = (mask_.indicator[i] ? 1.0 : 0.0) + p_.mu * wsq_[i] + p_.beta1;
    }
    refresh_filter_spectra();
    cspec_.resize(m2_);
    parallel_for(static_cast<std::size_t>(m2_), [&](std::size_t j) {
      cspec_[j][0] = image_spectrum(state_.c.coeffs[j].w1);
      cspec_[j][1] = image_spectrum(state_.c.coeffs[j].w2);
    });
    c_norm_sq_ = 0.0;
    for (const GradientPair& pair : state_.c.coeffs) {
      const double t = pair.norm();
      c_norm_sq_ += t * t;
    }
    c_nnz_ = state_.c.nonzero_count();
  }

  ReconstructionResult run(const SolverCallbacks& cb) {
    ReconstructionResult result;
    result.bound = state_.bound;
    double rel = kInf;
    bool converged = false, cancelled = false;

    for (;;) {
      const GradientPair syn = synthesize_cached();
      const double f_val = objective_cached(syn);
      state_.trace.push_back({state_.iter, f_val, rel});
      if (cb.on_iteration) cb.on_iteration(state_.trace.back());
      if (cb.on_state) cb.on_state({state_.iter, state_.v, state_.bank, state_.c});
      if (!std::isfinite(f_val)) {
        std::ostringstream ss;
        ss << "solver: non-finite objective at iteration " << state_.iter
           << " (max|v| = " << state_.v.max_abs() << ", |c|^2 = " << c_norm_sq_
           << ", nnz = " << c_nnz_ << ")";
        throw NumericalError(ss.str());
      }
      if (state_.iter > 0 && rel <= p_.eps) {
        converged = true;
        break;
      }
      if (state_.iter >= p_.max_iter) break;
      if (cb.cancelled && cb.cancelled()) {
        cancelled = true;
        break;
      }

      rel = advance_v(syn);
      state_.rel_change = rel;
      ++state_.iter;

      if (cb.cancelled && cb.cancelled()) {
        cancelled = true;
        break;
      }

      const Eigen::MatrixXcd gram = advance_c_and_gram();

      if (cb.cancelled && cb.cancelled()) {
        cancelled = true;
        break;
      }

      advance_bank(gram);
    }

    result.iterations = state_.iter;
    result.converged = converged;
    result.cancelled = cancelled;
    result.trace = state_.trace;
    result.bank = std::move(state_.bank);
    result.image = idft(state_.v);
    result.kspace = std::move(state_.v);
    return result;
  }

private:
  void refresh_filter_spectra() {
    filt_spec_.resize(m2_);
    parallel_for(static_cast<std::size_t>(m2_), [&](std::size_t j) {
      filt_spec_[j] = filter_correlation_spectrum(state_.bank.filters[j], grid_);
    });
  }

  GradientPair synthesize_cached() const {
    const int workers = std::max(1, std::min(thread_budget(), m2_));
    const int chunk = (m2_ + workers - 1) / workers;
    std::vector<std::vector<Complex>> acc1(workers), acc2(workers);
    parallel_for(static_cast<std::size_t>(workers), [&](std::size_t w) {
      acc1[w].assign(sz_, Complex{});
      acc2[w].assign(sz_, Complex{});
      const int begin = static_cast<int>(w) * chunk;
      const int end = std::min(begin + chunk, m2_);
      for (int j = begin; j < end; ++j)
        for (std::size_t t = 0; t < sz_; ++t) {
          const Complex gc = std::conj(filt_spec_[j][t]);
          acc1[w][t] += gc * cspec_[j][0][t];
          acc2[w][t] += gc * cspec_[j][1][t];
        }
    });
    for (int w = 1; w < workers; ++w)
      for (std::size_t t = 0; t < sz_; ++t) {
        acc1[0][t] += acc1[w][t];
        acc2[0][t] += acc2[w][t];
      }
    return GradientPair(image_from_spectrum(grid_, std::move(acc1[0])),
                        image_from_spectrum(grid_, std::move(acc2[0])));
  }

  /// F via the tight-frame identity ||W(Lambda v) - c||^2 =
  /// ||Lambda v||^2 - 2 Re<Lambda v, W* c> + ||c||^2.
  double objective_cached(const GradientPair& syn) const {
    auto v = state_.v.values();
    auto f = data_.values();
    auto s1 = syn.w1.values();
    auto s2 = syn.w2.values();
    const double scale = 2.0 * std::numbers::pi / p_.fov;
    double fidelity = 0.0, lam_sq = 0.0, cross = 0.0;
    for (std::size_t i = 0; i < sz_; ++i) {
      if (mask_.indicator[i]) fidelity += std::norm(v[i] - f[i]);
      lam_sq += wsq_[i] * std::norm(v[i]);
      const auto [k1, k2] = grid_.index_at(i);
      // Re<Lambda v, syn> with (Lambda_i v)[k] = i scale k_i v[k]
      const Complex lv1 = Complex(0.0, scale * k1) * v[i];
      const Complex lv2 = Complex(0.0, scale * k2) * v[i];
      cross += (std::conj(lv1) * s1[i] + std::conj(lv2) * s2[i]).real();
    }
    return 0.5 * fidelity + 0.5 * p_.mu * (lam_sq - 2.0 * cross + c_norm_sq_) +
           p_.gamma * static_cast<double>(c_nnz_);
  }

  double advance_v(const GradientPair& syn) {
    const ComplexImage adj = gradient_weight_adjoint(syn, wspec_);
    auto f = data_.values();
    auto aj = adj.values();
    auto v = state_.v.values();
    const double b2 = state_.bound * state_.bound;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < sz_; ++i) {
      const double m = mask_.indicator[i] ? 1.0 : 0.0;
      const Complex z = clip_magnitude(
          (m * f[i] + p_.mu * aj[i] + p_.beta1 * v[i]) / denom_[i], state_.bound, b2);
      num += std::norm(z - v[i]);
      den += std::norm(v[i]);
      v[i] = z;
    }
    return den > 0.0 ? std::sqrt(num / den) : kInf;
  }

  Eigen::MatrixXcd advance_c_and_gram() {
    const GradientPair lam = gradient_weight(state_.v, wspec_);
    const std::vector<Complex> wspec1 = image_spectrum(lam.w1);
    const std::vector<Complex> wspec2 = image_spectrum(lam.w2);
    const double level = p_.threshold();
    const double wa = p_.mu / (p_.mu + p_.beta2);
    const double wb = p_.beta2 / (p_.mu + p_.beta2);
    const double inv_n2 = 1.0 / static_cast<double>(sz_);

    Eigen::MatrixXcd gram(m2_, m2_);
    std::vector<double> norm_sq_j(m2_, 0.0);
    std::vector<std::size_t> nnz_j(m2_, 0);

    parallel_for(static_cast<std::size_t>(m2_), [&](std::size_t j) {
      std::vector<Complex> buf(sz_);
      for (int ch = 0; ch < 2; ++ch) {
        const std::vector<Complex>& wsp = ch == 0 ? wspec1 : wspec2;
        // blended analysis target in the spectral domain, then threshold in space
        for (std::size_t t = 0; t < sz_; ++t)
          buf[t] = wa * filt_spec_[j][t] * wsp[t] + wb * cspec_[j][ch][t];
        fft_backward_inplace(grid_.n, buf);
        ComplexImage& cimg = state_.c.coeffs[j].channel(ch);
        auto dst = cimg.values();
        for (std::size_t t = 0; t < sz_; ++t) {
          const Complex z = hard_threshold(buf[t] * inv_n2, level);
          buf[t] = z;
          norm_sq_j[j] += std::norm(z);
          if (z != Complex{}) ++nnz_j[j];
        }
        // buf holds thresholded values in standard order; store centered copy
        // and refresh the cached spectrum
        const ComplexImage centered = to_centered_order(grid_, buf);
        std::copy(centered.values().begin(), centered.values().end(), dst.begin());
        fft_forward_inplace(grid_.n, buf);
        cspec_[j][ch] = buf;
      }
      // gram column: (H* C)[l, j] = conj(IFFT(sum_ch conj(cspec) .* wspec)[l])
      for (std::size_t t = 0; t < sz_; ++t)
        buf[t] = std::conj(cspec_[j][0][t]) * wspec1[t] + std::conj(cspec_[j][1][t]) * wspec2[t];
      fft_backward_inplace(grid_.n, buf);
      const PatchSupport& sup = state_.bank.support;
      for (int l2 = 0; l2 < sup.k2; ++l2)
        for (int l1 = 0; l1 < sup.k1; ++l1)
          gram(sup.pos(l1, l2), static_cast<Eigen::Index>(j)) =
              std::conj(buf[static_cast<std::size_t>(l1) + static_cast<std::size_t>(grid_.n) * l2] *
                        inv_n2);
    });

    c_norm_sq_ = 0.0;
    c_nnz_ = 0;
    for (int j = 0; j < m2_; ++j) {
      c_norm_sq_ += norm_sq_j[j];
      c_nnz_ += nnz_j[j];
    }
    return gram;
  }

  void advance_bank(const Eigen::MatrixXcd& gram) {
    Eigen::MatrixXcd g = gram + (p_.beta3 / p_.mu) * state_.bank.matrix;
    const Svd svd = svd_full_v(g);
    const double scale = 1.0 / std::sqrt(static_cast<double>(m2_));
    state_.bank = FilterBank::from_matrix(state_.bank.support, scale * (svd.u * svd.v.adjoint()));
    refresh_filter_spectra();
  }

  ComplexImage data_;
  const SamplingMask& mask_;
  const SolverParams& p_;
  Grid grid_;
  std::size_t sz_;
  int m2_;
  WeightSpec wspec_;
  SolverState state_;
  std::vector<double> wsq_, denom_;
  std::vector<std::vector<Complex>> filt_spec_;
  std::vector<std::array<std::vector<Complex>, 2>> cspec_;
  double c_norm_sq_ = 0.0;
  std::size_t c_nnz_ = 0;
};

}  // namespace

ReconstructionResult reconstruct(const ComplexImage& data, const SamplingMask& mask,
                                 const SolverParams& p, const SolverCallbacks& callbacks) {
  SolverState s0 = init_state(data, mask, p);
  FastLoop loop(data, mask, p, std::move(s0));
  return loop.run(callbacks);
}

}  // namespace hfmri
