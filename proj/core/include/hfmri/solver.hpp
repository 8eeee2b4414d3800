#pragma once

#include <functional>
#include <vector>

#include "hfmri/frames.hpp"
#include "hfmri/grid.hpp"
#include "hfmri/sampling.hpp"

namespace hfmri {

/// Parameters of the proximal alternating minimization. Defaults are the
/// published phantom settings (K = 25, r = 500, mu = 0.1, gamma = 10,
/// beta_i = 1e-4, eps = 2e-4, at most 600 iterations).
struct SolverParams {
  int patch_size = 25;   // K, square patches
  int init_rank = 500;   // r used for the coefficient initialization
  double mu = 0.1;
  double gamma = 10.0;
  double beta1 = 1e-4;
  double beta2 = 1e-4;
  double beta3 = 1e-4;
  double bound = 0.0;  // R for the constraint set; <= 0 selects the auto rule
  double eps = 2e-4;
  int max_iter = 600;
  double fov = 1.0;          // L
  double init_subgrid = 0.5;  // fraction of N kept for the initialization SVD

  /// Hard-threshold level sqrt(2 gamma / (mu + beta2)).
  double threshold() const;

  void validate(const Grid& grid) const;

  /// Side length of the initialization subgrid O' (even, = 2 floor(N f / 2)).
  int subgrid_n(const Grid& grid) const;
};

struct IterationInfo {
  int iter = 0;
  double objective = 0.0;
  double rel_change = 0.0;  // +inf on the initial entry
};

/// PAM iterate: (v_n, c_n, A_n) plus bookkeeping. The bank stays tight and
/// every v stays inside the magnitude bound at all times.
struct SolverState {
  ComplexImage v;
  CoefficientSet c;
  FilterBank bank;
  int iter = 0;
  double bound = 0.0;
  double rel_change = 0.0;
  std::vector<IterationInfo> trace;
};

/// Entrywise magnitude clip onto {|v[k]| <= R}, phase preserved, idempotent.
ComplexImage project_magnitude(const ComplexImage& v, double bound);

/// Published auto rule: R = |f[0]| if the origin is sampled, 1e8 otherwise.
double resolve_bound(const ComplexImage& data, const SamplingMask& mask, const SolverParams& p);

/// v0 = clip(zero-filled data); bank0 from the SVD of the interior two-fold
/// Hankel of Lambda v0 restricted to O'; c0 keeps the first r filters'
/// analysis coefficients and zeroes the tail.
SolverState init_state(const ComplexImage& data, const SamplingMask& mask, const SolverParams& p);

// The three closed-form block updates. update_v reads (v_n, c_n, A_n);
// update_c expects state.v already advanced to v_{n+1}; update_w expects
// state.c advanced to c_{n+1} as well.
ComplexImage update_v(const SolverState& s, const ComplexImage& data, const SamplingMask& mask,
                      const SolverParams& p);
CoefficientSet update_c(const SolverState& s, const SolverParams& p);
FilterBank update_w(const SolverState& s, const SolverParams& p);

/// F(v, c, A) = 1/2 ||mask v - f||^2 + mu/2 ||W(Lambda v) - c||^2 + gamma ||c||_0.
double objective(const SolverState& s, const ComplexImage& data, const SamplingMask& mask,
                 const SolverParams& p);

/// One full iteration v -> c -> W through the public updates, appending a
/// trace entry. Reference path; reconstruct() runs the same math fused.
void step(SolverState& s, const ComplexImage& data, const SamplingMask& mask,
          const SolverParams& p);

/// Read-only view of the internal iterate handed to on_state callbacks.
struct SolverStateView {
  int iter;
  const ComplexImage& v;
  const FilterBank& bank;
  const CoefficientSet& c;
};

struct SolverCallbacks {
  std::function<void(const IterationInfo&)> on_iteration;  // once per iteration, in order
  std::function<void(const SolverStateView&)> on_state;
  std::function<bool()> cancelled;  // polled between blocks
};

struct ReconstructionResult {
  ComplexImage kspace;
  ComplexImage image;  // idft of kspace
  FilterBank bank;
  std::vector<IterationInfo> trace;
  int iterations = 0;
  bool converged = false;
  bool cancelled = false;
  double bound = 0.0;
};

/// Runs Algorithm 1 to the stopping rule ||v_{n+1} - v_n|| / ||v_n|| <= eps
/// or the iteration cap. Deterministic for fixed inputs and thread count.
ReconstructionResult reconstruct(const ComplexImage& data, const SamplingMask& mask,
                                 const SolverParams& p, const SolverCallbacks& callbacks = {});

/// Baseline: zero-filled inverse DFT of the undersampled data.
ComplexImage zero_fill(const ComplexImage& data, const SamplingMask& mask);

}  // namespace hfmri
