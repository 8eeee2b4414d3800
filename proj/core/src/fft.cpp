#include "hfmri/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace hfmri {

namespace {

// FFTW plan creation is not thread safe; execution via the new-array
// interface is. Plans are created with FFTW_UNALIGNED so they can run on
// any buffer.
class PlanCache {
public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int n, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto key = std::make_pair(n, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<Complex> scratch(static_cast<std::size_t>(n) * n);
    fftw_plan plan = fftw_plan_dft_2d(n, n,
                                      reinterpret_cast<fftw_complex*>(scratch.data()),
                                      reinterpret_cast<fftw_complex*>(scratch.data()),
                                      sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan) throw std::runtime_error("fftw_plan_dft_2d failed");
    plans_.emplace(key, plan);
    return plan;
  }

private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }
  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

void execute(int n, int sign, std::span<Complex> data) {
  if (data.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("fft: buffer size != N^2");
  fftw_plan plan = PlanCache::instance().get(n, sign);
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(data.data()),
                   reinterpret_cast<fftw_complex*>(data.data()));
}

}  // namespace

void fft_forward_inplace(int n, std::span<Complex> data) { execute(n, FFTW_FORWARD, data); }
void fft_backward_inplace(int n, std::span<Complex> data) { execute(n, FFTW_BACKWARD, data); }

std::vector<Complex> to_standard_order(const ComplexImage& img) {
  const Grid& g = img.grid();
  const int n = g.n;
  const int half = g.half();
  std::vector<Complex> out(g.size());
  auto src = img.values();
  for (int i2 = 0; i2 < n; ++i2) {
    const int s2 = (i2 - half + n) % n;
    for (int i1 = 0; i1 < n; ++i1) {
      const int s1 = (i1 - half + n) % n;
      out[static_cast<std::size_t>(s1) + static_cast<std::size_t>(n) * s2] =
          src[static_cast<std::size_t>(i1) + static_cast<std::size_t>(n) * i2];
    }
  }
  return out;
}

ComplexImage to_centered_order(const Grid& grid, std::span<const Complex> std_order) {
  const int n = grid.n;
  const int half = grid.half();
  if (std_order.size() != grid.size()) throw std::invalid_argument("to_centered_order: size mismatch");
  ComplexImage out(grid);
  auto dst = out.values();
  for (int i2 = 0; i2 < n; ++i2) {
    const int s2 = (i2 - half + n) % n;
    for (int i1 = 0; i1 < n; ++i1) {
      const int s1 = (i1 - half + n) % n;
      dst[static_cast<std::size_t>(i1) + static_cast<std::size_t>(n) * i2] =
          std_order[static_cast<std::size_t>(s1) + static_cast<std::size_t>(n) * s2];
    }
  }
  return out;
}

ComplexImage dft(const ComplexImage& u) {
  std::vector<Complex> buf = to_standard_order(u);
  fft_forward_inplace(u.n(), buf);
  return to_centered_order(u.grid(), buf);
}

ComplexImage idft(const ComplexImage& f) {
  std::vector<Complex> buf = to_standard_order(f);
  fft_backward_inplace(f.n(), buf);
  const double scale = 1.0 / static_cast<double>(f.grid().size());
  for (Complex& z : buf) z *= scale;
  return to_centered_order(f.grid(), buf);
}

}  // namespace hfmri
