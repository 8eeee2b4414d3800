#include "hfmri/metrics.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace hfmri {

namespace {

constexpr int kLogSize = 15;
constexpr double kLogSigma = 1.5;

std::vector<double> magnitude(const ComplexImage& img) {
  std::vector<double> out(img.grid().size());
  auto src = img.values();
  for (std::size_t p = 0; p < out.size(); ++p) out[p] = std::abs(src[p]);
  return out;
}

/// Periodic convolution of a real image with the (2h+1)^2 kernel.
std::vector<double> conv_kernel_periodic(const std::vector<double>& img, int n,
                                         const RealImage& kernel) {
  const int h = kernel.n() / 2;
  std::vector<double> out(img.size(), 0.0);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      double acc = 0.0;
      for (int dy = -h; dy <= h; ++dy) {
        int sy = (y + dy) % n;
        if (sy < 0) sy += n;
        for (int dx = -h; dx <= h; ++dx) {
          int sx = (x + dx) % n;
          if (sx < 0) sx += n;
          acc += kernel.at(dx, dy) * img[static_cast<std::size_t>(sx) + static_cast<std::size_t>(n) * sy];
        }
      }
      out[static_cast<std::size_t>(x) + static_cast<std::size_t>(n) * y] = acc;
    }
  }
  return out;
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

RealImage hfen_kernel() {
  RealImage k(make_grid(kLogSize));
  const double s2 = kLogSigma * kLogSigma;
  double gauss_sum = 0.0;
  for (int y = -kLogSize / 2; y <= kLogSize / 2; ++y)
    for (int x = -kLogSize / 2; x <= kLogSize / 2; ++x)
      gauss_sum += std::exp(-(x * x + y * y) / (2.0 * s2));
  double total = 0.0;
  for (int y = -kLogSize / 2; y <= kLogSize / 2; ++y)
    for (int x = -kLogSize / 2; x <= kLogSize / 2; ++x) {
      const double r2 = x * x + y * y;
      const double v = std::exp(-r2 / (2.0 * s2)) * (r2 - 2.0 * s2) / (s2 * s2 * gauss_sum);
      k.at(x, y) = v;
      total += v;
    }
  // remove the mean so constants map to zero exactly
  const double mean = total / (kLogSize * kLogSize);
  for (double& v : k.values()) v -= mean;
  return k;
}

double snr_db(const ComplexImage& reference, const ComplexImage& test) {
  if (reference.grid() != test.grid()) throw std::invalid_argument("snr_db: grid mismatch");
  const double ref_norm = reference.norm();
  if (!(ref_norm > 0.0)) throw std::invalid_argument("snr_db: zero reference");
  auto r = reference.values();
  auto t = test.values();
  double err_sq = 0.0;
  for (std::size_t p = 0; p < r.size(); ++p) {
    const double d = std::abs(t[p]) - std::abs(r[p]);
    err_sq += d * d;
  }
  if (err_sq == 0.0) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(ref_norm / std::sqrt(err_sq));
}

double hfen(const ComplexImage& reference, const ComplexImage& test) {
  if (reference.grid() != test.grid()) throw std::invalid_argument("hfen: grid mismatch");
  const RealImage kernel = hfen_kernel();
  const int n = reference.n();
  const std::vector<double> fr = conv_kernel_periodic(magnitude(reference), n, kernel);
  const std::vector<double> ft = conv_kernel_periodic(magnitude(test), n, kernel);
  const double den = norm2(fr);
  if (!(den > 0.0)) throw std::invalid_argument("hfen: reference has zero high-frequency content");
  std::vector<double> diff(fr.size());
  for (std::size_t p = 0; p < fr.size(); ++p) diff[p] = ft[p] - fr[p];
  return norm2(diff) / den;
}

double rel_change(const ComplexImage& prev, const ComplexImage& next) {
  if (prev.grid() != next.grid()) throw std::invalid_argument("rel_change: grid mismatch");
  const double prev_norm = prev.norm();
  if (!(prev_norm > 0.0)) throw std::invalid_argument("rel_change: zero previous iterate");
  auto a = prev.values();
  auto b = next.values();
  double s = 0.0;
  for (std::size_t p = 0; p < a.size(); ++p) s += std::norm(b[p] - a[p]);
  return std::sqrt(s) / prev_norm;
}

namespace {
std::string snr_text(double v) {
  if (std::isinf(v)) return "exact";
  std::ostringstream ss;
  ss.precision(6);
  ss << std::fixed << v;
  return ss.str();
}
}  // namespace

std::string report_keyvalue(const QualityReport& r) {
  std::ostringstream ss;
  ss.precision(6);
  ss << std::fixed;
  ss << "snr_db = " << snr_text(r.snr_db) << "\n";
  ss << "hfen = " << r.hfen << "\n";
  ss << "n_iters = " << r.n_iters << "\n";
  ss << "wall_time_s = " << r.wall_time_s << "\n";
  return ss.str();
}

std::string report_summary(const QualityReport& r) {
  std::ostringstream ss;
  ss.precision(6);
  ss << std::fixed;
  ss << "snr_db=" << snr_text(r.snr_db) << " hfen=" << r.hfen << " n_iters=" << r.n_iters
     << " wall_time_s=" << r.wall_time_s;
  return ss.str();
}

}  // namespace hfmri
