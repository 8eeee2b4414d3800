// Batch driver for the off-the-grid reconstruction pipeline:
//   phantom -> mask -> sample -> reconstruct -> metrics / edges
// Every subcommand echoes its resolved configuration as [cfg] lines before
// doing any work, reports written files as [out] lines, and exits nonzero on
// any validation or format failure.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hfmri/errors.hpp"
#include "hfmri/fft.hpp"
#include "hfmri/io.hpp"
#include "hfmri/metrics.hpp"
#include "hfmri/phantom.hpp"
#include "hfmri/sampling.hpp"
#include "hfmri/solver.hpp"

namespace {

using hfmri::Complex;

void cfg(const std::string& key, const std::string& value) {
  std::cout << "[cfg] " << key << " = " << value << "\n";
}

void out_line(const std::string& path) { std::cout << "[out] " << path << "\n"; }

hfmri::RealImage magnitude_image(const hfmri::ComplexImage& img) {
  hfmri::RealImage out(img.grid());
  auto src = img.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = std::abs(src[i]);
  return out;
}

double max_value(const hfmri::RealImage& img) {
  double m = 0.0;
  for (double v : img.values()) m = std::max(m, v);
  return m;
}

int run_phantom(const std::string& spec_path, const std::string& out_path, bool dump_dc) {
  const hfmri::PhantomFile file = hfmri::read_phantom_file(spec_path);
  cfg("spec", spec_path);
  cfg("N", std::to_string(file.n));
  cfg("L", std::to_string(file.phantom.fov));
  cfg("ellipses", std::to_string(file.phantom.components.size()));
  const hfmri::ComplexImage v = hfmri::ellipse_kspace(file.phantom, hfmri::make_grid(file.n));
  if (dump_dc) {
    const Complex dc = v.at(0, 0);
    std::ostringstream ss;
    ss.precision(17);
    ss << "[dc] " << dc.real() << " " << dc.imag();
    std::cout << ss.str() << "\n";
  }
  hfmri::write_array(out_path, v);
  out_line(out_path);
  return 0;
}

int run_mask(int n, double ratio, double decay, int center, std::uint64_t seed,
             const std::string& out_path) {
  const hfmri::Grid grid = hfmri::make_grid(n);
  if (center < 0) center = static_cast<int>(std::ceil(0.04 * n));
  cfg("N", std::to_string(n));
  cfg("ratio", std::to_string(ratio));
  cfg("decay", std::to_string(decay));
  cfg("center", std::to_string(center));
  cfg("seed", std::to_string(seed));
  const hfmri::SamplingMask mask = hfmri::vardensity_mask(grid, ratio, decay, center, seed);
  std::cout << "[info] ones = " << mask.ones() << " achieved_ratio = " << mask.ratio << "\n";
  hfmri::write_mask(out_path, mask);
  out_line(out_path);
  return 0;
}

int run_sample(const std::string& kspace_path, const std::string& mask_path, double snr_db,
               std::uint64_t seed, const std::string& out_path) {
  const hfmri::ComplexImage full = hfmri::read_array(kspace_path);
  const hfmri::SamplingMask mask = hfmri::read_mask(mask_path);
  if (full.grid() != mask.grid) throw std::invalid_argument("sample: k-space and mask N differ");
  cfg("kspace", kspace_path);
  cfg("mask", mask_path);
  cfg("snr_db", std::isinf(snr_db) ? "inf" : std::to_string(snr_db));
  cfg("seed", std::to_string(seed));
  // restrict first, then inject noise on the retained samples only
  const hfmri::ComplexImage restricted = hfmri::zero_fill(full, mask);
  const hfmri::NoisyData noisy = hfmri::add_noise_to_snr(restricted, mask, snr_db, seed);
  if (std::isinf(noisy.realized_snr_db))
    std::cout << "[info] realized_snr_db = inf\n";
  else
    std::cout << "[info] realized_snr_db = " << noisy.realized_snr_db << "\n";
  hfmri::write_array(out_path, noisy.data);
  out_line(out_path);
  return 0;
}

int run_reconstruct(const std::string& data_path, const std::string& mask_path,
                    const std::string& config_path, const std::string& out_kspace,
                    const std::string& out_image, const std::string& out_filters,
                    const std::string& trace_path, bool zero_fill_only, double win_lo,
                    double win_hi) {
  const hfmri::ComplexImage data = hfmri::read_array(data_path);
  const hfmri::SamplingMask mask = hfmri::read_mask(mask_path);
  if (data.grid() != mask.grid) throw std::invalid_argument("reconstruct: data and mask N differ");

  hfmri::SolverConfig config = config_path.empty()
                                   ? hfmri::config_from_params(hfmri::SolverParams{})
                                   : hfmri::parse_config(config_path);
  cfg("data", data_path);
  cfg("mask", mask_path);
  cfg("zero_fill", zero_fill_only ? "true" : "false");
  for (const auto& [k, v] : config.resolved) cfg(k, v);

  const auto write_outputs = [&](const hfmri::ComplexImage& kspace) {
    if (!out_kspace.empty()) {
      hfmri::write_array(out_kspace, kspace);
      out_line(out_kspace);
    }
    if (!out_image.empty()) {
      const hfmri::RealImage img = magnitude_image(hfmri::idft(kspace));
      const double hi = win_hi > win_lo ? win_hi : max_value(img);
      hfmri::write_image_pgm(out_image, img, win_lo, hi > win_lo ? hi : win_lo + 1.0);
      out_line(out_image);
    }
  };

  if (zero_fill_only) {
    write_outputs(hfmri::zero_fill(data, mask));
    return 0;
  }

  std::ofstream trace;
  if (!trace_path.empty()) {
    trace.open(trace_path);
    if (!trace) throw hfmri::FormatError("cannot open trace file: " + trace_path);
    trace << "# iter F rel_change\n";
    trace.precision(12);
  }

  hfmri::ComplexImage last_good;
  hfmri::SolverCallbacks callbacks;
  callbacks.on_iteration = [&](const hfmri::IterationInfo& info) {
    std::cout << "[iter] " << info.iter << " " << info.objective << " " << info.rel_change
              << std::endl;
    if (trace.is_open())
      trace << info.iter << " " << info.objective << " " << info.rel_change << "\n";
  };
  callbacks.on_state = [&](const hfmri::SolverStateView& view) { last_good = view.v; };

  const auto t0 = std::chrono::steady_clock::now();
  try {
    hfmri::ReconstructionResult result = hfmri::reconstruct(data, mask, config.params, callbacks);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "[info] iterations = " << result.iterations
              << " converged = " << (result.converged ? "yes" : "no") << " wall_time_s = " << secs
              << "\n";
    write_outputs(result.kspace);
    if (!out_filters.empty()) {
      hfmri::write_filters(out_filters, result.bank);
      out_line(out_filters);
    }
    if (trace.is_open()) out_line(trace_path);
  } catch (const hfmri::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    if (!out_kspace.empty() && last_good.n() > 0) {
      const std::string rescue = out_kspace + ".lastgood";
      hfmri::write_array(rescue, last_good);
      std::cerr << "last good iterate written to " << rescue << "\n";
    }
    return 1;
  }
  return 0;
}

int run_metrics(const std::string& ref_path, const std::string& test_path,
                const std::string& out_path, const std::string& domain) {
  hfmri::ComplexImage ref = hfmri::read_array(ref_path);
  hfmri::ComplexImage test = hfmri::read_array(test_path);
  cfg("reference", ref_path);
  cfg("test", test_path);
  cfg("domain", domain);
  if (domain == "kspace") {
    ref = hfmri::idft(ref);
    test = hfmri::idft(test);
  }
  hfmri::QualityReport report;
  report.snr_db = hfmri::snr_db(ref, test);
  report.hfen = hfmri::hfen(ref, test);
  std::cout << hfmri::report_summary(report) << "\n";
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw hfmri::FormatError("cannot open report file: " + out_path);
    out << hfmri::report_keyvalue(report);
    out_line(out_path);
  }
  return 0;
}

int run_edges(const std::string& filters_path, int rank_cutoff, int resolution, double fov,
              const std::string& out_path, double win_lo, double win_hi) {
  const hfmri::FilterBank bank = hfmri::read_filters(filters_path);
  cfg("filters", filters_path);
  cfg("r", std::to_string(rank_cutoff));
  cfg("res", std::to_string(resolution));
  cfg("L", std::to_string(fov));
  const hfmri::RealImage map = hfmri::edge_map(bank, rank_cutoff, resolution, fov);
  const double hi = win_hi > win_lo ? win_hi : max_value(map);
  hfmri::write_image_pgm(out_path, map, win_lo, hi > win_lo ? hi : win_lo + 1.0);
  out_line(out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Off-the-grid CS-MRI reconstruction via data-driven tight frames"};
  app.require_subcommand(1);

  auto* phantom = app.add_subcommand("phantom", "Synthesize fully sampled k-space from an ellipse spec");
  std::string ph_spec, ph_out;
  bool ph_dump_dc = false;
  phantom->add_option("--spec", ph_spec, "Phantom description file")->required();
  phantom->add_option("--out", ph_out, "Output KSP1 path")->required();
  phantom->add_flag("--dump-dc", ph_dump_dc, "Print the DC sample");

  auto* mask = app.add_subcommand("mask", "Generate a variable-density sampling mask");
  int mk_n = 256, mk_center = -1;
  double mk_ratio = 0.2, mk_decay = 2.0;
  std::uint64_t mk_seed = 1;
  std::string mk_out;
  mask->add_option("--N", mk_n, "Grid side length")->required();
  mask->add_option("--ratio", mk_ratio, "Sampling ratio in (0,1]")->required();
  mask->add_option("--decay", mk_decay, "Density decay exponent (default 2)");
  mask->add_option("--center", mk_center, "Fully sampled center radius (default ceil(0.04 N))");
  mask->add_option("--seed", mk_seed, "RNG seed");
  mask->add_option("--out", mk_out, "Output MSK1 path")->required();

  auto* sample = app.add_subcommand("sample", "Restrict k-space to a mask and add noise");
  std::string sm_kspace, sm_mask, sm_out;
  double sm_snr = std::numeric_limits<double>::infinity();
  std::uint64_t sm_seed = 2;
  sample->add_option("--kspace", sm_kspace, "Fully sampled KSP1")->required();
  sample->add_option("--mask", sm_mask, "MSK1 mask")->required();
  sample->add_option("--snr-db", sm_snr, "Target sample SNR in dB (inf = noiseless)");
  sample->add_option("--seed", sm_seed, "RNG seed");
  sample->add_option("--out", sm_out, "Output KSP1 path")->required();

  auto* rec = app.add_subcommand("reconstruct", "Run the reconstruction (or emit the zero-fill baseline)");
  std::string rc_data, rc_mask, rc_config, rc_out_k, rc_out_img, rc_out_flt, rc_trace;
  bool rc_zero_fill = false;
  double rc_win_lo = 0.0, rc_win_hi = 0.0;
  rec->add_option("--data", rc_data, "Undersampled KSP1")->required();
  rec->add_option("--mask", rc_mask, "MSK1 mask")->required();
  rec->add_option("--config", rc_config, "Solver config file (defaults if omitted)");
  rec->add_option("--out-kspace", rc_out_k, "Restored k-space KSP1");
  rec->add_option("--out-image", rc_out_img, "Magnitude image PGM");
  rec->add_option("--out-filters", rc_out_flt, "Learned filter bank FLT1");
  rec->add_option("--trace", rc_trace, "Objective trace file");
  rec->add_flag("--zero-fill", rc_zero_fill, "Skip the solver; zero-filled baseline");
  rec->add_option("--window", rc_win_lo, "Image window low (with --window-hi)");
  rec->add_option("--window-hi", rc_win_hi, "Image window high (default: data max)");

  auto* met = app.add_subcommand("metrics", "SNR / HFEN between two arrays");
  std::string mt_ref, mt_test, mt_out, mt_domain = "kspace";
  met->add_option("--reference", mt_ref, "Reference KSP1")->required();
  met->add_option("--test", mt_test, "Test KSP1")->required();
  met->add_option("--out", mt_out, "Report file");
  met->add_option("--domain", mt_domain, "kspace (idft first) or image")
      ->check(CLI::IsMember({"kspace", "image"}));

  auto* edges = app.add_subcommand("edges", "Annihilating-polynomial edge map from a filter bank");
  std::string ed_filters, ed_out;
  int ed_r = 0, ed_res = 256;
  double ed_fov = 1.0, ed_win_lo = 0.0, ed_win_hi = 0.0;
  edges->add_option("--filters", ed_filters, "FLT1 filter bank")->required();
  edges->add_option("--r", ed_r, "Rank cutoff (tail filters j > r form the map)")->required();
  edges->add_option("--res", ed_res, "Output resolution S");
  edges->add_option("--L", ed_fov, "Field of view");
  edges->add_option("--out", ed_out, "Output PGM path")->required();
  edges->add_option("--window", ed_win_lo, "Window low");
  edges->add_option("--window-hi", ed_win_hi, "Window high (default: map max)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (phantom->parsed()) return run_phantom(ph_spec, ph_out, ph_dump_dc);
    if (mask->parsed()) return run_mask(mk_n, mk_ratio, mk_decay, mk_center, mk_seed, mk_out);
    if (sample->parsed()) return run_sample(sm_kspace, sm_mask, sm_snr, sm_seed, sm_out);
    if (rec->parsed())
      return run_reconstruct(rc_data, rc_mask, rc_config, rc_out_k, rc_out_img, rc_out_flt,
                             rc_trace, rc_zero_fill, rc_win_lo, rc_win_hi);
    if (met->parsed()) return run_metrics(mt_ref, mt_test, mt_out, mt_domain);
    if (edges->parsed()) return run_edges(ed_filters, ed_r, ed_res, ed_fov, ed_out, ed_win_lo, ed_win_hi);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
