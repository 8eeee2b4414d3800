#include "hfmri/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "hfmri/errors.hpp"

namespace hfmri {

namespace {

static_assert(sizeof(double) == 8 && std::numeric_limits<double>::is_iec559);

void put_u32(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> b = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                                 static_cast<char>((v >> 16) & 0xff),
                                 static_cast<char>((v >> 24) & 0xff)};
  out.write(b.data(), 4);
}

std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  in.read(reinterpret_cast<char*>(b.data()), 4);
  if (!in) throw FormatError("file truncated in header");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f64(std::ostream& out, double v) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  out.write(b.data(), 8);
}

double get_f64(std::istream& in) {
  std::array<unsigned char, 8> b{};
  in.read(reinterpret_cast<char*>(b.data()), 8);
  if (!in) throw FormatError("file truncated in payload");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

void expect_magic(std::istream& in, const char* magic, const std::string& path) {
  std::array<char, 4> b{};
  in.read(b.data(), 4);
  if (!in || std::memcmp(b.data(), magic, 4) != 0)
    throw FormatError(path + ": bad magic (expected " + magic + ")");
}

void expect_eof(std::istream& in, const std::string& path) {
  if (in.peek() != std::char_traits<char>::eof())
    throw FormatError(path + ": trailing bytes after payload");
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open: " + path);
  return in;
}

}  // namespace

void write_array(const std::string& path, const ComplexImage& img) {
  std::ofstream out = open_out(path);
  out.write("KSP1", 4);
  put_u32(out, static_cast<std::uint32_t>(img.n()));
  for (const Complex& z : img.values()) {
    put_f64(out, z.real());
    put_f64(out, z.imag());
  }
  if (!out) throw FormatError("write failed: " + path);
}

ComplexImage read_array(const std::string& path) {
  std::ifstream in = open_in(path);
  expect_magic(in, "KSP1", path);
  const std::uint32_t n = get_u32(in);
  if (n < 2 || n > 1u << 16) throw FormatError(path + ": implausible N");
  ComplexImage img(make_grid(static_cast<int>(n)));
  for (Complex& z : img.values()) {
    const double re = get_f64(in);
    const double im = get_f64(in);
    z = Complex(re, im);
  }
  expect_eof(in, path);
  return img;
}

void write_mask(const std::string& path, const SamplingMask& mask) {
  std::ofstream out = open_out(path);
  out.write("MSK1", 4);
  put_u32(out, static_cast<std::uint32_t>(mask.grid.n));
  out.write(reinterpret_cast<const char*>(mask.indicator.data()),
            static_cast<std::streamsize>(mask.indicator.size()));
  if (!out) throw FormatError("write failed: " + path);
}

SamplingMask read_mask(const std::string& path) {
  std::ifstream in = open_in(path);
  expect_magic(in, "MSK1", path);
  const std::uint32_t n = get_u32(in);
  if (n < 2 || n > 1u << 16) throw FormatError(path + ": implausible N");
  SamplingMask mask{make_grid(static_cast<int>(n)), {}, 0.0, 0};
  mask.indicator.resize(static_cast<std::size_t>(n) * n);
  in.read(reinterpret_cast<char*>(mask.indicator.data()),
          static_cast<std::streamsize>(mask.indicator.size()));
  if (!in) throw FormatError(path + ": file truncated in payload");
  expect_eof(in, path);
  for (std::uint8_t b : mask.indicator)
    if (b > 1) throw FormatError(path + ": mask byte outside {0,1}");
  mask.ratio = static_cast<double>(mask.ones()) / static_cast<double>(mask.grid.size());
  return mask;
}

void write_filters(const std::string& path, const FilterBank& bank) {
  std::ofstream out = open_out(path);
  out.write("FLT1", 4);
  put_u32(out, static_cast<std::uint32_t>(bank.filter_count()));
  put_u32(out, static_cast<std::uint32_t>(bank.support.k1));
  for (int j = 0; j < bank.filter_count(); ++j)
    for (int l = 0; l < bank.filter_count(); ++l) {
      put_f64(out, bank.matrix(l, j).real());
      put_f64(out, bank.matrix(l, j).imag());
    }
  if (!out) throw FormatError("write failed: " + path);
}

FilterBank read_filters(const std::string& path) {
  std::ifstream in = open_in(path);
  expect_magic(in, "FLT1", path);
  const std::uint32_t m2 = get_u32(in);
  const std::uint32_t k = get_u32(in);
  if (k < 1 || k > 1024 || m2 != k * k) throw FormatError(path + ": inconsistent M2/K header");
  Eigen::MatrixXcd a(m2, m2);
  for (std::uint32_t j = 0; j < m2; ++j)
    for (std::uint32_t l = 0; l < m2; ++l) {
      const double re = get_f64(in);
      const double im = get_f64(in);
      a(l, j) = Complex(re, im);
    }
  expect_eof(in, path);
  return FilterBank::from_matrix(make_support(static_cast<int>(k), static_cast<int>(k)),
                                 std::move(a));
}

void write_image_pgm(const std::string& path, const RealImage& img, double lo, double hi) {
  if (!(hi > lo)) throw std::invalid_argument("write_image_pgm: window needs hi > lo");
  std::ofstream out = open_out(path);
  const int n = img.n();
  out << "P5\n" << n << " " << n << "\n65535\n";
  const double scale = 65535.0 / (hi - lo);
  auto src = img.values();
  std::vector<unsigned char> row(static_cast<std::size_t>(n) * 2);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      double v = src[static_cast<std::size_t>(x) + static_cast<std::size_t>(n) * y];
      v = std::clamp(v, lo, hi);
      const auto q = static_cast<std::uint16_t>(
          std::min(65535.0, std::floor((v - lo) * scale)));
      row[2 * x] = static_cast<unsigned char>(q >> 8);  // PGM samples are MSB first
      row[2 * x + 1] = static_cast<unsigned char>(q & 0xff);
    }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
  if (!out) throw FormatError("write failed: " + path);
}

namespace {

struct KeySpec {
  const char* name;
  const char* kind;  // "int", "real", "bound"
};

constexpr KeySpec kKeys[] = {
    {"K", "int"},         {"r", "int"},       {"mu", "real"},    {"gamma", "real"},
    {"beta", "real"},     {"beta1", "real"},  {"beta2", "real"}, {"beta3", "real"},
    {"R", "bound"},       {"eps", "real"},    {"max_iter", "int"},
    {"L", "real"},        {"init_subgrid", "real"},
};

bool known_key(const std::string& k) {
  for (const KeySpec& s : kKeys)
    if (k == s.name) return true;
  return false;
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

void apply_key(SolverParams& p, const std::string& key, const std::string& value, int lineno) {
  const auto bad = [&](const char* why) {
    throw std::invalid_argument("config line " + std::to_string(lineno) + ": " + key + " " + why);
  };
  const auto as_real = [&]() {
    try {
      std::size_t used = 0;
      const double v = std::stod(value, &used);
      if (used != value.size()) bad("is not a number");
      return v;
    } catch (const std::invalid_argument&) {
      bad("is not a number");
    } catch (const std::out_of_range&) {
      bad("is out of range");
    }
    return 0.0;
  };

  if (key == "K") {
    const double v = as_real();
    if (v < 1 || v != std::floor(v)) bad("must be a positive integer");
    p.patch_size = static_cast<int>(v);
  } else if (key == "r") {
    const double v = as_real();
    if (v < 1 || v != std::floor(v)) bad("must be a positive integer");
    p.init_rank = static_cast<int>(v);
  } else if (key == "mu") {
    const double v = as_real();
    if (!(v > 0)) bad("must be positive");
    p.mu = v;
  } else if (key == "gamma") {
    const double v = as_real();
    if (v < 0) bad("must be >= 0");
    p.gamma = v;
  } else if (key == "beta") {
    const double v = as_real();
    if (!(v > 0)) bad("must be positive");
    p.beta1 = p.beta2 = p.beta3 = v;
  } else if (key == "beta1" || key == "beta2" || key == "beta3") {
    const double v = as_real();
    if (!(v > 0)) bad("must be positive");
    (key == "beta1" ? p.beta1 : key == "beta2" ? p.beta2 : p.beta3) = v;
  } else if (key == "R") {
    if (value == "auto") {
      p.bound = 0.0;
    } else {
      const double v = as_real();
      if (!(v > 0)) bad("must be positive or 'auto'");
      p.bound = v;
    }
  } else if (key == "eps") {
    const double v = as_real();
    if (!(v > 0)) bad("must be positive");
    p.eps = v;
  } else if (key == "max_iter") {
    const double v = as_real();
    if (v < 1 || v != std::floor(v)) bad("must be a positive integer");
    p.max_iter = static_cast<int>(v);
  } else if (key == "L") {
    const double v = as_real();
    if (!(v > 0)) bad("must be positive");
    p.fov = v;
  } else if (key == "init_subgrid") {
    const double v = as_real();
    if (!(v > 0) || v > 1) bad("must be in (0, 1]");
    p.init_subgrid = v;
  }
}

}  // namespace

SolverConfig config_from_params(const SolverParams& p) {
  SolverConfig cfg;
  cfg.params = p;
  cfg.resolved = {
      {"K", std::to_string(p.patch_size)},
      {"r", std::to_string(p.init_rank)},
      {"mu", fmt(p.mu)},
      {"gamma", fmt(p.gamma)},
      {"beta1", fmt(p.beta1)},
      {"beta2", fmt(p.beta2)},
      {"beta3", fmt(p.beta3)},
      {"R", p.bound > 0.0 ? fmt(p.bound) : std::string("auto")},
      {"eps", fmt(p.eps)},
      {"max_iter", std::to_string(p.max_iter)},
      {"L", fmt(p.fov)},
      {"init_subgrid", fmt(p.init_subgrid)},
  };
  return cfg;
}

SolverConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open config: " + path);
  SolverParams p;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw FormatError("config line " + std::to_string(lineno) + ": expected key = value");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw FormatError("config line " + std::to_string(lineno) + ": expected key = value");
    if (!known_key(key))
      throw FormatError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    apply_key(p, key, value, lineno);
  }
  return config_from_params(p);
}

}  // namespace hfmri
