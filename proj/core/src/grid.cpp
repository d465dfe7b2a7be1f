#include "bbr/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <stdexcept>

#include "bbr/rng.hpp"
#include "json.hpp"

namespace bbr {
namespace {

// FFTW plan cache. Plans are created once per (d, n, sign) with
// FFTW_ESTIMATE | FFTW_UNALIGNED: deterministic planning, executable on any
// caller buffer via the new-array interface.
class FftEngine {
 public:
  static FftEngine& instance() {
    static FftEngine e;
    return e;
  }

  void execute(int d, int n, int sign, const cplx* in, cplx* out) {
    fftw_plan plan = get_plan(d, n, sign);
    fftw_execute_dft(plan,
                     reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
  }

 private:
  fftw_plan get_plan(int d, int n, int sign) {
    std::scoped_lock lock(mu_);
    const auto key = std::make_tuple(d, n, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<cplx> a(d == 1 ? n : static_cast<std::size_t>(n) * n);
    std::vector<cplx> b(a.size());
    fftw_plan p;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    if (d == 1) {
      p = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(a.data()),
                           reinterpret_cast<fftw_complex*>(b.data()), sign, flags);
    } else {
      p = fftw_plan_dft_2d(n, n, reinterpret_cast<fftw_complex*>(a.data()),
                           reinterpret_cast<fftw_complex*>(b.data()), sign, flags);
    }
    plans_.emplace(key, p);
    return p;
  }

  std::mutex mu_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

std::mutex g_cache_mu;
std::map<std::pair<int, std::pair<double, int>>, std::vector<double>> g_xi2_cache;

void check_grid(const TorusGrid& g) {
  if (g.d != 1 && g.d != 2) throw std::domain_error("TorusGrid: d must be 1 or 2");
  if (g.n <= 0 || (g.n & (g.n - 1)) != 0)
    throw std::domain_error("TorusGrid: n must be a power of two");
  if (!(g.L > 0.0)) throw std::domain_error("TorusGrid: L must be positive");
}

}  // namespace

std::span<const double> TorusGrid::xi_norm2() const {
  std::scoped_lock lock(g_cache_mu);
  auto key = std::make_pair(d, std::make_pair(L, n));
  auto it = g_xi2_cache.find(key);
  if (it == g_xi2_cache.end()) {
    std::vector<double> v(size());
    if (d == 1) {
      for (int k = 0; k < n; ++k) {
        const double f = freq(k);
        v[static_cast<std::size_t>(k)] = f * f;
      }
    } else {
      std::size_t idx = 0;
      for (int ky = 0; ky < n; ++ky) {
        const double fy = freq(ky);
        for (int kx = 0; kx < n; ++kx, ++idx) {
          const double fx = freq(kx);
          v[idx] = fx * fx + fy * fy;
        }
      }
    }
    it = g_xi2_cache.emplace(key, std::move(v)).first;
  }
  return it->second;
}

void TorusGrid::xi_at(std::size_t idx, double out[2]) const {
  if (d == 1) {
    out[0] = freq(static_cast<int>(idx));
    out[1] = 0.0;
  } else {
    out[0] = freq(static_cast<int>(idx % static_cast<std::size_t>(n)));
    out[1] = freq(static_cast<int>(idx / static_cast<std::size_t>(n)));
  }
}

void TorusGrid::x_at(std::size_t idx, double out[2]) const {
  if (d == 1) {
    out[0] = coord(static_cast<int>(idx));
    out[1] = 0.0;
  } else {
    out[0] = coord(static_cast<int>(idx % static_cast<std::size_t>(n)));
    out[1] = coord(static_cast<int>(idx / static_cast<std::size_t>(n)));
  }
}

TorusGrid make_grid(int d, double max_h, double band, int max_n) {
  if (!(max_h > 0.0) || !(band > 0.0)) throw std::domain_error("make_grid: bad parameters");
  const double L = 1.0 / max_h;
  int n = 2;
  while (n / (2.0 * L) < band) {
    n *= 2;
    if (n > max_n) throw std::domain_error("make_grid: grid exceeds the desk-scale cap");
  }
  TorusGrid g{d, L, n};
  check_grid(g);
  return g;
}

Field::Field(TorusGrid grid, Repr repr, std::vector<cplx> values)
    : grid_(grid), repr_(repr), v_(std::move(values)) {
  if (v_.size() != grid_.size()) throw std::invalid_argument("Field: size mismatch");
}

Field transform_forward(const Field& f) {
  if (f.repr() != Repr::Spatial)
    throw std::invalid_argument("transform_forward: field is not spatial");
  const TorusGrid& g = f.grid();
  check_grid(g);
  Field out(g, Repr::Spectral);
  FftEngine::instance().execute(g.d, g.n, FFTW_FORWARD, f.values().data(),
                                out.values().data());
  const double w = std::pow(g.dx(), g.d);
  for (auto& z : out.values()) z *= w;
  return out;
}

Field transform_inverse(const Field& f) {
  if (f.repr() != Repr::Spectral)
    throw std::invalid_argument("transform_inverse: field is not spectral");
  const TorusGrid& g = f.grid();
  check_grid(g);
  Field out(g, Repr::Spatial);
  FftEngine::instance().execute(g.d, g.n, FFTW_BACKWARD, f.values().data(),
                                out.values().data());
  const double w = std::pow(1.0 / g.L, g.d);
  for (auto& z : out.values()) z *= w;
  return out;
}

Field to_spatial(const Field& f) { return f.repr() == Repr::Spatial ? f : transform_inverse(f); }
Field to_spectral(const Field& f) { return f.repr() == Repr::Spectral ? f : transform_forward(f); }

double lp_norm(const Field& f, double p) {
  if (!(p > 0.0)) throw std::domain_error("lp_norm: p must be positive");
  const Field s = to_spatial(f);
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& z : s.values()) m = std::max(m, std::abs(z));
    return m;
  }
  const double w = std::pow(s.grid().dx(), s.grid().d);
  double acc = 0.0;
  if (p == 2.0) {
    for (const auto& z : s.values()) acc += std::norm(z);
  } else if (p == 1.0) {
    for (const auto& z : s.values()) acc += std::abs(z);
  } else {
    for (const auto& z : s.values()) acc += std::pow(std::abs(z), p);
  }
  return std::pow(w * acc, 1.0 / p);
}

double l2_norm_spectral(const Field& f) {
  const Field s = to_spectral(f);
  const double w = std::pow(s.grid().freq_spacing(), s.grid().d);
  double acc = 0.0;
  for (const auto& z : s.values()) acc += std::norm(z);
  return std::sqrt(w * acc);
}

Field apply_symbol(const Field& f, const FrequencySymbol& symbol, bool spatial_out) {
  Field spec = to_spectral(f);
  const TorusGrid& g = spec.grid();
  auto xi2 = g.xi_norm2();
  const double r2 = symbol.support_radius >= 0.0
                        ? symbol.support_radius * symbol.support_radius
                        : -1.0;
  double xi[2];
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (r2 >= 0.0 && xi2[i] > r2) {
      spec[i] = 0.0;
      continue;
    }
    if (spec[i] == cplx{0.0, 0.0}) continue;
    g.xi_at(i, xi);
    spec[i] *= symbol.eval(xi, g.d);
  }
  return spatial_out ? transform_inverse(spec) : spec;
}

Field random_bandlimited(const TorusGrid& grid, double radius, std::uint64_t seed) {
  check_grid(grid);
  if (radius > grid.nyquist())
    throw std::domain_error("random_bandlimited: radius exceeds the Nyquist band");
  Rng rng(seed);
  Field out(grid, Repr::Spectral);
  auto xi2 = grid.xi_norm2();
  const double r2 = radius * radius;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (xi2[i] <= r2) {
      const double re = rng.normal();
      const double im = rng.normal();
      out[i] = cplx{re, im};
    }
  }
  return out;
}

void write_field_snapshot(const Field& f, const std::string& path,
                          const std::string& tag, std::uint64_t seed) {
  std::ofstream bin(path, std::ios::binary);
  if (!bin) throw std::runtime_error("write_field_snapshot: cannot open " + path);
  for (const auto& z : f.values()) {
    const double re = z.real(), im = z.imag();
    bin.write(reinterpret_cast<const char*>(&re), sizeof re);
    bin.write(reinterpret_cast<const char*>(&im), sizeof im);
  }
  nlohmann::json side = {{"d", f.grid().d},
                         {"L", f.grid().L},
                         {"N", f.grid().n},
                         {"tag", f.repr() == Repr::Spatial ? "spatial" : "spectral"},
                         {"user_tag", tag},
                         {"seed", seed}};
  std::ofstream js(path + ".json");
  js << side.dump(2) << "\n";
}

Field read_field_snapshot(const std::string& path) {
  std::ifstream js(path + ".json");
  if (!js) throw std::runtime_error("read_field_snapshot: missing sidecar for " + path);
  nlohmann::json side = nlohmann::json::parse(js);
  TorusGrid g{side.at("d").get<int>(), side.at("L").get<double>(), side.at("N").get<int>()};
  Field f(g, side.at("tag").get<std::string>() == "spatial" ? Repr::Spatial : Repr::Spectral);
  std::ifstream bin(path, std::ios::binary);
  if (!bin) throw std::runtime_error("read_field_snapshot: cannot open " + path);
  for (auto& z : f.values()) {
    double re, im;
    bin.read(reinterpret_cast<char*>(&re), sizeof re);
    bin.read(reinterpret_cast<char*>(&im), sizeof im);
    z = cplx{re, im};
  }
  return f;
}

}  // namespace bbr
