#pragma once

// Periodic sampled fields on [0,L)^d, d in {1,2}, with Fourier transforms in
// the f^(xi) = int e^{-2pi i x.xi} f(x) dx convention: the forward DFT is
// scaled by the spatial cell volume (L/N)^d and the inverse by the frequency
// cell 1/L^d, so spectral coefficients approximate continuum integrals and
// the pair is exactly inverse on the grid.

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace bbr {

using cplx = std::complex<double>;

struct TorusGrid {
  int d = 1;      // dimension, 1 or 2
  double L = 1.0; // period
  int n = 0;      // samples per axis, power of two

  double freq_spacing() const { return 1.0 / L; }
  double dx() const { return L / n; }
  double nyquist() const { return n / (2.0 * L); }
  std::size_t size() const {
    return d == 1 ? static_cast<std::size_t>(n)
                  : static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  }

  // Frequency of axis index k (DFT storage order).
  double freq(int k) const { return (2 * k < n ? k : k - n) / L; }
  // Signed torus coordinate of axis index j, in [-L/2, L/2).
  double coord(int j) const { return (2 * j < n ? j : j - n) * dx(); }

  // |xi|^2 at flat spectral index (cached per grid geometry).
  std::span<const double> xi_norm2() const;
  // xi components at flat index.
  void xi_at(std::size_t idx, double out[2]) const;
  void x_at(std::size_t idx, double out[2]) const;

  bool operator==(const TorusGrid& o) const { return d == o.d && L == o.L && n == o.n; }
};

// Grid with Nyquist band >= band and frequency spacing <= max_h, n a power
// of two. Throws if that needs more than max_n samples per axis.
TorusGrid make_grid(int d, double max_h, double band, int max_n = 1 << 14);

enum class Repr { Spatial, Spectral };

class Field {
 public:
  Field() = default;
  Field(TorusGrid grid, Repr repr)
      : grid_(grid), repr_(repr), v_(grid.size(), cplx{0.0, 0.0}) {}
  Field(TorusGrid grid, Repr repr, std::vector<cplx> values);

  const TorusGrid& grid() const { return grid_; }
  Repr repr() const { return repr_; }
  std::span<const cplx> values() const { return v_; }
  std::span<cplx> values() { return v_; }
  cplx operator[](std::size_t i) const { return v_[i]; }
  cplx& operator[](std::size_t i) { return v_[i]; }
  std::size_t size() const { return v_.size(); }

 private:
  TorusGrid grid_;
  Repr repr_ = Repr::Spatial;
  std::vector<cplx> v_;
};

// Transforms (throw on representation mismatch).
Field transform_forward(const Field& spatial);
Field transform_inverse(const Field& spectral);
// Whatever representation f is in, return the requested one.
Field to_spatial(const Field& f);
Field to_spectral(const Field& f);

// ((L/N)^d sum |f|^p)^{1/p} over spatial samples; max norm for p = inf.
// Quasi-norms p in (0,1) are allowed; p <= 0 rejected.
double lp_norm(const Field& f, double p);
double l2_norm_spectral(const Field& f);  // Plancherel-side L2

struct FrequencySymbol {
  std::function<cplx(const double xi[2], int d)> eval;
  // Optional support bound: symbol vanishes for |xi| > support_radius.
  double support_radius = -1.0;
};

// Pointwise spectral multiply; returns spectral or spatial per `spatial_out`.
Field apply_symbol(const Field& f, const FrequencySymbol& symbol, bool spatial_out = false);

// i.i.d. standard complex Gaussian spectral coefficients on |xi| <= radius,
// zero outside; deterministic in (seed, grid, radius).
Field random_bandlimited(const TorusGrid& grid, double radius, std::uint64_t seed);

// Flat binary snapshot (little-endian re/im doubles) plus a JSON sidecar
// {d, L, N, tag, seed} at path + ".json".
void write_field_snapshot(const Field& f, const std::string& path,
                          const std::string& tag, std::uint64_t seed);
Field read_field_snapshot(const std::string& path);

}  // namespace bbr
