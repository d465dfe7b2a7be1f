#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>

#include "bbr/bumps.hpp"
#include "bbr/grid.hpp"
#include "bbr/rng.hpp"
#include "doctest.h"

using namespace bbr;

namespace {
constexpr double kPi = 3.14159265358979323846;

Field gaussian_field(const TorusGrid& g, double sigma) {
  Field f(g, Repr::Spatial);
  double x[2];
  for (std::size_t i = 0; i < f.size(); ++i) {
    g.x_at(i, x);
    const double r2 = g.d == 1 ? x[0] * x[0] : x[0] * x[0] + x[1] * x[1];
    f[i] = std::exp(-kPi * r2 / (sigma * sigma));
  }
  return f;
}
}  // namespace

TEST_CASE("transform of a constant is a point mass of weight L^d") {
  for (int d : {1, 2}) {
    TorusGrid g{d, 16.0, d == 1 ? 256 : 128};
    Field one(g, Repr::Spatial);
    for (auto& z : one.values()) z = 1.0;
    Field sp = transform_forward(one);
    CHECK(std::abs(sp[0] - std::pow(g.L, d)) < 1e-9 * std::pow(g.L, d));
    double off = 0.0;
    for (std::size_t i = 1; i < sp.size(); ++i) off = std::max(off, std::abs(sp[i]));
    CHECK(off < 1e-9);
  }
}

TEST_CASE("gaussian transform pair") {
  for (int d : {1, 2}) {
    TorusGrid g{d, 16.0, d == 1 ? 512 : 256};
    const double sigma = 1.0;
    Field f = gaussian_field(g, sigma);
    Field sp = transform_forward(f);
    auto xi2 = g.xi_norm2();
    double worst = 0.0;
    for (std::size_t i = 0; i < sp.size(); ++i) {
      if (xi2[i] > 4.0) continue;
      const double expect = std::pow(sigma, d) * std::exp(-kPi * sigma * sigma * xi2[i]);
      worst = std::max(worst, std::abs(sp[i].real() - expect) / expect);
      worst = std::max(worst, std::abs(sp[i].imag()) / expect);
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("round trip and Plancherel") {
  TorusGrid g{2, 25.0, 128};
  Field f = random_bandlimited(g, 2.0, 42);
  Field back = transform_forward(transform_inverse(f));
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    worst = std::max(worst, std::abs(f[i] - back[i]));
    scale = std::max(scale, std::abs(f[i]));
  }
  CHECK(worst < 1e-12 * scale);
  const double a = lp_norm(f, 2.0);
  const double b = l2_norm_spectral(f);
  CHECK(std::abs(a - b) < 1e-10 * b);
}

TEST_CASE("lp norms") {
  TorusGrid g{1, 32.0, 512};
  // sampled box of width 2 => volume 2
  Field box(g, Repr::Spatial);
  for (std::size_t i = 0; i < box.size(); ++i) {
    double x[2];
    g.x_at(i, x);
    if (std::abs(x[0]) < 1.0) box[i] = 1.0;
  }
  for (double p : {1.0, 2.0, 3.5}) {
    CHECK(lp_norm(box, p) == doctest::Approx(std::pow(2.0, 1.0 / p)).epsilon(0.05));
  }
  CHECK(lp_norm(box, std::numeric_limits<double>::infinity()) == 1.0);
  // quasi-norm p < 1 accepted
  CHECK(lp_norm(box, 0.5) == doctest::Approx(std::pow(2.0, 2.0)).epsilon(0.1));
  CHECK_THROWS(lp_norm(box, 0.0));
  CHECK_THROWS(lp_norm(box, -1.0));

  Field gf = gaussian_field(g, 1.0);
  CHECK(lp_norm(gf, 2.0) == doctest::Approx(std::pow(2.0, -0.25)).epsilon(1e-8));
}

TEST_CASE("apply_symbol basics") {
  TorusGrid g{1, 16.0, 256};
  Field f = random_bandlimited(g, 3.0, 5);
  FrequencySymbol one{[](const double*, int) -> cplx { return 1.0; }, -1.0};
  Field id = apply_symbol(f, one);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(id[i] == f[i]);

  FrequencySymbol empty{[](const double*, int) -> cplx { return 1.0; }, 0.0};
  Field z = apply_symbol(f, empty);
  double m = 0.0;
  for (std::size_t i = 1; i < z.size(); ++i) m = std::max(m, std::abs(z[i]));
  CHECK(m == 0.0);

  FrequencySymbol s1{[](const double* xi, int) -> cplx { return xi[0] * xi[0]; }, -1.0};
  FrequencySymbol s2{[](const double* xi, int) -> cplx { return cplx(0.3, 1.0) * xi[0]; }, -1.0};
  Field a = apply_symbol(apply_symbol(f, s1), s2);
  Field b = apply_symbol(apply_symbol(f, s2), s1);
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]));
    scale = std::max(scale, std::abs(a[i]));
  }
  CHECK(worst <= 1e-14 * std::max(scale, 1.0));
}

TEST_CASE("random band-limited fields") {
  TorusGrid g{2, 10.0, 64};
  Field c = random_bandlimited(g, 0.0, 9);
  for (std::size_t i = 1; i < c.size(); ++i) CHECK(c[i] == cplx{0.0, 0.0});
  CHECK(c[0] != cplx{0.0, 0.0});

  Field a = random_bandlimited(g, 2.0, 1234);
  Field b = random_bandlimited(g, 2.0, 1234);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);

  auto xi2 = g.xi_norm2();
  for (std::size_t i = 0; i < a.size(); ++i)
    if (xi2[i] > 4.0) CHECK(a[i] == cplx{0.0, 0.0});

  CHECK_THROWS(random_bandlimited(g, g.nyquist() + 1.0, 1));
}

TEST_CASE("symbol-level parabolic rescaling identity") {
  // phi((|xi|^2-rho)/delta) at xi equals phi((|l xi|^2 - l^2 rho)/(l^2 delta));
  // exact in floating point for power-of-two l^2.
  SmoothBump phi = standard_bump(-1.0, 1.0);
  TorusGrid g{2, 20.0, 128};
  auto xi2 = g.xi_norm2();
  const double rho = 0.8, delta = 1.0 / 16.0;
  for (double lam2 : {2.0, 4.0, 0.25}) {
    double worst = 0.0;
    for (std::size_t i = 0; i < xi2.size(); ++i) {
      const double a = phi((xi2[i] - rho) / delta);
      const double b = phi((lam2 * xi2[i] - lam2 * rho) / (lam2 * delta));
      worst = std::max(worst, std::abs(a - b));
    }
    CHECK(worst <= 1e-14);
  }
}

TEST_CASE("translation covariance") {
  TorusGrid g{1, 16.0, 256};
  Field f = to_spatial(random_bandlimited(g, 2.0, 77));
  const int shift = 13;  // lattice steps
  Field fs = to_spectral(f);
  for (std::size_t k = 0; k < fs.size(); ++k) {
    const double ph = -2.0 * kPi * g.freq(static_cast<int>(k)) * shift * g.dx();
    fs[k] *= cplx{std::cos(ph), std::sin(ph)};
  }
  Field shifted = transform_inverse(fs);
  double worst = 0.0, scale = 0.0;
  for (int j = 0; j < g.n; ++j) {
    const int src = (j - shift + g.n) % g.n;
    worst = std::max(worst, std::abs(shifted[j] - f[src]));
    scale = std::max(scale, std::abs(f[j]));
  }
  CHECK(worst <= 1e-10 * scale);
}

TEST_CASE("field snapshot round trip") {
  TorusGrid g{1, 8.0, 64};
  Field f = random_bandlimited(g, 2.0, 3);
  const std::string path = "snapshot_test.bin";
  write_field_snapshot(f, path, "unit", 3);
  Field back = read_field_snapshot(path);
  CHECK(back.grid() == f.grid());
  CHECK(back.repr() == f.repr());
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(back[i] == f[i]);
  std::remove(path.c_str());
  std::remove((path + ".json").c_str());
}

TEST_CASE("make_grid validates the desk-scale cap") {
  TorusGrid g = make_grid(1, 1.0 / 64.0, 4.0);
  CHECK(g.L == doctest::Approx(64.0));
  CHECK(g.nyquist() >= 4.0);
  CHECK_THROWS(make_grid(2, 1.0 / 1024.0, 4.0, 512));
}
