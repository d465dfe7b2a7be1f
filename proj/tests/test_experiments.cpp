#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <array>
#include <cmath>

#include "bbr/bessel.hpp"
#include "bbr/bumps.hpp"
#include "bbr/exponents.hpp"
#include "bbr/experiments.hpp"
#include "bbr/io.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace bbr;

TEST_CASE("bessel_j spot values") {
  CHECK(bessel_j(0.0, 0.0) == 1.0);
  CHECK(bessel_j(2.5, 0.0) == 0.0);
  // half-integer closed form J_{1/2}(x) = sqrt(2/(pi x)) sin x
  for (double x : {1.0, 10.0, 100.0}) {
    const double expect = std::sqrt(2.0 / (3.14159265358979323846 * x)) * std::sin(x);
    CHECK(std::abs(bessel_j(0.5, x) - expect) < 1e-8);
  }
  CHECK(std::abs(bessel_j(2.7, 50.0) - oracle::bessel_j(2.7, 50.0)) < 1e-8);
  CHECK_THROWS(bessel_j(-1.0, 1.0));
  CHECK_THROWS(bessel_j(1.0, -1.0));
}

TEST_CASE("bessel_j against the integral representation across regimes") {
  // covers the series region, the Hankel region, and the Miller bridge that
  // opens for nu > ~5.7
  for (double nu : {0.0, 0.5, 1.0, 2.7, 5.0, 6.5, 8.0}) {
    for (double x : {0.1, 1.0, 5.0, 12.0, 16.5, 20.0, 30.0, 45.0, 80.0, 150.0}) {
      CAPTURE(nu);
      CAPTURE(x);
      CHECK(std::abs(bessel_j(nu, x) - oracle::bessel_j(nu, x)) < 1e-8);
    }
  }
}

TEST_CASE("closed-form kernel") {
  // w = 0 limit equals the volume integral of the symbol
  for (int d : {1, 2}) {
    for (double alpha : {0.2, 0.5, 1.0}) {
      const double expect = std::tgamma(alpha + 1.0) *
                            std::pow(3.14159265358979323846, d) /
                            std::tgamma(d + alpha + 1.0);
      CHECK(kernel_closed_form(0.0, alpha, d) == doctest::Approx(expect).epsilon(1e-12));
      // continuity at the w -> 0 crossover
      CHECK(kernel_closed_form(2e-12, alpha, d) ==
            doctest::Approx(kernel_closed_form(1e-11, alpha, d)).epsilon(1e-4));
    }
  }
  // decay envelope |K| |w|^{(2d+1)/2+alpha} bounded on [10, 1e4]
  for (int d : {1, 2}) {
    const double alpha = 0.5;
    double worst = 0.0;
    for (int i = 0; i <= 300; ++i) {
      const double w = 10.0 * std::pow(1000.0, i / 300.0);
      worst = std::max(worst, std::abs(kernel_closed_form(w, alpha, d)) *
                                  std::pow(w, 0.5 * (2 * d + 1) + alpha));
    }
    CHECK(std::isfinite(worst));
    CHECK(worst < 10.0);
    CHECK(worst > 1e-4);  // the envelope is saturated, not vacuous
  }
}

TEST_CASE("loglog fit") {
  std::vector<std::array<double, 2>> pts;
  for (int k = 3; k <= 10; ++k) {
    const double x = std::pow(2.0, -k);
    pts.push_back({x, 3.0 * std::pow(x, -0.7)});
  }
  auto fit = fit_loglog(pts);
  CHECK(fit.reliable);
  CHECK(fit.slope == doctest::Approx(-0.7).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(std::log2(3.0)).epsilon(1e-12));
  CHECK(fit.max_residual < 1e-12);

  std::vector<std::array<double, 2>> few = {{1.0, 1.0}, {2.0, 2.0}};
  CHECK_FALSE(fit_loglog(few).reliable);
}

TEST_CASE("counterexample configuration validation") {
  CounterexampleConfig cfg;
  cfg.R_list = {1024.0};
  validate(cfg);
  cfg.R_list = {100.0};  // below 64/eps0^2 = 1024
  CHECK_THROWS(validate(cfg));
  cfg.R_list = {2048.0};
  cfg.eps0 = 0.6;
  CHECK_THROWS(validate(cfg));
}

TEST_CASE("pairing decays for large alpha and is reliable") {
  CounterexampleConfig cfg;
  cfg.d = 2;
  cfg.alpha = 6.0;
  cfg.samples = 1 << 16;
  cfg.R_list = {1 << 10, 1 << 11, 1 << 12, 1 << 13};
  auto fit = necessary_exponent_fit(cfg, 2.0, 2.0, 99);
  CHECK(fit.reliable);
  CHECK(fit.fit.slope < 0.0);  // (d-1)/2 - alpha = -5.5
}

TEST_CASE("pairing slope matches the stationary-phase prediction") {
  CounterexampleConfig cfg;
  cfg.d = 2;
  cfg.alpha = 0.5;
  cfg.samples = 1 << 17;
  cfg.R_list = {1 << 10, 1 << 11, 1 << 12, 1 << 13, 1 << 14};
  auto fit = necessary_exponent_fit(cfg, std::numeric_limits<double>::infinity(),
                                    std::numeric_limits<double>::infinity(), 7);
  CHECK(fit.reliable);
  CHECK(std::abs(fit.fit.slope - fit.predicted_slope) <= 0.15);
  // p = q = inf: implied constraint approximates (d-1)/2
  CHECK(std::abs(fit.implied_alpha_min - 0.5) <= 0.15);
  CHECK(fit.necessary_alpha_ref == doctest::Approx(0.5));

  // p = q = 2 gives no obstruction
  auto fit2 = necessary_exponent_fit(cfg, 2.0, 2.0, 7);
  CHECK(fit2.implied_alpha_min < 0.0);
  // swapped roles give the symmetric constraint
  auto fita = necessary_exponent_fit(cfg, 4.0, 2.0, 7);
  auto fitb = necessary_exponent_fit(cfg, 2.0, 4.0, 7);
  const double ca = fita.fit.slope + cfg.alpha - (cfg.d / (2.0 * 2.0) + cfg.d / 4.0);
  CHECK(fitb.implied_alpha_min == doctest::Approx(ca).epsilon(1e-9));
}

TEST_CASE("holder side of the pairing: set measures scale exactly") {
  // |A_R| ~ R^{d/2} and |B_R| ~ R^d: per-R measures follow from the set
  // geometry, so the Holder bound R^{d/(2p)} R^{d/q} is exact arithmetic.
  const double eps0 = 0.25;
  const int d = 2;
  auto measure_a = [&](double R) {
    const double r1 = eps0 / 10.0 * std::sqrt(R), r2 = eps0 / 5.0 * std::sqrt(R);
    return 3.14159265358979323846 * (r2 * r2 - r1 * r1);
  };
  auto measure_b = [&](double R) {
    const double r1 = eps0 / 10.0 * R, r2 = eps0 / 5.0 * R;
    return (r2 * r2 - r1 * r1) * std::atan(eps0 / 10.0);
  };
  for (double R : {2048.0, 4096.0}) {
    CHECK(measure_a(2.0 * R) / measure_a(R) == doctest::Approx(std::pow(2.0, d / 2.0)));
    CHECK(measure_b(2.0 * R) / measure_b(R) == doctest::Approx(std::pow(2.0, d)));
    // Holder factor for (p, q): ||chi_A||_p ||chi_B||_q = |A|^{1/p} |B|^{1/q}
    const double p = 4.0, q = 2.0;
    const double lhs = std::pow(measure_a(2.0 * R), 1.0 / p) *
                       std::pow(measure_b(2.0 * R), 1.0 / q);
    const double rhs = std::pow(measure_a(R), 1.0 / p) * std::pow(measure_b(R), 1.0 / q) *
                       std::pow(2.0, d / (2.0 * p) + d / q);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("norm estimate: ceiling, determinism, zero operator") {
  SmoothBump phi = cn_normalize(standard_bump(-1.0, 1.0), 8).first;
  TorusGrid g{1, 128.0, 1024};
  BilinearOpFamily fam;
  fam.kind = BilinearOpFamily::Kind::ShellProduct;
  fam.varrho = 1.0;
  fam.phi1 = &phi;
  fam.phi2 = &phi;

  NormEstimate est = estimate_bilinear_norm(fam, g, 1.0 / 16.0, 2.0, 2.0, 1.0, 8, 17);
  double supphi = 0.0;
  for (int i = 0; i <= 512; ++i)
    supphi = std::max(supphi, std::abs(phi(-1.0 + 2.0 * i / 512.0)));
  CHECK(est.value > 0.0);
  CHECK(est.value <= 2.0 * supphi * supphi * (1.0 + 1e-9));

  NormEstimate est2 = estimate_bilinear_norm(fam, g, 1.0 / 16.0, 2.0, 2.0, 1.0, 8, 17);
  CHECK(est.value == est2.value);  // bitwise determinism at fixed seed
  CHECK(est.family == est2.family);

  SmoothBump zero = phi.scaled(0.0);
  BilinearOpFamily zf = fam;
  zf.phi1 = &zero;
  NormEstimate ez = estimate_bilinear_norm(zf, g, 1.0 / 16.0, 2.0, 2.0, 1.0, 2, 17);
  CHECK(ez.value == 0.0);
}

TEST_CASE("scan internal consistency: points sit near the fitted power law") {
  SmoothBump phi = cn_normalize(standard_bump(-1.0, 1.0), 8).first;
  TorusGrid g{1, 512.0, 4096};
  BilinearOpFamily fam;
  fam.kind = BilinearOpFamily::Kind::ShellProduct;
  fam.varrho = 1.0;
  fam.phi1 = &phi;
  fam.phi2 = &phi;
  ExponentTriple e{2.0, 2.0, 1.0};
  const double deltas[4] = {1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0};
  auto res = delta_scaling_scan(fam, g, {&e, 1}, deltas, 4, 5);
  REQUIRE(res.size() == 1);
  CHECK(res[0].fit.points.size() == 4);
  // every sample within a factor 4 of the fitted line
  CHECK(res[0].fit.max_residual <= 2.0);
  // kappa floor: slope of norm vs delta can never exceed ~1 (norm >= c delta)
  CHECK(res[0].fit.slope <= 1.1);

  const double bad[3] = {0.5, 0.25, 0.125};
  CHECK_THROWS(delta_scaling_scan(fam, g, {&e, 1}, bad, 4, 5));
  const double odd[4] = {0.3, 0.25, 0.125, 0.0625};
  CHECK_THROWS(delta_scaling_scan(fam, g, {&e, 1}, odd, 4, 5));
}

TEST_CASE("config hash and csv stamp") {
  nlohmann::json a = {{"d", 2}, {"nu", 0.25}};
  nlohmann::json b = {{"nu", 0.25}, {"d", 2}};
  CHECK(config_hash(a) == config_hash(b));  // key order canonicalized
  nlohmann::json c = {{"d", 3}, {"nu", 0.25}};
  CHECK(config_hash(a) != config_hash(c));
  CHECK(format_float(0.1) == "0.1");
  CHECK(format_float(std::numeric_limits<double>::infinity()) == "inf");
}
