#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <vector>

#include "bbr/bumps.hpp"
#include "bbr/rng.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace bbr;

namespace {

double dyadic_sum(const SmoothBump& psi, double alpha, double t, int j_lo, int j_hi) {
  // sum over delta = 2^j, j in [j_lo, j_hi]
  double s = 0.0;
  for (int j = j_lo; j <= j_hi; ++j) {
    const double delta = std::ldexp(1.0, j);
    s += std::pow(delta, alpha) * psi(t / delta);
  }
  return s;
}

}  // namespace

TEST_CASE("standard bump closed form") {
  SmoothBump b = standard_bump(-1.0, 1.0);
  CHECK(b(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(b(-1.0) == 0.0);
  CHECK(b(1.0) == 0.0);
  for (int k = 0; k <= b.max_order(); ++k) {
    CHECK(b.derivative(1.0001, k) == 0.0);
    CHECK(b.derivative(-1.0001, k) == 0.0);
  }
  CHECK(std::abs(b.derivative(0.0, 1)) < 1e-14);  // even symmetry
  CHECK_THROWS(standard_bump(2.0, 2.0));
}

TEST_CASE("cn_normalize certificates") {
  SmoothBump b = standard_bump(-1.0, 1.0);

  auto [b0, cert0] = cn_normalize(b, 0);
  CHECK(cert0.scale == doctest::Approx(1.0));  // sup |b| = 1 already
  CHECK(b0(0.3) == doctest::Approx(b(0.3)));

  auto [b4, cert4] = cn_normalize(b, 4);
  REQUIRE(cert4.sup_norms.size() == 5);
  for (double s : cert4.sup_norms) CHECK(s <= 1.0 + 1e-12);
  CHECK(cert4.sup_norms[0] < 1.0);  // strictly, after scaling by the worst derivative

  CHECK_THROWS_WITH_AS(cn_normalize(b.scaled(0.0), 2), doctest::Contains("degenerate"),
                       std::domain_error);
  CHECK_THROWS(cn_normalize(b, b.max_order() + 1));
}

TEST_CASE("dyadic psi calibration identity") {
  for (double alpha : {0.25, 1.0, 2.5}) {
    SmoothBump psi = dyadic_psi(alpha);
    CHECK(psi(0.4) == 0.0);
    CHECK(psi(2.1) == 0.0);
    // identity at a sample point and at t = 1
    CHECK(dyadic_sum(psi, alpha, 0.7, -20, 1) ==
          doctest::Approx(std::pow(0.7, alpha)).epsilon(1e-12));
    CHECK(dyadic_sum(psi, alpha, 1.0, -20, 1) == doctest::Approx(1.0).epsilon(1e-12));
    // sup over a log-spaced sweep of [2^-18, 1], truncation 2^-24..2
    double worst = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      const double t = std::pow(2.0, -18.0 + 18.0 * i / 2000.0);
      worst = std::max(worst, std::abs(dyadic_sum(psi, alpha, t, -24, 1) - std::pow(t, alpha)));
    }
    CHECK(worst <= 1e-10);
  }
  CHECK_THROWS(dyadic_psi(0.0));
  CHECK_THROWS(dyadic_psi(-1.0));
}

TEST_CASE("psi_zero support and reconstruction") {
  const double alpha = 1.0;
  SmoothBump psi = dyadic_psi(alpha);
  SmoothBump p0 = psi_zero(alpha, psi);
  CHECK(std::abs(p0(0.8)) < 1e-15);
  CHECK(p0(-0.1) == 0.0);
  // reconstruction at t = 0.9: p0(0.9) + sum_{delta <= 1/2} delta psi(0.1/delta) = 0.1
  const double s = p0(0.9) + dyadic_sum(psi, alpha, 0.1, -40, -1);
  CHECK(s == doctest::Approx(0.1).epsilon(1e-10));
  // psi0 equals the delta = 1 term of the telescoped sum
  for (double t : {0.05, 0.2, 0.35, 0.49}) CHECK(p0(t) == doctest::Approx(psi(1.0 - t)).epsilon(1e-12));
}

TEST_CASE("partition of unity") {
  SmoothBump phi = partition_phi();
  CHECK(phi(0.9) == 0.0);
  CHECK(phi(0.0) == doctest::Approx(1.0).epsilon(1e-14));
  double s = 0.0;
  for (int k = -3; k <= 3; ++k) s += phi(0.37 + k);
  CHECK(s == doctest::Approx(1.0).epsilon(1e-12));

  Rng rng(7);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double t = rng.uniform(-10.0, 10.0);
    double acc = 0.0;
    for (int k = -11; k <= 11; ++k) acc += phi(t + k);
    worst = std::max(worst, std::abs(acc - 1.0));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("moment bumps") {
  SmoothBump phi = partition_phi();
  SmoothBump m0 = moment_bump(phi, 0);
  for (double t : {-0.3, 0.0, 0.2, 0.55}) CHECK(m0(t) == phi(t));
  SmoothBump m1 = moment_bump(phi, 1);
  CHECK(m1(0.0) == 0.0);
  SmoothBump m2 = moment_bump(phi, 2);
  double sup_phi = 0.0, sup_m2 = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double t = -1.0 + 2.0 * i / 1000.0;
    sup_phi = std::max(sup_phi, std::abs(phi(t)));
    sup_m2 = std::max(sup_m2, std::abs(m2(t)));
  }
  CHECK(sup_m2 <= sup_phi);
  CHECK_THROWS(moment_bump(phi, -1));
}

TEST_CASE("derivative consistency against Richardson differences") {
  // Windows keep 5% of the support length away from the support edges: the
  // difference oracle itself degrades where the flat-at-the-edge closed forms
  // make f^(k+3)/f^(k) explode faster than f collapses.
  SmoothBump psi1 = dyadic_psi(1.0);
  std::vector<std::pair<SmoothBump, Interval>> cases;
  cases.push_back({standard_bump(-1.0, 1.0), {-0.9, 0.9}});
  cases.push_back({cn_normalize(standard_bump(0.0, 2.0), 6).first, {0.1, 1.9}});
  cases.push_back({psi1, {0.575, 1.925}});
  cases.push_back({partition_phi(), {-0.5625, 0.5625}});
  cases.push_back({moment_bump(partition_phi(), 2), {-0.5625, 0.5625}});
  cases.push_back({psi_zero(1.0, psi1), {0.025, 0.45}});

  for (const auto& [bump, window] : cases) {
    for (int k = 1; k <= 8; ++k) {
      // scale: sup of the k-th derivative over the window
      double scale = 0.0;
      for (int i = 0; i <= 256; ++i) {
        const double t = window.lo + window.length() * i / 256.0;
        scale = std::max(scale, std::abs(bump.derivative(t, k)));
      }
      const auto fprev = [&bump, k](double t) { return bump.derivative(t, k - 1); };
      double worst = 0.0;
      for (int i = 1; i < 256; ++i) {
        const double t = window.lo + window.length() * i / 256.0;
        const double fd = oracle::derivative(fprev, t, 1.0 / 8192.0);
        worst = std::max(worst, std::abs(fd - bump.derivative(t, k)));
      }
      CAPTURE(k);
      CHECK(worst <= 1e-6 * scale);
    }
  }
}

TEST_CASE("taylor remainder") {
  TaylorRemainder e4(4);
  CHECK(std::abs(e4(std::complex<double>(0.0, 0.0))) == 0.0);
  for (int k = 0; k <= 4; ++k) CHECK(std::abs(e4.derivative({0.0, 0.0}, k)) == 0.0);

  const std::complex<double> t(0.0, 0.5);
  const double bound = std::pow(0.5, 5) / 120.0 * std::exp(0.5);
  CHECK(std::abs(e4(t)) <= bound);

  TaylorRemainder e6(6);
  auto c = e6.measured_constants(1.0);
  REQUIRE(c.size() == 7);
  CHECK(c[0] <= std::exp(1.0) / 5040.0 * 7.0);
  for (double v : c) CHECK(std::isfinite(v));

  // growth pattern |E^(k)(t)| / |t|^(N-k) bounded over 0 < |t| <= 2
  auto c2 = e6.measured_constants(2.0);
  for (double v : c2) {
    CHECK(std::isfinite(v));
    CHECK(v > 0.0);
  }
}

TEST_CASE("bump descriptors serialize") {
  SmoothBump psi = dyadic_psi(0.5);
  auto d = psi.descriptor();
  CHECK(d.at("kind").get<std::string>() == "dyadic_psi");
  CHECK(d.at("alpha").get<double>() == 0.5);
}
