#include "bbr/bumps.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bbr {
namespace {

// Arguments this close to a support edge are treated as outside: the closed
// forms below involve exp(-1/u) whose value and every derivative are far
// below double underflow there.
constexpr double kEdgeTol = 1e-12;

Jet zero_jet(int order) { return Jet(order); }

// B(u) = exp(-1/u) for u > 0, 0 for u <= 0.
Jet bexp(const Jet& u) {
  if (u.value() <= kEdgeTol) return zero_jet(u.order());
  return exp(-recip(u));
}

double bexp_val(double u) { return u <= kEdgeTol ? 0.0 : std::exp(-1.0 / u); }

// Increasing step: 0 for s <= lo, 1 for s >= hi, smooth and monotone between.
Jet step_up(const Jet& s, double lo, double hi) {
  const double w = hi - lo;
  Jet a = (s - lo) * (1.0 / w);          // 0..1 across the transition
  Jet num = bexp(a);
  Jet den = num + bexp(1.0 - a);
  if (den.value() == 0.0) return zero_jet(s.order());  // unreachable interior
  return num * recip(den);
}

double step_up_val(double s, double lo, double hi) {
  if (s <= lo) return 0.0;
  if (s >= hi) return 1.0;
  const double a = (s - lo) / (hi - lo);
  const double n = bexp_val(a);
  return n / (n + bexp_val(1.0 - a));
}

void write_jet(const Jet& j, std::span<double> out) {
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = (static_cast<int>(k) <= j.order()) ? j[static_cast<int>(k)] : 0.0;
}

void write_zero(std::span<double> out) { std::fill(out.begin(), out.end(), 0.0); }

}  // namespace

SmoothBump::SmoothBump(Interval support, int max_order, ValueFn value,
                       TaylorFn taylor, nlohmann::json descriptor)
    : support_(support),
      max_order_(max_order),
      value_(std::move(value)),
      taylor_(std::move(taylor)),
      descriptor_(std::move(descriptor)) {}

double SmoothBump::derivative(double t, int k) const {
  if (k == 0) return value_(t);
  if (k > max_order_) throw std::domain_error("SmoothBump: derivative order exceeds max_order");
  std::vector<double> c(static_cast<std::size_t>(k) + 1, 0.0);
  taylor_(t, c);
  double fact = 1.0;
  for (int i = 2; i <= k; ++i) fact *= i;
  return fact * c.back();
}

std::vector<double> SmoothBump::taylor(double t, int order) const {
  if (order > max_order_) throw std::domain_error("SmoothBump: order exceeds max_order");
  std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
  taylor_(t, c);
  return c;
}

SmoothBump SmoothBump::derivative_bump() const {
  if (max_order_ < 1) throw std::domain_error("SmoothBump: no derivative order left");
  auto taylor = taylor_;
  auto parent_value = value_;  // unused; keeps descriptor self-contained
  (void)parent_value;
  TaylorFn dt = [taylor](double t, std::span<double> out) {
    std::vector<double> c(out.size() + 1, 0.0);
    taylor(t, c);
    for (std::size_t k = 0; k < out.size(); ++k) c[k] = (k + 1) * c[k + 1];
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = c[k];
  };
  ValueFn dv = [taylor](double t) {
    double c[2] = {0.0, 0.0};
    taylor(t, c);
    return c[1];
  };
  nlohmann::json d = descriptor_;
  d["derivative_of"] = d.value("kind", std::string("bump"));
  d["kind"] = "derivative";
  return SmoothBump(support_, max_order_ - 1, std::move(dv), std::move(dt), std::move(d));
}

SmoothBump SmoothBump::scaled(double s) const {
  auto v = value_;
  auto tl = taylor_;
  nlohmann::json d = descriptor_;
  d["scale"] = d.value("scale", 1.0) * s;
  return SmoothBump(
      support_, max_order_, [v, s](double t) { return s * v(t); },
      [tl, s](double t, std::span<double> out) {
        tl(t, out);
        for (double& x : out) x *= s;
      },
      std::move(d));
}

SmoothBump standard_bump(double a, double b) {
  if (!(a < b)) throw std::domain_error("standard_bump: degenerate interval");
  auto jet_at = [a, b](double t, int order) -> Jet {
    Jet tt = Jet::variable(t, order);
    Jet s = (2.0 * tt - (a + b)) * (1.0 / (b - a));
    Jet w = 1.0 - s * s;
    if (w.value() <= kEdgeTol) return zero_jet(order);
    return exp(1.0 - recip(w));
  };
  auto value = [a, b](double t) {
    const double s = (2.0 * t - a - b) / (b - a);
    const double w = 1.0 - s * s;
    return w <= kEdgeTol ? 0.0 : std::exp(1.0 - 1.0 / w);
  };
  auto taylor = [jet_at](double t, std::span<double> out) {
    write_jet(jet_at(t, static_cast<int>(out.size()) - 1), out);
  };
  nlohmann::json d = {{"kind", "standard_bump"}, {"a", a}, {"b", b}};
  return SmoothBump({a, b}, kBumpMaxOrder, value, taylor, d);
}

SmoothBump polynomial_bump(double a, double b, int m) {
  if (!(a < b)) throw std::domain_error("polynomial_bump: degenerate interval");
  if (m < 1) throw std::domain_error("polynomial_bump: m >= 1 required");
  auto value = [a, b, m](double t) {
    const double s = (2.0 * t - a - b) / (b - a);
    const double w = 1.0 - s * s;
    return w <= 0.0 ? 0.0 : std::pow(w, m);
  };
  auto taylor = [a, b, m](double t, std::span<double> out) {
    const int order = static_cast<int>(out.size()) - 1;
    const double s0 = (2.0 * t - a - b) / (b - a);
    if (std::abs(s0) >= 1.0) {
      write_zero(out);
      return;
    }
    Jet s = (2.0 * Jet::variable(t, order) - (a + b)) * (1.0 / (b - a));
    write_jet(ipow(1.0 - s * s, m), out);
  };
  nlohmann::json d = {{"kind", "polynomial_bump"}, {"a", a}, {"b", b}, {"m", m}};
  return SmoothBump({a, b}, kBumpMaxOrder, value, taylor, d);
}

std::pair<SmoothBump, CnCertificate> cn_normalize(const SmoothBump& bump, int N) {
  if (N > bump.max_order()) throw std::domain_error("cn_normalize: N exceeds max derivative order");
  const Interval sup = bump.support();
  const int kSamples = 4096;
  const double h = sup.length() / kSamples;

  std::vector<double> raw_sup(static_cast<std::size_t>(N) + 1, 0.0);
  const int jet_order = std::min(bump.max_order(), N + 2);
  for (int i = 1; i < kSamples; ++i) {
    const double t = sup.lo + i * h;
    auto c = bump.taylor(t, jet_order);
    double fact = 1.0;
    for (int k = 0; k <= N; ++k) {
      if (k >= 2) fact *= k;
      const double dk = std::abs(fact * c[static_cast<std::size_t>(k)]);
      if (dk > raw_sup[static_cast<std::size_t>(k)]) {
        raw_sup[static_cast<std::size_t>(k)] = dk;
        // One Newton refinement toward the nearby critical point of phi^(k),
        // available while k + 2 stays within the jet.
        if (k + 2 <= jet_order) {
          const double d1 = (k + 1) * c[static_cast<std::size_t>(k + 1)] * fact;
          const double d2 =
              (k + 1) * (k + 2) * c[static_cast<std::size_t>(k + 2)] * fact;
          if (d2 != 0.0) {
            const double tr = t - d1 / d2;
            if (tr > sup.lo && tr < sup.hi && std::abs(tr - t) < h) {
              const double refined = std::abs(bump.derivative(tr, k));
              raw_sup[static_cast<std::size_t>(k)] =
                  std::max(raw_sup[static_cast<std::size_t>(k)], refined);
            }
          }
        }
      }
    }
  }

  const double m = *std::max_element(raw_sup.begin(), raw_sup.end());
  if (m == 0.0) throw std::domain_error("cn_normalize: degenerate bump");
  const double scale = m > 1.0 ? 1.0 / m : 1.0;

  CnCertificate cert;
  cert.N = N;
  cert.scale = scale;
  cert.sup_norms.resize(raw_sup.size());
  for (std::size_t k = 0; k < raw_sup.size(); ++k) cert.sup_norms[k] = raw_sup[k] * scale;
  return {bump.scaled(scale), cert};
}

SmoothBump dyadic_psi(double alpha) {
  if (!(alpha > 0.0)) throw std::domain_error("dyadic_psi: alpha must be positive");
  // eta(s) = Theta(s) - Theta(2s) with Theta = 1 on s<=1, 0 on s>=2; the
  // shifted sums of eta over dyadic scalings telescope to 1 for s > 0.
  auto theta_val = [](double s) { return 1.0 - step_up_val(s, 1.0, 2.0); };
  auto value = [alpha, theta_val](double t) {
    if (t <= 0.5 + kEdgeTol || t >= 2.0 - kEdgeTol) return 0.0;
    return std::pow(t, alpha) * (theta_val(t) - theta_val(2.0 * t));
  };
  auto taylor = [alpha](double t, std::span<double> out) {
    const int order = static_cast<int>(out.size()) - 1;
    if (t <= 0.5 + kEdgeTol || t >= 2.0 - kEdgeTol) {
      write_zero(out);
      return;
    }
    Jet tt = Jet::variable(t, order);
    Jet theta1 = 1.0 - step_up(tt, 1.0, 2.0);
    Jet theta2 = 1.0 - step_up(2.0 * tt, 1.0, 2.0);
    write_jet(pow(tt, alpha) * (theta1 - theta2), out);
  };
  nlohmann::json d = {{"kind", "dyadic_psi"}, {"alpha", alpha}};
  return SmoothBump({0.5, 2.0}, kBumpMaxOrder, value, taylor, d);
}

SmoothBump psi_zero(double alpha, const SmoothBump& psi) {
  if (!(alpha > 0.0)) throw std::domain_error("psi_zero: alpha must be positive");
  // Active dyadic scales delta = 2^-j with (1-t)/delta inside supp psi.
  auto term_range = [](double u, int& jlo, int& jhi) {
    // delta in (u/2, 2u): j in (log2(1/(2u)), log2(2/u)).
    jlo = static_cast<int>(std::ceil(std::log2(1.0 / (2.0 * u)) - 1e-12));
    jhi = static_cast<int>(std::floor(std::log2(2.0 / u) + 1e-12));
    jlo = std::max(jlo, 1);  // delta <= 1/2
  };
  auto value = [alpha, psi, term_range](double t) {
    if (t < 0.0 || t >= 1.0) return 0.0;
    const double u = 1.0 - t;
    double s = std::pow(u, alpha);
    int jlo, jhi;
    term_range(u, jlo, jhi);
    for (int j = jlo; j <= jhi; ++j) {
      const double delta = std::ldexp(1.0, -j);
      s -= std::pow(delta, alpha) * psi(u / delta);
    }
    return s;
  };
  auto taylor = [alpha, psi, term_range](double t, std::span<double> out) {
    const int order = static_cast<int>(out.size()) - 1;
    // The telescoped sum vanishes identically beyond 3/4 (in fact beyond 1/2);
    // evaluating the difference there would only amplify cancellation noise.
    if (t < 0.0 || t >= 0.75) {
      write_zero(out);
      return;
    }
    const double u0 = 1.0 - t;
    Jet u = 1.0 - Jet::variable(t, order);
    Jet s = pow(u, alpha);
    int jlo, jhi;
    term_range(u0, jlo, jhi);
    for (int j = jlo; j <= jhi; ++j) {
      const double delta = std::ldexp(1.0, -j);
      const double w = std::pow(delta, alpha);
      // psi((1-t)/delta): the inner map is affine with slope -1/delta, so the
      // composed coefficients are psi's coefficients rescaled by (-1/delta)^k.
      auto pj = psi.taylor(u0 / delta, order);
      double f = w;
      for (int k = 0; k <= order; ++k) {
        s[k] -= f * pj[static_cast<std::size_t>(k)];
        f *= -1.0 / delta;
      }
    }
    write_jet(s, out);
  };
  nlohmann::json d = {{"kind", "psi_zero"}, {"alpha", alpha}};
  return SmoothBump({0.0, 0.75}, std::min(kBumpMaxOrder, psi.max_order()), value, taylor, d);
}

SmoothBump partition_phi() {
  // phi(t) = Theta(2t+1) - Theta(2t-1), Theta an increasing smooth step with
  // transition on [-1/4, 1/4]; integer shifts of phi telescope to 1.
  auto value = [](double t) {
    if (t <= -0.625 + kEdgeTol || t >= 0.625 - kEdgeTol) return 0.0;
    return step_up_val(2.0 * t + 1.0, -0.25, 0.25) - step_up_val(2.0 * t - 1.0, -0.25, 0.25);
  };
  auto taylor = [](double t, std::span<double> out) {
    const int order = static_cast<int>(out.size()) - 1;
    if (t <= -0.625 + kEdgeTol || t >= 0.625 - kEdgeTol) {
      write_zero(out);
      return;
    }
    Jet tt = Jet::variable(t, order);
    auto step_or_const = [order](const Jet& s) -> Jet {
      if (s.value() <= -0.25 + kEdgeTol) return zero_jet(order);
      if (s.value() >= 0.25 - kEdgeTol) return Jet::constant(1.0, order);
      return step_up(s, -0.25, 0.25);
    };
    Jet a = step_or_const(2.0 * tt + 1.0);
    Jet b = step_or_const(2.0 * tt - 1.0);
    write_jet(a - b, out);
  };
  nlohmann::json d = {{"kind", "partition_phi"}};
  return SmoothBump({-0.625, 0.625}, kBumpMaxOrder, value, taylor, d);
}

SmoothBump moment_bump(const SmoothBump& phi, int beta) {
  if (beta < 0) throw std::domain_error("moment_bump: beta must be nonnegative");
  if (beta == 0) return phi;
  auto value = [phi, beta](double t) {
    const double v = phi(t);
    return v == 0.0 ? 0.0 : std::pow(t, beta) * v;
  };
  auto taylor = [phi, beta](double t, std::span<double> out) {
    const int order = static_cast<int>(out.size()) - 1;
    auto pc = phi.taylor(t, order);
    Jet pj(order);
    for (int k = 0; k <= order; ++k) pj[k] = pc[static_cast<std::size_t>(k)];
    Jet m = ipow(Jet::variable(t, order), beta);
    write_jet(m * pj, out);
  };
  nlohmann::json d = phi.descriptor();
  d["moment_beta"] = beta;
  return SmoothBump(phi.support(), phi.max_order(), value, taylor, d);
}

TaylorRemainder::TaylorRemainder(int N) : n_(N) {
  if (N < 1) throw std::domain_error("TaylorRemainder: N >= 1 required");
}

std::complex<double> TaylorRemainder::derivative(std::complex<double> t, int k) const {
  const int m = n_ - k;  // degree of the subtracted partial sum
  if (m < 0) return std::exp(t);
  if (std::abs(t) <= 4.0) {
    // Tail series sum_{n > m} t^n / n!: immune to cancellation.
    std::complex<double> term = 1.0;
    for (int n = 1; n <= m + 1; ++n) term *= t / static_cast<double>(n);
    std::complex<double> sum = term;
    for (int n = m + 2; n < m + 80; ++n) {
      term *= t / static_cast<double>(n);
      sum += term;
      if (std::abs(term) < 1e-25 * (std::abs(sum) + 1e-300)) break;
    }
    return sum;
  }
  std::complex<double> partial = 1.0;
  std::complex<double> term = 1.0;
  for (int n = 1; n <= m; ++n) {
    term *= t / static_cast<double>(n);
    partial += term;
  }
  return std::exp(t) - partial;
}

std::complex<double> TaylorRemainder::operator()(std::complex<double> t) const {
  return derivative(t, 0);
}

std::vector<double> TaylorRemainder::measured_constants(double T, int samples) const {
  std::vector<double> c(static_cast<std::size_t>(n_) + 1, 0.0);
  for (int i = 1; i <= samples; ++i) {
    const double r = T * i / samples;
    const std::complex<double> t(0.0, r);
    for (int k = 0; k <= n_; ++k) {
      const double ratio = std::abs(derivative(t, k)) / std::pow(r, n_ - k);
      c[static_cast<std::size_t>(k)] = std::max(c[static_cast<std::size_t>(k)], ratio);
    }
  }
  return c;
}

}  // namespace bbr
