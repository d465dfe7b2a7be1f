#pragma once

// Smooth compactly supported cutoffs and their high-order derivatives:
// the standard bump, C_N-normalized profiles, the dyadically calibrated
// psi (sum_{delta dyadic} delta^a psi(t/delta) = t^a), its coarse residual
// psi0, the integer-shift partition function phi, moment bumps t^b phi(t),
// and the Taylor remainder E(t) = e^t - sum_{n<=N} t^n/n!.
//
// Every derivative is computed by truncated Taylor arithmetic on the closed
// forms (see jet.hpp); finite differences appear only in tests as an oracle.

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bbr/jet.hpp"
#include "json.hpp"

namespace bbr {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  bool contains(double t) const { return t >= lo && t <= hi; }
};

// A smooth function of one variable, identically zero (with all derivatives)
// outside `support`. Evaluation and Taylor expansion share one closed-form
// nucleus; `descriptor()` serializes the construction for reproducibility.
class SmoothBump {
 public:
  using ValueFn = std::function<double(double)>;
  // Writes Taylor coefficients c_0..c_n at t into the span (n = span size - 1).
  using TaylorFn = std::function<void(double, std::span<double>)>;

  SmoothBump() = default;
  SmoothBump(Interval support, int max_order, ValueFn value, TaylorFn taylor,
             nlohmann::json descriptor);

  double operator()(double t) const { return value_(t); }
  double derivative(double t, int k) const;
  // Taylor coefficients at t up to the requested order (<= max_order).
  std::vector<double> taylor(double t, int order) const;

  const Interval& support() const { return support_; }
  int max_order() const { return max_order_; }
  const nlohmann::json& descriptor() const { return descriptor_; }
  bool valid() const { return static_cast<bool>(value_); }

  // The derivative as a bump in its own right (same support, order - 1).
  SmoothBump derivative_bump() const;
  // Pointwise scaling by a constant.
  SmoothBump scaled(double s) const;

 private:
  Interval support_{};
  int max_order_ = 0;
  ValueFn value_;
  TaylorFn taylor_;
  nlohmann::json descriptor_;
};

struct CnCertificate {
  int N = 0;
  std::vector<double> sup_norms;  // sup |phi^(k)| for k = 0..N, post-scaling
  double scale = 1.0;             // factor applied to the input bump
};

inline constexpr int kBumpMaxOrder = 16;

// exp(1 - 1/(1-s^2)) with s the affine map of (a,b) onto (-1,1); value 1 at
// the midpoint, identically zero outside (a,b).
SmoothBump standard_bump(double a, double b);

// (1-s^2)_+^m: a C^{m-1} member of the cutoff classes with an exactly
// order-(m+1) algebraic Fourier tail. The class-sharp witness for kernel
// decay envelopes (the flat-at-the-edge exponential bumps under-fill the
// far-field envelope by their super-polynomial tails).
SmoothBump polynomial_bump(double a, double b, int m);

// Scales `bump` so every sup_{t} |phi^(k)(t)|, k <= N, is <= 1, and reports
// the measured sups. Sups are estimated on a dense grid (>= 4096 points)
// with one Newton refinement against the next derivative.
std::pair<SmoothBump, CnCertificate> cn_normalize(const SmoothBump& bump, int N);

// psi in C_c^inf(1/2, 2) with  sum_{delta in D} delta^a psi(t/delta) = t^a
// for t > 0, D the dyadic numbers. Requires a > 0.
SmoothBump dyadic_psi(double alpha);

// psi0(t) = (1-t)_+^a - sum_{delta in D, delta <= 1/2} delta^a psi((1-t)/delta)
// on [0,1), extended by zero; supported in [0, 3/4]. Equals the delta = 1
// term of the telescoped sum.
SmoothBump psi_zero(double alpha, const SmoothBump& psi);

// phi supported in (-5/8, 5/8) with  sum_{k in Z} phi(t + k) = 1 for all t.
SmoothBump partition_phi();

// phi_beta(t) = t^beta phi(t). Requires beta >= 0.
SmoothBump moment_bump(const SmoothBump& phi, int beta);

// Taylor remainder E(t) = e^t - sum_{n<=N} t^n/n!, evaluated on the imaginary
// axis as the decomposition lemma uses it; E^(k)(t) = e^t - sum_{n<=N-k} t^n/n!.
class TaylorRemainder {
 public:
  explicit TaylorRemainder(int N);
  int N() const { return n_; }
  std::complex<double> operator()(std::complex<double> t) const;
  std::complex<double> derivative(std::complex<double> t, int k) const;
  // Measured C_k = sup_{0 < |t| <= T, t imaginary} |E^(k)(t)| / |t|^(N-k).
  std::vector<double> measured_constants(double T, int samples = 4096) const;

 private:
  int n_;
};

}  // namespace bbr
