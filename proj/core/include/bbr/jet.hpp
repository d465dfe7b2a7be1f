#pragma once

// Truncated Taylor-series arithmetic ("jets"). A Jet holds the Taylor
// coefficients of a scalar function at a point, up to a fixed order, and
// propagates them through arithmetic and elementary functions. This is what
// backs exact arbitrary-order derivatives of the closed-form cutoffs: no
// numeric differencing anywhere in the derivative path.

#include <cassert>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace bbr {

class Jet {
 public:
  Jet() = default;
  explicit Jet(int order) : c_(static_cast<std::size_t>(order) + 1, 0.0) {}

  static Jet constant(double v, int order) {
    Jet j(order);
    j.c_[0] = v;
    return j;
  }
  // The identity function t -> t expanded at t0.
  static Jet variable(double t0, int order) {
    Jet j(order);
    j.c_[0] = t0;
    if (order >= 1) j.c_[1] = 1.0;
    return j;
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  double operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }
  double& operator[](int k) { return c_[static_cast<std::size_t>(k)]; }
  double value() const { return c_[0]; }

  // k-th derivative = k! * c_k.
  double derivative(int k) const {
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    return fact * c_[static_cast<std::size_t>(k)];
  }

  std::span<const double> coeffs() const { return c_; }

  Jet& operator+=(const Jet& o) {
    assert(order() == o.order());
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    assert(order() == o.order());
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Jet& operator*=(double s) {
    for (double& x : c_) x *= s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator-(Jet a) {
    for (double& x : a.c_) x = -x;
    return a;
  }
  friend Jet operator+(Jet a, double s) {
    a.c_[0] += s;
    return a;
  }
  friend Jet operator+(double s, Jet a) { return std::move(a) + s; }
  friend Jet operator-(Jet a, double s) {
    a.c_[0] -= s;
    return a;
  }
  friend Jet operator-(double s, const Jet& a) { return -a + s; }

  // Truncated Cauchy product.
  friend Jet operator*(const Jet& a, const Jet& b) {
    assert(a.order() == b.order());
    const int n = a.order();
    Jet r(n);
    for (int k = 0; k <= n; ++k) {
      double s = 0.0;
      for (int j = 0; j <= k; ++j) s += a[j] * b[k - j];
      r[k] = s;
    }
    return r;
  }

 private:
  std::vector<double> c_;
};

// w = 1/u, requires u0 != 0.
inline Jet recip(const Jet& u) {
  const int n = u.order();
  if (u.value() == 0.0) throw std::domain_error("jet recip: division by zero");
  Jet w(n);
  const double inv0 = 1.0 / u.value();
  w[0] = inv0;
  for (int k = 1; k <= n; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += u[j] * w[k - j];
    w[k] = -inv0 * s;
  }
  return w;
}

// v = exp(u) via v' = v u'.
inline Jet exp(const Jet& u) {
  const int n = u.order();
  Jet v(n);
  v[0] = std::exp(u.value());
  for (int k = 1; k <= n; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += j * u[j] * v[k - j];
    v[k] = s / k;
  }
  return v;
}

// p = u^a for real a, requires u0 > 0. From u p' = a u' p.
inline Jet pow(const Jet& u, double a) {
  const int n = u.order();
  if (u.value() <= 0.0) throw std::domain_error("jet pow: base must be positive");
  Jet p(n);
  p[0] = std::pow(u.value(), a);
  for (int k = 1; k <= n; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += (a * j - (k - j)) * u[j] * p[k - j];
    p[k] = s / (k * u.value());
  }
  return p;
}

// Integer power by repeated multiplication (valid for any u0).
inline Jet ipow(const Jet& u, int m) {
  Jet r = Jet::constant(1.0, u.order());
  for (int i = 0; i < m; ++i) r = r * u;
  return r;
}

}  // namespace bbr
