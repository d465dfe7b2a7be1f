#include "bbr/bessel.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace bbr {
namespace {

constexpr double kPi = 3.14159265358979323846;

double series_j(double nu, double x) {
  // sum_m (-1)^m (x/2)^(nu+2m) / (m! Gamma(nu+m+1))
  const double q = 0.25 * x * x;
  double term = std::exp(nu * std::log(0.5 * x) - std::lgamma(nu + 1.0));
  double sum = term;
  for (int m = 1; m < 200; ++m) {
    term *= -q / (m * (nu + m));
    sum += term;
    if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-300) && m > 0.5 * x) break;
  }
  return sum;
}

double hankel_j(double nu, double x) {
  // J_nu(x) ~ sqrt(2/(pi x)) [P cos(w) - Q sin(w)], w = x - nu pi/2 - pi/4,
  // a_k = prod_{j<=k} (4nu^2 - (2j-1)^2) / (k! 8^k); smallest-term truncation.
  const double mu = 4.0 * nu * nu;
  double p = 1.0, q = 0.0;
  double term = 1.0;
  double prev = std::abs(term);
  for (int k = 1; k <= 40; ++k) {
    term *= (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * x);
    const double mag = std::abs(term);
    if (mag > prev) break;  // divergent tail reached
    prev = mag;
    switch (k % 4) {
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
      default: p += term; break;
    }
    if (mag < 1e-18) break;
  }
  const double w = x - (0.5 * nu + 0.25) * kPi;
  return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(w) - q * std::sin(w));
}

double miller_j(double nu, double x) {
  // Downward recurrence J_{mu-1} = (2 mu / x) J_mu - J_{mu+1} from a start
  // order well above max(nu, x), normalized by the Neumann sum.
  const int m_start =
      static_cast<int>(std::ceil(std::max(x, nu) + 14.0 * std::sqrt(std::max(x, nu)) + 20.0));
  std::vector<double> p(static_cast<std::size_t>(m_start) + 2, 0.0);
  p[static_cast<std::size_t>(m_start) + 1] = 0.0;
  p[static_cast<std::size_t>(m_start)] = 1e-280;
  for (int k = m_start; k >= 1; --k) {
    p[static_cast<std::size_t>(k) - 1] =
        (2.0 * (nu + k) / x) * p[static_cast<std::size_t>(k)] -
        p[static_cast<std::size_t>(k) + 1];
    if (std::abs(p[static_cast<std::size_t>(k) - 1]) > 1e200) {
      for (int j = m_start + 1; j >= k - 1; --j) p[static_cast<std::size_t>(j)] *= 1e-200;
    }
  }
  // sum_k (nu+2k) Gamma(nu+k)/(k! Gamma(nu+1)) J_{nu+2k}(x) = (x/2)^nu / Gamma(nu+1)
  double norm = p[0];  // k = 0 weight is nu Gamma(nu)/Gamma(nu+1) = 1, also as nu -> 0
  for (int k = 1; 2 * k <= m_start; ++k) {
    const double lw = std::lgamma(nu + k) - std::lgamma(k + 1.0) - std::lgamma(nu + 1.0);
    norm += (nu + 2.0 * k) * std::exp(lw) * p[static_cast<std::size_t>(2 * k)];
  }
  const double target = std::exp(nu * std::log(0.5 * x) - std::lgamma(nu + 1.0));
  return p[0] * target / norm;
}

}  // namespace

double bessel_j(double nu, double x) {
  if (nu < 0.0 || x < 0.0) throw std::domain_error("bessel_j: nu >= 0 and x >= 0 required");
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  const double series_edge = std::max(16.0, 2.0 * nu);
  if (x <= series_edge) return series_j(nu, x);
  const double hankel_edge = std::max(18.0, 0.6 * nu * nu);
  if (x >= hankel_edge) return hankel_j(nu, x);
  return miller_j(nu, x);
}

double kernel_closed_form(double w_norm, double alpha, int d) {
  if (w_norm < 0.0) throw std::domain_error("kernel_closed_form: |w| >= 0 required");
  const double c = std::tgamma(alpha + 1.0) * std::pow(kPi, -alpha);
  const double nu = d + alpha;
  if (w_norm < 1e-12)
    return std::tgamma(alpha + 1.0) * std::pow(kPi, static_cast<double>(d)) /
           std::tgamma(d + alpha + 1.0);
  return c * std::pow(w_norm, -nu) * bessel_j(nu, 2.0 * kPi * w_norm);
}

}  // namespace bbr
