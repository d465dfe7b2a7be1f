#include "bbr/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bbr {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_uv(double u, double v) {
  if (u < 0.0 || u > 0.5 || v < 0.0 || v > 0.5)
    throw std::domain_error("exponents: (u,v) must lie in [0,1/2]^2");
}
void check_nu(double nu) {
  if (!(nu > 0.0) || !(nu < 0.5))
    throw std::domain_error("exponents: nu must lie in (0,1/2)");
}
double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }
}  // namespace

const char* region_name(Region r) {
  switch (r) {
    case Region::Delta1: return "D1";
    case Region::Delta2: return "D2";
    default: return "D3";
  }
}

double beta_star(double u, int d) {
  if (u < 0.0 || u > 1.0) throw std::domain_error("beta_star: u must lie in [0,1]");
  if (d < 1) throw std::domain_error("beta_star: d >= 1 required");
  return 0.5 * (d - 1) - u * d;
}

Region classify_region(double u, double v, double nu) {
  check_uv(u, v);
  check_nu(nu);
  if (u <= nu && v <= nu) return Region::Delta1;
  if (u >= nu && v >= nu) return Region::Delta2;
  return Region::Delta3;
}

double alpha_nu_value(double u, double v, double nu, int d) {
  ExponentQuery q;
  q.d = d;
  q.u = u;
  q.v = v;
  q.nu = nu;
  return alpha_nu(q).alpha;
}

ExponentResult alpha_nu(const ExponentQuery& q) {
  if (q.d < 2) throw std::domain_error("alpha_nu: d >= 2 required");
  const Region reg = classify_region(q.u, q.v, q.nu);
  ExponentResult res;
  res.region = reg;
  res.beta_u = beta_star(q.u, q.d);
  res.beta_v = beta_star(q.v, q.d);
  const double bnu = beta_star(q.nu, q.d);
  const double den = 1.0 - 2.0 * q.nu;
  switch (reg) {
    case Region::Delta1:
      res.alpha = (q.d - 1) - q.d * (q.u + q.v);
      break;
    case Region::Delta2:
      // u + v grouped so alpha_nu(u,v) == alpha_nu(v,u) bit-for-bit
      res.alpha = 2.0 * (1.0 - (q.u + q.v)) / den * bnu;
      break;
    case Region::Delta3: {
      const double m = std::min((1.0 - 2.0 * q.u) / den, (1.0 - 2.0 * q.v) / den);
      res.alpha = std::max(res.beta_u, res.beta_v) + bnu * m;
      break;
    }
  }
  return res;
}

PThresholds p_thresholds(int d) {
  if (d < 2) throw std::domain_error("p_thresholds: d >= 2 required");
  const int k = d % 3;
  const int den = 4 * d - 6 - k;
  PThresholds t;
  t.p0 = den == 0 ? kInf : 2.0 + 12.0 / den;
  t.ps = std::min(t.p0, 2.0 * (d + 2) / d);
  return t;
}

GammaResult gamma_subcritical(const SubcriticalQuery& q) {
  if (q.d < 2) throw std::domain_error("gamma_subcritical: d >= 2 required");
  if (q.p < 2.0 || q.q < 2.0)
    throw std::domain_error("gamma_subcritical: p, q must be >= 2");
  const double ir = inv(q.r);
  if (inv(q.p) + inv(q.q) < ir - 1e-15)
    throw std::domain_error("gamma_subcritical: 1/p + 1/q >= 1/r required");

  const double ir1 = inv(q.r1());
  const double ir2 = inv(q.r2());
  GammaResult g;
  const double base = beta_star(inv(q.p), q.d) + beta_star(inv(q.q), q.d);
  if (ir <= ir1 + ir2) {
    g.value = base;
    g.branch = 1;
  } else if (ir <= 2.0 * ir1) {
    const double penalty = (q.d * q.d - q.d - 1.0) / (2.0 * (q.d + 1));
    g.value = base - penalty + 0.5 * q.d * ir;
    g.branch = 2;
  } else {
    // 1/r > 2/r_1, i.e. r below (d+1)/(d-1): outside the theorem range.
    g.in_range = false;
    g.value = std::numeric_limits<double>::quiet_NaN();
  }
  return g;
}

double necessary_alpha(double p, double q, int d) {
  const double ip = inv(p), iq = inv(q);
  const double a = 0.5 * (d - 1) - d * ip - 0.5 * d * iq;
  const double b = 0.5 * (d - 1) - d * iq - 0.5 * d * ip;
  return std::max({a, b, 0.0});
}

std::vector<BgsyThreshold> known_necessary_bgsy(double p, double q, double r, int d) {
  const double ip = inv(p), iq = inv(q), ir = inv(r);
  std::vector<BgsyThreshold> out;
  out.push_back({"i", d * (ir - 1.0) - 0.5, std::abs(ip + iq - ir) < 1e-12});
  out.push_back({"ii", d * std::abs(ip - 0.5) - 0.5,
                 std::isinf(q) || std::abs(ip + iq - 1.0) < 1e-12});
  return out;
}

std::vector<RegionRow> region_table(int d, double nu, double step) {
  check_nu(nu);
  if (!(step > 0.0)) throw std::domain_error("region_table: step must be positive");
  const double n_real = 0.5 / step;
  const long n = std::lround(n_real);
  if (std::abs(n_real - n) > 1e-9)
    throw std::domain_error("region_table: step must divide 1/2");
  std::vector<RegionRow> rows;
  rows.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
  for (long i = 0; i <= n; ++i) {
    for (long j = 0; j <= n; ++j) {
      const double u = 0.5 * i / n;
      const double v = 0.5 * j / n;
      ExponentQuery q{d, u, v, nu};
      auto res = alpha_nu(q);
      rows.push_back({u, v, res.region, res.alpha});
    }
  }
  return rows;
}

std::vector<BoundaryRow> boundary_table(int d, double nu, double step) {
  check_nu(nu);
  const long n = std::lround(0.5 / step);
  std::vector<BoundaryRow> rows;
  for (long i = 0; i <= n; ++i) {
    const double u = 0.5 * i / n;
    BoundaryRow row;
    row.inv_p = u;
    row.alpha_thm = alpha_nu_value(u, u, nu, d);
    // Prior-work curve for L^p x L^p -> L^{p/2}: (d-1)(1 - 2u) once r = p/2
    // drops to [1,2] (u >= 1/4), else (d-1)/2 + d(1/2 - 2u).
    row.alpha_prop11 =
        u >= 0.25 ? (d - 1) * (1.0 - 2.0 * u) : 0.5 * (d - 1) + d * (0.5 - 2.0 * u);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace bbr
