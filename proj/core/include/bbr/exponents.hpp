#pragma once

// Exponent arithmetic: the region split of the (1/p, 1/q) square, the
// smoothing-order function alpha_nu on it, the square-function thresholds
// p_0 / p_s, the subcritical gamma(p,q,r), and the necessary lower bounds,
// plus tabular emission for the region/boundary diagrams.
//
// Everything here is closed-form arithmetic over exponents; infinite
// exponents are passed as std::numeric_limits<double>::infinity() and obey
// 1/inf = 0.

#include <limits>
#include <string>
#include <vector>

namespace bbr {

enum class Region { Delta1, Delta2, Delta3 };

const char* region_name(Region r);  // "D1" / "D2" / "D3"

struct ExponentQuery {
  int d = 2;        // dimension
  double u = 0.0;   // 1/p in [0, 1/2]
  double v = 0.0;   // 1/q in [0, 1/2]
  double nu = 0.25; // region parameter in (0, 1/2)
};

struct ExponentResult {
  Region region = Region::Delta1;
  double alpha = 0.0;
  double beta_u = 0.0;
  double beta_v = 0.0;
};

// beta_*(u) = (d-1)/2 - u d,  u in [0,1].
double beta_star(double u, int d);

// Region of (u, v) for parameter nu; (nu, nu) resolves to Delta1 (the alpha
// formulas agree there, so the tag choice is cosmetic).
Region classify_region(double u, double v, double nu);

ExponentResult alpha_nu(const ExponentQuery& q);
double alpha_nu_value(double u, double v, double nu, int d);

struct PThresholds {
  double p0 = 0.0;  // Bourgain-Guth threshold; +inf when the denominator is 0
  double ps = 0.0;  // min{p0, 2(d+2)/d}
};
PThresholds p_thresholds(int d);

struct SubcriticalQuery {
  double p = 2.0;
  double q = 2.0;
  double r = 2.0;
  int d = 2;
  double r1() const { return 2.0 * (d + 1) / (d - 1); }
  double r2() const {
    return d == 2 ? std::numeric_limits<double>::infinity() : 2.0 * d / (d - 2);
  }
};

struct GammaResult {
  double value = 0.0;
  bool in_range = true;  // false when 1/r > 2/r_1 (outside theorem range)
  int branch = 1;
};
GammaResult gamma_subcritical(const SubcriticalQuery& q);

// max{(d-1)/2 - d/p - d/(2q), (d-1)/2 - d/q - d/(2p), 0}.
double necessary_alpha(double p, double q, int d);

struct BgsyThreshold {
  std::string name;   // "i" or "ii"
  double alpha_max;   // boundedness fails for alpha <= alpha_max
  bool applicable;
};
std::vector<BgsyThreshold> known_necessary_bgsy(double p, double q, double r, int d);

// One lattice sample of the region diagram.
struct RegionRow {
  double u, v;
  Region region;
  double alpha;
};
std::vector<RegionRow> region_table(int d, double nu, double step);

// Diagonal curve data for the L^p x L^p -> L^{p/2} diagram: alpha from the
// present bound at nu, and the prior-work comparison curve.
struct BoundaryRow {
  double inv_p;
  double alpha_thm;
  double alpha_prop11;
};
std::vector<BoundaryRow> boundary_table(int d, double nu, double step);

}  // namespace bbr
