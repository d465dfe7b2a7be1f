#pragma once

// Bessel function of the first kind for real order nu >= 0, x >= 0, and the
// closed-form Bochner-Riesz kernel in R^{2d} built on it.
//
// Regions: ascending power series for x <= max(16, 2 nu); Hankel asymptotic
// expansion (adaptive length, smallest-term truncation) for large x; the
// intermediate band that opens up for nu > ~5.7 is bridged by Miller downward
// recurrence normalized with the Neumann identity
//   sum_k (nu+2k) Gamma(nu+k) / (k! Gamma(nu+1)) J_{nu+2k}(x) = (x/2)^nu / Gamma(nu+1).

namespace bbr {

double bessel_j(double nu, double x);

// K^alpha(|w|) for the multiplier (1 - |xi|^2 - |eta|^2)_+^alpha on R^d x R^d:
// Gamma(alpha+1) pi^{-alpha} |w|^{-(d+alpha)} J_{d+alpha}(2 pi |w|), with the
// finite limit Gamma(alpha+1) pi^d / Gamma(d+alpha+1) at w = 0.
double kernel_closed_form(double w_norm, double alpha, int d);

}  // namespace bbr
