#pragma once

// Bilinear multiplier machinery: exact evaluation of T_m(f,g) on the product
// frequency lattice, the bilinear Bochner-Riesz symbol and its dyadic pieces,
// the shell-product operator sum_rho S_{rho,delta} f . S_{varrho-rho,delta} g,
// the decomposition-lemma expansion with Taylor moments, and the tensor
// kernel decay check.

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "bbr/bumps.hpp"
#include "bbr/grid.hpp"
#include "bbr/linear_ops.hpp"

namespace bbr {

struct BilinearSymbol {
  enum class Structure { RadialSum, SeparableSum, General };
  Structure structure = Structure::General;

  // General evaluator (always set).
  std::function<cplx(const double xi[2], const double eta[2], int d)> eval;

  // Radial-sum fast path: value depends on s = |xi|^2 + |eta|^2 only, and
  // vanishes outside [s_lo, s_hi]. Set for RadialSum.
  std::function<double(double)> radial;
  double s_lo = 0.0;
  double s_hi = 0.0;
};

// m^alpha(xi,eta) = (1 - |xi|^2 - |eta|^2)_+^alpha.
BilinearSymbol bilinear_br_symbol(double alpha);
// psi((1 - |xi|^2 - |eta|^2)/delta).
BilinearSymbol btilde_symbol(double delta, const SmoothBump& psi);
// psi0(|xi|^2 + |eta|^2).
BilinearSymbol btilde_zero_symbol(const SmoothBump& psi0);
// sum_{rho in delta Z cap [0,1]} phi1((|xi|^2-rho)/delta) phi2((varrho-rho-|eta|^2)/delta).
BilinearSymbol separable_window_symbol(double delta, double varrho, const SmoothBump& phi1,
                                       const SmoothBump& phi2);

inline constexpr std::uint64_t kBilinearBudget = 1ull << 34;

// Exact bilinear evaluation: accumulates m(xi,eta) f^(xi) g^(eta) over lattice
// pairs with xi + eta = zeta, then one inverse transform. Radial-sum symbols
// iterate only their support window (sorted-|eta|^2 slices). Throws when the
// pair-operation count would exceed `budget`, directing the caller to the
// shell-product path.
Field bilinear_exact(const Field& f, const Field& g, const BilinearSymbol& m,
                     std::uint64_t budget = kBilinearBudget);

// Number of pair operations bilinear_exact would perform.
std::uint64_t bilinear_exact_cost(const Field& f, const Field& g, const BilinearSymbol& m);

Field btilde_delta(const Field& f, const Field& g, double delta, const SmoothBump& psi,
                   std::uint64_t budget = kBilinearBudget);
Field btilde_zero(const Field& f, const Field& g, const SmoothBump& psi0,
                  std::uint64_t budget = kBilinearBudget);

// B_{delta,varrho}^{phi1,phi2}(f,g) = sum_{rho in delta Z cap [0,1]}
// (S_{rho,delta}^{phi1} f)(S_{varrho-rho,delta}^{phi2} g), evaluated pointwise
// in space with O(1/delta) transform passes. Shells whose spectral content is
// identically zero are skipped without a transform.
Field bilinear_shell_product(const Field& f, const Field& g, double delta, double varrho,
                             const SmoothBump& phi1, const SmoothBump& phi2);

// Pointwise Cauchy-Schwarz gap: max over x of |B(f,g)(x)| - Df(x) Dg(x) where
// Df, Dg are the matching discrete square-function factors. Nonpositive up to
// roundoff by construction.
double cauchy_schwarz_violation(const Field& f, const Field& g, double delta, double varrho,
                                const SmoothBump& phi1, const SmoothBump& phi2);

struct MomentEntry {
  double varrho;
  int m;  // beta + gamma
  double moment;  // psi^(m)((1-varrho)/delta) / m!-free coefficient base
};

struct ReconstructionReport {
  double delta = 0.0, eps = 0.0, delta_tilde = 0.0;
  int N = 0;
  double sup_error = 0.0;             // sup |psi(...) - expansion| on active windows
  double window_partition_error = 0.0;  // sup |sum of phi-phi windows - 1| on supp psi
  std::size_t lattice_pairs = 0;
  std::vector<MomentEntry> moments;
};

// Symbol-level check of the decomposition-lemma expansion at resolution
// delta_tilde = delta^(1+eps): varrho ranges over delta_tilde Z cap
// [1-4delta, 1+2delta], moments are evaluated exactly from psi derivatives,
// and the sup-error of the expansion without remainder is measured on the
// (xi,eta) product lattice of the 1-d grid.
ReconstructionReport lemma31_reconstruct(double delta, double eps, int N,
                                         const SmoothBump& psi, const SmoothBump& phi,
                                         const TorusGrid& grid1d);

// Relative sup deviation between bilinear_exact with the separable window
// symbol and bilinear_shell_product, on the same fields.
double separable_vs_exact(const Field& f, const Field& g, double delta, double varrho,
                          const SmoothBump& phi1, const SmoothBump& phi2);

struct Lemma33Report {
  double delta = 0.0, tau = 0.0;
  int N = 0;
  double constant = 0.0;      // max |K(y,z)| (1+d|y|)^{d+1/2} (1+d|z|)^{d+1/2} / (1+|tau|)^N
  double mass_radius_y = 0.0; // radius along y containing 90% of |K| mass
};

// Kernel decay of the Taylor-remainder window symbol
// E(2 pi i ((varrho - xi^2 - eta^2)/delta) tau) phi((rho-xi^2)/delta)
// phi((varrho-rho-eta^2)/delta) at d = 1, via a 2-d transform.
Lemma33Report lemma33_kernel_check(double delta, double tau, int N, const SmoothBump& phi,
                                   const TorusGrid& grid1d);

}  // namespace bbr
