#pragma once

// Empirical operator-norm estimation (lower bounds by construction), the
// delta power-law scans, and the stationary-phase sharpness experiment built
// on the closed-form kernel.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bbr/bilinear_ops.hpp"
#include "bbr/bumps.hpp"
#include "bbr/grid.hpp"

namespace bbr {

struct ExponentTriple {
  double p = 2.0, q = 2.0, r = 1.0;
};

struct NormEstimate {
  std::string op;       // "btilde" or "shell_product"
  double p = 0, q = 0, r = 0;
  double delta = 0, varrho = 1.0;
  double value = 0.0;   // best found ratio ||T(f,g)||_r / (||f||_p ||g||_q)
  std::string family;   // winning witness family
  std::uint64_t seed = 0;
  bool budget_exhausted = false;
};

struct ScalingFit {
  std::vector<std::array<double, 2>> points;  // (log2 x, log2 y)
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
  bool reliable = true;
};

// Least squares on (log2 x, log2 y); requires >= 4 points, skips y <= 0.
ScalingFit fit_loglog(std::span<const std::array<double, 2>> xy);

// Which bilinear operator a scan runs over (profiles are shared across the
// delta list).
struct BilinearOpFamily {
  enum class Kind { BTilde, ShellProduct };
  Kind kind = Kind::ShellProduct;
  double varrho = 1.0;
  const SmoothBump* psi = nullptr;   // BTilde
  const SmoothBump* phi1 = nullptr;  // ShellProduct
  const SmoothBump* phi2 = nullptr;
  std::string name() const { return kind == Kind::BTilde ? "btilde" : "shell_product"; }
};

// Evaluate the operator on one witness pair.
Field apply_bilinear(const BilinearOpFamily& fam, double delta, const Field& f,
                     const Field& g);

// Which witness families an estimate draws on.
struct WitnessSet {
  bool antipodal_caps = true;
  bool focusing = true;
  bool knapp_plates = true;
  bool random = true;
};

// Best ratio over the enabled witness families (antipodal shell caps,
// full-shell focusing, Knapp plates, random band-limited fields with phase
// local search), reported per exponent triple. `budget` caps the number of
// operator evaluations spent on the random family.
std::vector<NormEstimate> estimate_bilinear_norm_multi(const BilinearOpFamily& fam,
                                                       const TorusGrid& grid, double delta,
                                                       std::span<const ExponentTriple> exps,
                                                       int budget, std::uint64_t seed,
                                                       WitnessSet witnesses = {});

NormEstimate estimate_bilinear_norm(const BilinearOpFamily& fam, const TorusGrid& grid,
                                    double delta, double p, double q, double r, int budget,
                                    std::uint64_t seed, WitnessSet witnesses = {});

struct ScanResult {
  ExponentTriple exps;
  std::vector<NormEstimate> estimates;  // one per delta
  ScalingFit fit;                       // log2 norm vs log2 delta
};

std::vector<ScanResult> delta_scaling_scan(const BilinearOpFamily& fam, const TorusGrid& grid,
                                           std::span<const ExponentTriple> exps,
                                           std::span<const double> deltas, int budget,
                                           std::uint64_t seed);

// ---- stationary-phase sharpness experiment -------------------------------

struct CounterexampleConfig {
  int d = 2;
  double alpha = 0.2;
  double eps0 = 0.25;                     // cone aperture
  std::vector<double> R_list;             // each >= 64/eps0^2
  std::uint64_t samples = 1ull << 20;     // Monte-Carlo sample count
  int strata = 64;                        // strata along the oscillating |z|
};

void validate(const CounterexampleConfig& cfg);

struct PairingResult {
  double R = 0.0;
  double abs_value = 0.0;  // |A_R||B_R| |mean integrand|
  double stderr_ = 0.0;
  bool reliable = true;    // stderr <= 5% of |value|
};

// Stratified Monte-Carlo estimate of  | integral_{A_R x B_R} K^alpha(|(y,z)|)
// e^{-2 pi i |z|} dy dz |  (the e^{-2 pi i |z|} modulation matches the
// 2 pi-frequency oscillation of the closed-form kernel).
PairingResult counterexample_pairing(const CounterexampleConfig& cfg, double R,
                                     std::uint64_t seed);

struct CounterexampleFit {
  std::vector<PairingResult> pairings;
  ScalingFit fit;               // log2 |pairing| vs log2 R
  double predicted_slope = 0;   // (d-1)/2 - alpha
  double holder_exponent = 0;   // d/(2p) + d/q
  double implied_alpha_min = 0; // (slope + alpha) - holder_exponent
  double necessary_alpha_ref = 0;
  bool reliable = true;
};

CounterexampleFit necessary_exponent_fit(const CounterexampleConfig& cfg, double p, double q,
                                         std::uint64_t seed);

}  // namespace bbr
