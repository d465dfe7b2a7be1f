#include "bbr/linear_ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bbr/io.hpp"

namespace bbr {
namespace {

constexpr double kPi = 3.14159265358979323846;

void shell_window(const ShellSpec& spec, double& lo, double& hi) {
  const Interval sup = spec.profile->support();
  lo = spec.rho + spec.delta * sup.lo;
  hi = spec.rho + spec.delta * sup.hi;
}

double torus_abs2(const TorusGrid& g, std::size_t idx, double x[2]) {
  g.x_at(idx, x);
  return g.d == 1 ? x[0] * x[0] : x[0] * x[0] + x[1] * x[1];
}

// Shared multiplier loop over the cached |xi|^2 table.
template <typename Fn>
Field radial_multiplier(const Field& f, double win_lo, double win_hi, Fn&& symbol_of_s,
                        bool spatial_out) {
  Field spec = to_spectral(f);
  auto xi2 = spec.grid().xi_norm2();
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const double s = xi2[i];
    if (s < win_lo || s > win_hi) {
      spec[i] = 0.0;
    } else if (spec[i] != cplx{0.0, 0.0}) {
      spec[i] *= symbol_of_s(s);
    }
  }
  return spatial_out ? transform_inverse(spec) : spec;
}

void check_shell(const ShellSpec& spec) {
  if (spec.profile == nullptr || !spec.profile->valid())
    throw std::invalid_argument("shell: missing profile");
  if (!(spec.delta > 0.0)) throw std::domain_error("shell: delta must be positive");
}

// Fraction of kernel energy sitting within two cells of the torus boundary.
double wraparound_fraction(const Field& kernel) {
  const TorusGrid& g = kernel.grid();
  const double edge = g.L / 2.0 - 2.0 * g.dx();
  double total = 0.0, boundary = 0.0;
  double x[2];
  for (std::size_t i = 0; i < kernel.size(); ++i) {
    const double a = std::norm(kernel[i]);
    total += a;
    g.x_at(i, x);
    const double m = g.d == 1 ? std::abs(x[0]) : std::max(std::abs(x[0]), std::abs(x[1]));
    if (m >= edge) boundary += a;
  }
  return total > 0.0 ? boundary / total : 0.0;
}

}  // namespace

Field bochner_riesz(const Field& f, double alpha, double t, bool spatial_out) {
  if (!(t > 0.0)) throw std::domain_error("bochner_riesz: t must be positive");
  if (alpha < 0.0) throw std::domain_error("bochner_riesz: alpha must be >= 0");
  const double t2 = t * t;
  return radial_multiplier(
      f, 0.0, t2, [alpha, t2](double s) { return std::pow(1.0 - s / t2, alpha); },
      spatial_out);
}

Field shell_op(const Field& f, const ShellSpec& spec, bool spatial_out) {
  check_shell(spec);
  double lo, hi;
  shell_window(spec, lo, hi);
  const SmoothBump& phi = *spec.profile;
  const double rho = spec.rho, delta = spec.delta;
  return radial_multiplier(
      f, lo, hi, [&phi, rho, delta](double s) { return phi((s - rho) / delta); },
      spatial_out);
}

Field shell_projection(const Field& f, double rho, double delta, bool spatial_out) {
  if (!(delta > 0.0)) throw std::domain_error("shell_projection: delta must be positive");
  return radial_multiplier(
      f, rho - delta, rho + delta, [](double) { return 1.0; }, spatial_out);
}

std::pair<Field, KernelEnvelope> shell_kernel(const TorusGrid& grid, const ShellSpec& spec,
                                              int N) {
  check_shell(spec);
  if (grid.L * spec.delta < 8.0 - 1e-9)
    throw std::domain_error("shell_kernel: grid period must satisfy L >= 8/delta");
  Field symbol(grid, Repr::Spectral);
  auto xi2 = grid.xi_norm2();
  double lo, hi;
  shell_window(spec, lo, hi);
  for (std::size_t i = 0; i < symbol.size(); ++i) {
    const double s = xi2[i];
    if (s >= lo && s <= hi) symbol[i] = (*spec.profile)((s - spec.rho) / spec.delta);
  }
  Field kernel = transform_inverse(symbol);

  const double wrap = wraparound_fraction(kernel);
  if (wrap > 1e-6)
    throw std::runtime_error("shell_kernel: wraparound detected (boundary mass fraction " +
                             std::to_string(wrap) + ")");

  KernelEnvelope env;
  env.lemma = "isotropic";
  env.d = grid.d;
  env.rho = spec.rho;
  env.delta = spec.delta;
  env.N = N;
  env.small_rho_regime = spec.rho <= kKernelRegimeC * spec.delta;
  const bool main_valid = spec.rho >= 2.0 * spec.delta;
  const double inner = 4.0 * grid.dx();
  double x[2];
  for (std::size_t i = 0; i < kernel.size(); ++i) {
    const double r2 = torus_abs2(grid, i, x);
    if (r2 < inner * inner) continue;
    const double r = std::sqrt(r2);
    const double e_small = std::pow(spec.delta, grid.d / 2.0) *
                           std::pow(1.0 + std::sqrt(spec.delta) * r, -N);
    const double e_main = std::pow(spec.rho, (grid.d - 2) / 2.0) * spec.delta *
                          std::pow(1.0 + spec.delta * r / std::sqrt(spec.rho), -N);
    const double a = std::abs(kernel[i]);
    const double ratio = a / (env.small_rho_regime ? e_small : e_main);
    if (ratio > env.constant) {
      env.constant = ratio;
      env.max_ratio_location = {x[0], x[1]};
    }
    if (main_valid) env.constant_main = std::max(env.constant_main, a / e_main);
  }
  if (!main_valid) env.constant_main = env.constant;
  return {std::move(kernel), env};
}

FrequencySymbol angular_cutoff(int j, int M) {
  if (M < 4) throw std::domain_error("angular_cutoff: M >= 4 required");
  static const SmoothBump phi = partition_phi();
  const double theta_j = 2.0 * kPi * j / M;
  const double dtheta = 2.0 * kPi / M;
  FrequencySymbol s;
  s.eval = [theta_j, dtheta](const double xi[2], int d) -> cplx {
    if (d != 2) throw std::domain_error("angular_cutoff: d = 2 only");
    if (xi[0] == 0.0 && xi[1] == 0.0) return 0.0;
    double a = std::atan2(xi[1], xi[0]) - theta_j;
    a = std::remainder(a, 2.0 * kPi);
    return phi(a / dtheta);
  };
  return s;
}

int angular_partition_count(double l) {
  // Member support is |angle| < (5/8) * (2pi/M); chord <= angle, so
  // M >= 5pi/(8l) puts it inside the 2l-cone.
  return std::max(4, static_cast<int>(std::ceil(5.0 * kPi / (8.0 * l))));
}

std::pair<Field, KernelEnvelope> angular_shell_kernel(const TorusGrid& grid,
                                                      const ShellSpec& spec, int j, int M,
                                                      double l, int N) {
  check_shell(spec);
  if (grid.d != 2) throw std::domain_error("angular_shell_kernel: d = 2 only");
  if (grid.L * spec.delta < 8.0 - 1e-9)
    throw std::domain_error("angular_shell_kernel: grid period must satisfy L >= 8/delta");

  KernelEnvelope env;
  env.lemma = "anisotropic";
  env.d = 2;
  env.rho = spec.rho;
  env.delta = spec.delta;
  env.N = N;
  const double l_star = std::sqrt(spec.delta / spec.rho);
  if (l > 4.0 * l_star || l < l_star / 4.0)
    env.warning = "aperture l outside the l ~ sqrt(delta/rho) regime";

  FrequencySymbol chi = angular_cutoff(j, M);
  Field symbol(grid, Repr::Spectral);
  auto xi2 = grid.xi_norm2();
  double lo, hi;
  shell_window(spec, lo, hi);
  double xi[2];
  for (std::size_t i = 0; i < symbol.size(); ++i) {
    const double s = xi2[i];
    if (s < lo || s > hi) continue;
    grid.xi_at(i, xi);
    const cplx c = chi.eval(xi, 2);
    if (c != cplx{0.0, 0.0}) symbol[i] = c * (*spec.profile)((s - spec.rho) / spec.delta);
  }
  Field kernel = transform_inverse(symbol);

  const double wrap = wraparound_fraction(kernel);
  if (wrap > 1e-6)
    throw std::runtime_error("angular_shell_kernel: wraparound detected");

  const double theta_j = 2.0 * kPi * j / M;
  const double wx = std::cos(theta_j), wy = std::sin(theta_j);
  const double amp = std::pow(spec.rho, -0.5) * std::pow(spec.delta, (grid.d + 1) / 2.0);
  const double inner = 4.0 * grid.dx();
  double x[2];
  for (std::size_t i = 0; i < kernel.size(); ++i) {
    const double r2 = torus_abs2(grid, i, x);
    if (r2 < inner * inner) continue;
    const double along = std::abs(x[0] * wx + x[1] * wy);
    const double tx = x[0] - (x[0] * wx + x[1] * wy) * wx;
    const double ty = x[1] - (x[0] * wx + x[1] * wy) * wy;
    const double across = std::sqrt(tx * tx + ty * ty);
    const double e =
        amp * std::pow(1.0 + std::sqrt(spec.delta) * across +
                           spec.delta / std::sqrt(spec.rho) * along,
                       -N);
    const double ratio = std::abs(kernel[i]) / e;
    if (ratio > env.constant) {
      env.constant = ratio;
      env.max_ratio_location = {x[0], x[1]};
    }
  }
  env.constant_main = env.constant;
  return {std::move(kernel), env};
}

Field square_discrete(const Field& f, double delta, const SmoothBump& profile,
                      double range_lo, double range_hi) {
  if (!(delta > 0.0)) throw std::domain_error("square_discrete: delta must be positive");
  const Field spec = to_spectral(f);
  Field acc(spec.grid(), Repr::Spatial);
  const long k_lo = static_cast<long>(std::ceil(range_lo / delta - 1e-12));
  const long k_hi = static_cast<long>(std::floor(range_hi / delta + 1e-12));
  for (long k = k_lo; k <= k_hi; ++k) {
    ShellSpec s{k * delta, delta, &profile};
    Field piece = shell_op(spec, s, /*spatial_out=*/true);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += std::norm(piece[i]);
  }
  for (auto& z : acc.values()) z = std::sqrt(z.real());
  return acc;
}

Field square_continuous(const Field& f, double delta, const SmoothBump& profile,
                        double t_lo, double t_hi, int nodes) {
  if (!(delta > 0.0)) throw std::domain_error("square_continuous: delta must be positive");
  if (nodes < static_cast<int>(8.0 / delta))
    throw std::domain_error("square_continuous: nodes below the 8/delta resolution floor");
  const Field spec = to_spectral(f);
  Field acc(spec.grid(), Repr::Spatial);
  const double dt = (t_hi - t_lo) / nodes;
  for (int i = 0; i < nodes; ++i) {
    const double t = t_lo + (i + 0.5) * dt;
    ShellSpec s{t, delta, &profile};
    Field piece = shell_op(spec, s, /*spatial_out=*/true);
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += std::norm(piece[k]) * dt;
  }
  for (auto& z : acc.values()) z = std::sqrt(z.real());
  return acc;
}

double square_continuous_resolution(const Field& f, double delta, const SmoothBump& profile,
                                    double t_lo, double t_hi, int nodes) {
  Field a = square_continuous(f, delta, profile, t_lo, t_hi, nodes);
  Field b = square_continuous(f, delta, profile, t_lo, t_hi, 2 * nodes);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i].real() - b[i].real()));
    den = std::max(den, std::abs(b[i].real()));
  }
  return den > 0.0 ? num / den : 0.0;
}

FrequencySymbol stein_derivative_symbol(double alpha, double t) {
  FrequencySymbol s;
  const double t2 = t * t;
  s.support_radius = t;
  s.eval = [alpha, t, t2](const double xi[2], int d) -> cplx {
    const double n2 = d == 1 ? xi[0] * xi[0] : xi[0] * xi[0] + xi[1] * xi[1];
    const double w = 1.0 - n2 / t2;
    if (w <= 0.0) return 0.0;
    return 2.0 * alpha * n2 / (t2 * t) * std::pow(w, alpha - 1.0);
  };
  return s;
}

Field stein_square(const Field& f, double alpha, double t_lo, double t_hi, int nodes) {
  if (!(alpha > 1.0))
    throw std::domain_error(
        "stein_square: alpha > 1 required (derivative symbol is singular otherwise)");
  if (!(t_lo > 0.0) || !(t_hi > t_lo) || nodes < 2)
    throw std::domain_error("stein_square: bad t interval or node count");
  const Field spec = to_spectral(f);
  Field acc(spec.grid(), Repr::Spatial);
  const double dt = (t_hi - t_lo) / nodes;
  for (int i = 0; i < nodes; ++i) {
    const double t = t_lo + (i + 0.5) * dt;
    Field piece = apply_symbol(spec, stein_derivative_symbol(alpha, t), /*spatial_out=*/true);
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += std::norm(piece[k]) * t * dt;
  }
  for (auto& z : acc.values()) z = std::sqrt(z.real());
  return acc;
}

Lemma23Report lemma23_pointwise(const Field& f, double delta, const SmoothBump& profile,
                                int nodes) {
  if (nodes < static_cast<int>(32.0 / delta))
    throw std::domain_error("lemma23_pointwise: nodes >= 32/delta required");
  const SmoothBump dprofile = profile.derivative_bump();
  Field lhs = square_discrete(f, delta, profile, 0.5, 1.0);
  Field s1 = square_continuous(f, delta, profile, 0.5, 2.0, nodes);
  Field s2 = square_continuous(f, delta, dprofile, 0.5, 2.0, nodes);
  const double c = 1.0 / std::sqrt(delta);

  Lemma23Report rep;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    const double L = lhs[i].real();
    const double R = c * (s1[i].real() + s2[i].real());
    rep.max_violation = std::max(rep.max_violation, L - R);
    rep.scale = std::max(rep.scale, std::max(L, R));
    if (R > 0.0) rep.max_ratio = std::max(rep.max_ratio, L / R);
  }
  rep.slack = 1e-6 * rep.scale;
  rep.ok = rep.max_violation <= rep.slack;
  return rep;
}

nlohmann::json envelope_to_json(const KernelEnvelope& env) {
  return {{"lemma", env.lemma},
          {"d", env.d},
          {"rho", env.rho},
          {"delta", env.delta},
          {"N", env.N},
          {"small_rho_regime", env.small_rho_regime},
          {"constant", env.constant},
          {"constant_main", env.constant_main},
          {"max_ratio_location", {env.max_ratio_location[0], env.max_ratio_location[1]}},
          {"warning", env.warning}};
}

void write_kernel_slice_csv(const Field& kernel, const KernelEnvelope& env,
                            const std::string& path, const std::string& hash) {
  const TorusGrid& g = kernel.grid();
  CsvTable t;
  t.header = {"x", "abs_k", "envelope"};
  for (int j = 0; j < g.n; ++j) {
    const double x = g.coord(j);
    const double r = std::abs(x);
    double e;
    if (env.small_rho_regime) {
      e = std::pow(env.delta, g.d / 2.0) * std::pow(1.0 + std::sqrt(env.delta) * r, -env.N);
    } else {
      e = std::pow(env.rho, (g.d - 2) / 2.0) * env.delta *
          std::pow(1.0 + env.delta * r / std::sqrt(env.rho), -env.N);
    }
    t.rows.push_back({format_float(x), format_float(std::abs(kernel[static_cast<std::size_t>(j)])),
                      format_float(env.constant * e)});
  }
  write_csv(t, path, hash);
}

}  // namespace bbr
