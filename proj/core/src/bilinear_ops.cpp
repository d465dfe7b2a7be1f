#include "bbr/bilinear_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

namespace bbr {
namespace {

struct SortedSpectrum {
  std::vector<double> s;        // |xi|^2, ascending
  std::vector<std::uint32_t> idx;  // matching flat spectral indices
};

std::mutex g_sorted_mu;
std::map<std::pair<int, std::pair<double, int>>, SortedSpectrum> g_sorted_cache;

const SortedSpectrum& sorted_spectrum(const TorusGrid& g) {
  std::scoped_lock lock(g_sorted_mu);
  auto key = std::make_pair(g.d, std::make_pair(g.L, g.n));
  auto it = g_sorted_cache.find(key);
  if (it == g_sorted_cache.end()) {
    auto xi2 = g.xi_norm2();
    std::vector<std::uint32_t> idx(xi2.size());
    for (std::uint32_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&xi2](std::uint32_t a, std::uint32_t b) { return xi2[a] < xi2[b]; });
    SortedSpectrum ss;
    ss.idx = std::move(idx);
    ss.s.resize(xi2.size());
    for (std::size_t i = 0; i < ss.s.size(); ++i) ss.s[i] = xi2[ss.idx[i]];
    it = g_sorted_cache.emplace(key, std::move(ss)).first;
  }
  return it->second;
}

std::size_t add_index(const TorusGrid& g, std::size_t a, std::size_t b) {
  const std::size_t mask = static_cast<std::size_t>(g.n) - 1;
  if (g.d == 1) return (a + b) & mask;
  const std::size_t n = static_cast<std::size_t>(g.n);
  const std::size_t ax = a & mask, ay = a / n;
  const std::size_t bx = b & mask, by = b / n;
  return ((ay + by) & mask) * n + ((ax + bx) & mask);
}

// |xi|^2 + |eta|^2 with the per-vector sums formed first, so the value is
// bit-identical under independent coordinate permutations of xi and eta.
double pair_norm2(const double xi[2], const double eta[2], int d) {
  const double a = d == 1 ? xi[0] * xi[0] : xi[0] * xi[0] + xi[1] * xi[1];
  const double b = d == 1 ? eta[0] * eta[0] : eta[0] * eta[0] + eta[1] * eta[1];
  return a + b;
}

std::vector<std::uint32_t> nonzero_indices(const Field& spec) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < spec.size(); ++i)
    if (spec[i] != cplx{0.0, 0.0}) out.push_back(i);
  return out;
}

void check_same_grid(const Field& f, const Field& g) {
  if (!(f.grid() == g.grid()))
    throw std::invalid_argument("bilinear: fields live on different grids");
}

// Spectral shell application touching only lattice points inside the symbol
// window; returns an empty optional-like flag when the output is identically
// zero so callers can skip the transform.
bool shell_apply_sparse(const Field& spec_in, double rho, double delta,
                        const SmoothBump& profile, Field& out_spec) {
  const TorusGrid& g = spec_in.grid();
  const SortedSpectrum& ss = sorted_spectrum(g);
  const Interval sup = profile.support();
  const double lo = rho + delta * sup.lo;
  const double hi = rho + delta * sup.hi;
  std::fill(out_spec.values().begin(), out_spec.values().end(), cplx{0.0, 0.0});
  if (hi < 0.0) return false;
  auto first = std::lower_bound(ss.s.begin(), ss.s.end(), lo);
  auto last = std::upper_bound(ss.s.begin(), ss.s.end(), hi);
  bool any = false;
  for (auto it = first; it != last; ++it) {
    const std::size_t pos = static_cast<std::size_t>(it - ss.s.begin());
    const std::uint32_t j = ss.idx[pos];
    const cplx v = spec_in[j];
    if (v == cplx{0.0, 0.0}) continue;
    const double w = profile((*it - rho) / delta);
    if (w == 0.0) continue;
    out_spec[j] = v * w;
    any = true;
  }
  return any;
}

}  // namespace

BilinearSymbol bilinear_br_symbol(double alpha) {
  if (alpha < 0.0) throw std::domain_error("bilinear_br_symbol: alpha >= 0 required");
  BilinearSymbol m;
  m.structure = BilinearSymbol::Structure::RadialSum;
  m.s_lo = 0.0;
  m.s_hi = 1.0;
  m.radial = [alpha](double s) {
    const double w = 1.0 - s;
    return w > 0.0 ? std::pow(w, alpha) : 0.0;
  };
  m.eval = [alpha](const double xi[2], const double eta[2], int d) -> cplx {
    const double w = 1.0 - pair_norm2(xi, eta, d);
    return w > 0.0 ? std::pow(w, alpha) : 0.0;
  };
  return m;
}

BilinearSymbol btilde_symbol(double delta, const SmoothBump& psi) {
  if (!(delta > 0.0)) throw std::domain_error("btilde_symbol: delta must be positive");
  BilinearSymbol m;
  m.structure = BilinearSymbol::Structure::RadialSum;
  const Interval sup = psi.support();  // (1-s)/delta in supp psi
  m.s_lo = 1.0 - delta * sup.hi;
  m.s_hi = 1.0 - delta * sup.lo;
  const SmoothBump* p = &psi;
  m.radial = [p, delta](double s) { return (*p)((1.0 - s) / delta); };
  m.eval = [p, delta](const double xi[2], const double eta[2], int d) -> cplx {
    return (*p)((1.0 - pair_norm2(xi, eta, d)) / delta);
  };
  return m;
}

BilinearSymbol btilde_zero_symbol(const SmoothBump& psi0) {
  BilinearSymbol m;
  m.structure = BilinearSymbol::Structure::RadialSum;
  m.s_lo = 0.0;
  m.s_hi = psi0.support().hi;
  const SmoothBump* p = &psi0;
  m.radial = [p](double s) { return (*p)(s); };
  m.eval = [p](const double xi[2], const double eta[2], int d) -> cplx {
    return (*p)(pair_norm2(xi, eta, d));
  };
  return m;
}

BilinearSymbol separable_window_symbol(double delta, double varrho, const SmoothBump& phi1,
                                       const SmoothBump& phi2) {
  BilinearSymbol m;
  m.structure = BilinearSymbol::Structure::SeparableSum;
  const SmoothBump* p1 = &phi1;
  const SmoothBump* p2 = &phi2;
  m.eval = [p1, p2, delta, varrho](const double xi[2], const double eta[2], int d) -> cplx {
    const double s1 = d == 1 ? xi[0] * xi[0] : xi[0] * xi[0] + xi[1] * xi[1];
    const double s2 = d == 1 ? eta[0] * eta[0] : eta[0] * eta[0] + eta[1] * eta[1];
    // phi1((s1 - rho)/delta) != 0 requires rho in (s1 - delta*hi, s1 - delta*lo)
    const long k_lo = std::max(0L, std::lround(std::ceil((s1 - delta * p1->support().hi) / delta)));
    const long k_hi = std::min(std::lround(std::floor(1.0 / delta + 1e-9)),
                               std::lround(std::floor((s1 - delta * p1->support().lo) / delta)));
    double acc = 0.0;
    for (long k = k_lo; k <= k_hi; ++k) {
      const double rho = k * delta;
      acc += (*p1)((s1 - rho) / delta) * (*p2)((varrho - rho - s2) / delta);
    }
    return acc;
  };
  return m;
}

std::uint64_t bilinear_exact_cost(const Field& f, const Field& g, const BilinearSymbol& m) {
  const Field fs = to_spectral(f);
  const Field gs = to_spectral(g);
  check_same_grid(fs, gs);
  const auto nzf = nonzero_indices(fs);
  if (m.structure == BilinearSymbol::Structure::RadialSum) {
    const SortedSpectrum& ss = sorted_spectrum(fs.grid());
    auto xi2 = fs.grid().xi_norm2();
    std::uint64_t cost = 0;
    for (std::uint32_t i : nzf) {
      const double lo = m.s_lo - xi2[i];
      const double hi = m.s_hi - xi2[i];
      if (hi < 0.0) continue;
      auto first = std::lower_bound(ss.s.begin(), ss.s.end(), lo);
      auto last = std::upper_bound(ss.s.begin(), ss.s.end(), hi);
      cost += static_cast<std::uint64_t>(last - first);
    }
    return cost;
  }
  const auto nzg = nonzero_indices(gs);
  return static_cast<std::uint64_t>(nzf.size()) * nzg.size();
}

Field bilinear_exact(const Field& f, const Field& g, const BilinearSymbol& m,
                     std::uint64_t budget) {
  const Field fs = to_spectral(f);
  const Field gs = to_spectral(g);
  check_same_grid(fs, gs);
  const TorusGrid& grid = fs.grid();
  const std::uint64_t cost = bilinear_exact_cost(fs, gs, m);
  if (cost > budget)
    throw std::runtime_error(
        "bilinear_exact: pair-operation budget exceeded (" + std::to_string(cost) +
        " > " + std::to_string(budget) + "); use bilinear_shell_product instead");

  Field out(grid, Repr::Spectral);
  const auto nzf = nonzero_indices(fs);
  const double w = std::pow(grid.freq_spacing(), grid.d);

  if (m.structure == BilinearSymbol::Structure::RadialSum) {
    const SortedSpectrum& ss = sorted_spectrum(grid);
    auto xi2 = grid.xi_norm2();
    for (std::uint32_t i : nzf) {
      const double s1 = xi2[i];
      const double lo = m.s_lo - s1;
      const double hi = m.s_hi - s1;
      if (hi < 0.0) continue;
      const auto first = std::lower_bound(ss.s.begin(), ss.s.end(), lo);
      const auto last = std::upper_bound(ss.s.begin(), ss.s.end(), hi);
      const cplx fv = fs[i];
      for (auto it = first; it != last; ++it) {
        const std::size_t pos = static_cast<std::size_t>(it - ss.s.begin());
        const std::uint32_t j = ss.idx[pos];
        const cplx gv = gs[j];
        if (gv == cplx{0.0, 0.0}) continue;
        const double mv = m.radial(s1 + *it);
        if (mv == 0.0) continue;
        out[add_index(grid, i, j)] += mv * fv * gv;
      }
    }
  } else {
    const auto nzg = nonzero_indices(gs);
    double xi[2], eta[2];
    for (std::uint32_t i : nzf) {
      grid.xi_at(i, xi);
      const cplx fv = fs[i];
      for (std::uint32_t j : nzg) {
        grid.xi_at(j, eta);
        const cplx mv = m.eval(xi, eta, grid.d);
        if (mv == cplx{0.0, 0.0}) continue;
        out[add_index(grid, i, j)] += mv * fv * gs[j];
      }
    }
  }
  for (auto& z : out.values()) z *= w;
  return transform_inverse(out);
}

Field btilde_delta(const Field& f, const Field& g, double delta, const SmoothBump& psi,
                   std::uint64_t budget) {
  return bilinear_exact(f, g, btilde_symbol(delta, psi), budget);
}

Field btilde_zero(const Field& f, const Field& g, const SmoothBump& psi0,
                  std::uint64_t budget) {
  return bilinear_exact(f, g, btilde_zero_symbol(psi0), budget);
}

Field bilinear_shell_product(const Field& f, const Field& g, double delta, double varrho,
                             const SmoothBump& phi1, const SmoothBump& phi2) {
  if (!(delta > 0.0)) throw std::domain_error("bilinear_shell_product: delta > 0 required");
  const Field fs = to_spectral(f);
  const Field gs = to_spectral(g);
  check_same_grid(fs, gs);
  const TorusGrid& grid = fs.grid();
  Field acc(grid, Repr::Spatial);
  Field work_f(grid, Repr::Spectral);
  Field work_g(grid, Repr::Spectral);
  const long k_hi = std::lround(std::floor(1.0 / delta + 1e-9));
  for (long k = 0; k <= k_hi; ++k) {
    const double rho = k * delta;
    if (!shell_apply_sparse(fs, rho, delta, phi1, work_f)) continue;
    if (!shell_apply_sparse(gs, varrho - rho, delta, phi2, work_g)) continue;
    Field sf = transform_inverse(work_f);
    Field sg = transform_inverse(work_g);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += sf[i] * sg[i];
  }
  return acc;
}

double cauchy_schwarz_violation(const Field& f, const Field& g, double delta, double varrho,
                                const SmoothBump& phi1, const SmoothBump& phi2) {
  const Field fs = to_spectral(f);
  const Field gs = to_spectral(g);
  check_same_grid(fs, gs);
  const TorusGrid& grid = fs.grid();
  std::vector<cplx> b(grid.size(), cplx{0.0, 0.0});
  std::vector<double> df2(grid.size(), 0.0), dg2(grid.size(), 0.0);
  Field work_f(grid, Repr::Spectral);
  Field work_g(grid, Repr::Spectral);
  const long k_hi = std::lround(std::floor(1.0 / delta + 1e-9));
  for (long k = 0; k <= k_hi; ++k) {
    const double rho = k * delta;
    const bool has_f = shell_apply_sparse(fs, rho, delta, phi1, work_f);
    const bool has_g = shell_apply_sparse(gs, varrho - rho, delta, phi2, work_g);
    if (!has_f && !has_g) continue;
    Field sf = transform_inverse(work_f);
    Field sg = transform_inverse(work_g);
    for (std::size_t i = 0; i < b.size(); ++i) {
      b[i] += sf[i] * sg[i];
      df2[i] += std::norm(sf[i]);
      dg2[i] += std::norm(sg[i]);
    }
  }
  double viol = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < b.size(); ++i)
    viol = std::max(viol, std::abs(b[i]) - std::sqrt(df2[i]) * std::sqrt(dg2[i]));
  return viol;
}

ReconstructionReport lemma31_reconstruct(double delta, double eps, int N,
                                         const SmoothBump& psi, const SmoothBump& phi,
                                         const TorusGrid& grid1d) {
  if (!(eps > 0.0) || eps > 0.5) throw std::domain_error("lemma31_reconstruct: eps in (0,1/2]");
  if (N > psi.max_order()) throw std::domain_error("lemma31_reconstruct: derivative order exceeded");
  if (grid1d.d != 1) throw std::domain_error("lemma31_reconstruct: 1-d grid expected");

  ReconstructionReport rep;
  rep.delta = delta;
  rep.eps = eps;
  rep.N = N;
  const double dt = std::pow(delta, 1.0 + eps);
  rep.delta_tilde = dt;

  const long q_lo = static_cast<long>(std::ceil((1.0 - 4.0 * delta) / dt - 1e-9));
  const long q_hi = static_cast<long>(std::floor((1.0 + 2.0 * delta) / dt + 1e-9));
  const long rho_hi = static_cast<long>(std::floor(1.0 / dt + 1e-9));

  // psi^(m)((1-varrho)/delta) for every window center and m <= N.
  std::vector<std::vector<double>> derivs(static_cast<std::size_t>(q_hi - q_lo + 1));
  for (long q = q_lo; q <= q_hi; ++q) {
    const double varrho = q * dt;
    auto c = psi.taylor((1.0 - varrho) / delta, N);
    std::vector<double> dv(static_cast<std::size_t>(N) + 1);
    double fact = 1.0;
    for (int mth = 0; mth <= N; ++mth) {
      if (mth >= 2) fact *= mth;
      dv[static_cast<std::size_t>(mth)] = fact * c[static_cast<std::size_t>(mth)];
    }
    derivs[static_cast<std::size_t>(q - q_lo)] = dv;
    for (int mth = 0; mth <= N; ++mth)
      rep.moments.push_back({varrho, mth, dv[static_cast<std::size_t>(mth)]});
  }

  const double phi_halfwidth = 0.625;  // supp phi
  const double deps = std::pow(delta, eps);

  // s values of the 1-d lattice, once.
  auto xi2 = grid1d.xi_norm2();
  std::vector<double> svals(xi2.begin(), xi2.end());
  std::sort(svals.begin(), svals.end());
  svals.erase(std::unique(svals.begin(), svals.end()), svals.end());

  const double s_min = 1.0 - 4.0 * delta - 2.0 * dt;
  const double s_max = 1.0 + 2.0 * delta + 2.0 * dt;

  for (double s1 : svals) {
    if (s1 > s_max) break;
    // s2 range so that s1 + s2 lies in the active band.
    const auto lo2 = std::lower_bound(svals.begin(), svals.end(), s_min - s1);
    const auto hi2 = std::upper_bound(svals.begin(), svals.end(), s_max - s1);
    for (auto it2 = lo2; it2 != hi2; ++it2) {
      const double s2 = *it2;
      const double truth = psi((1.0 - s1 - s2) / delta);
      double expansion = 0.0;
      double window_sum = 0.0;
      const long kc = std::lround(s1 / dt);
      for (long k = kc - 1; k <= kc + 1; ++k) {
        if (k < 0 || k > rho_hi) continue;
        const double rho = k * dt;
        const double u = (rho - s1) / dt;
        if (std::abs(u) >= phi_halfwidth) continue;
        const double pu = phi(u);
        if (pu == 0.0) continue;
        const long qc = std::lround((rho + s2) / dt);
        for (long q = qc - 1; q <= qc + 1; ++q) {
          if (q < q_lo || q > q_hi) continue;
          const double varrho = q * dt;
          const double v = (varrho - rho - s2) / dt;
          if (std::abs(v) >= phi_halfwidth) continue;
          const double pv = phi(v);
          if (pv == 0.0) continue;
          window_sum += pu * pv;
          // The (beta,gamma) sum collapses binomially: with A = delta^eps u,
          // B = delta^eps v, sum C_bg delta^(eps(b+g)) mom_(b+g) phi_b phi_g
          // = phi(u) phi(v) sum_m psi^(m)(t_q) (A+B)^m / m!.
          const auto& dv = derivs[static_cast<std::size_t>(q - q_lo)];
          const double z = deps * (u + v);
          double term = 0.0, zp = 1.0, fact = 1.0;
          for (int mth = 0; mth <= N; ++mth) {
            if (mth >= 1) {
              zp *= z;
              fact *= mth;
            }
            term += dv[static_cast<std::size_t>(mth)] * zp / fact;
          }
          expansion += pu * pv * term;
        }
      }
      if (window_sum != 0.0 || truth != 0.0) {
        ++rep.lattice_pairs;
        rep.sup_error = std::max(rep.sup_error, std::abs(truth - expansion));
        if (truth != 0.0)
          rep.window_partition_error =
              std::max(rep.window_partition_error, std::abs(window_sum - 1.0));
      }
    }
  }
  return rep;
}

double separable_vs_exact(const Field& f, const Field& g, double delta, double varrho,
                          const SmoothBump& phi1, const SmoothBump& phi2) {
  Field exact = bilinear_exact(f, g, separable_window_symbol(delta, varrho, phi1, phi2));
  Field shells = bilinear_shell_product(f, g, delta, varrho, phi1, phi2);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    num = std::max(num, std::abs(exact[i] - shells[i]));
    den = std::max(den, std::abs(exact[i]));
  }
  return den > 0.0 ? num / den : num;
}

Lemma33Report lemma33_kernel_check(double delta, double tau, int N, const SmoothBump& phi,
                                   const TorusGrid& grid1d) {
  if (grid1d.d != 1) throw std::domain_error("lemma33_kernel_check: 1-d grid expected");
  const TaylorRemainder E(N);
  const double rho = 0.5, varrho = 1.0;

  TorusGrid grid2{2, grid1d.L, grid1d.n};
  Field symbol(grid2, Repr::Spectral);
  auto xi2 = grid1d.xi_norm2();
  const std::size_t n = static_cast<std::size_t>(grid1d.n);
  for (std::size_t ke = 0; ke < n; ++ke) {
    const double s2 = xi2[ke];
    const double pv = phi((varrho - rho - s2) / delta);
    if (pv == 0.0) continue;
    for (std::size_t kx = 0; kx < n; ++kx) {
      const double s1 = xi2[kx];
      const double pu = phi((rho - s1) / delta);
      if (pu == 0.0) continue;
      const cplx ev = E(cplx(0.0, 2.0 * 3.14159265358979323846 *
                                      ((varrho - s1 - s2) / delta) * tau));
      symbol[ke * n + kx] = ev * pu * pv;
    }
  }
  Field kernel = transform_inverse(symbol);

  const double wrap_edge = grid2.L / 2.0 - 2.0 * grid2.dx();
  Lemma33Report rep;
  rep.delta = delta;
  rep.tau = tau;
  rep.N = N;
  const double tau_growth = std::pow(1.0 + std::abs(tau), N);
  const double inner = 4.0 * grid2.dx();
  std::vector<double> marginal(n, 0.0);
  double x[2];
  for (std::size_t i = 0; i < kernel.size(); ++i) {
    grid2.x_at(i, x);
    const double ay = std::abs(x[0]);
    const double az = std::abs(x[1]);
    const double a = std::abs(kernel[i]);
    marginal[i % n] += a;
    if (ay >= wrap_edge || az >= wrap_edge) continue;
    if (ay < inner && az < inner) continue;
    const double env = tau_growth * std::pow(1.0 + delta * ay, -(grid1d.d + 0.5)) *
                       std::pow(1.0 + delta * az, -(grid1d.d + 0.5));
    rep.constant = std::max(rep.constant, a / env);
  }
  // Radius along y containing 90% of the marginal |K| mass.
  double total = 0.0;
  for (double v : marginal) total += v;
  std::vector<std::pair<double, double>> by_r(n);
  for (std::size_t k = 0; k < n; ++k)
    by_r[k] = {std::abs(grid1d.coord(static_cast<int>(k))), marginal[k]};
  std::sort(by_r.begin(), by_r.end());
  double run = 0.0;
  for (const auto& [r, v] : by_r) {
    run += v;
    if (run >= 0.9 * total) {
      rep.mass_radius_y = r;
      break;
    }
  }
  return rep;
}

}  // namespace bbr
