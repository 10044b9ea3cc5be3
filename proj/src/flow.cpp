#include "onephase/flow.hpp"

#include <cmath>
#include <stdexcept>

#include "onephase/catenoid.hpp"
#include "onephase/numerics.hpp"

namespace onephase {

double stable_dt(const AxiGrid& grid, Scheme scheme) {
  // dt * diag(A) <= 1 keeps the explicit update a convex combination
  // (axis row has the (n-1) factor); reaction cap from F''(+-1) = 2/eps^2
  double diag = 2.0 * (grid.n - 1) / (grid.hr * grid.hr) + 2.0 / (grid.hz * grid.hz);
  // dt (lambda_max + kappa/2) <= 2 with lambda_max <= 2 diag gives descent of
  // the discrete energy; kappa bounds the nonconvex part of F''
  double dt = 0.85 / diag;
  if (scheme == Scheme::explicit_euler) {
    double eps = grid.pot.eps;
    double hmin2 = std::min(grid.hr * grid.hr, grid.hz * grid.hz);
    dt = std::min({dt, 0.2 * eps * eps, 0.25 * hmin2});
  }
  return dt;
}

double default_steady_tol(const AxiGrid& grid) {
  return 1e-10 * std::pow(grid.a, grid.n - 1);
}

double resolve_dt(const AxiGrid& grid, const FlowConfig& cfg) {
  double dt = cfg.dt > 0.0 ? cfg.dt : stable_dt(grid, cfg.scheme);
  double hmin2 = std::min(grid.hr * grid.hr, grid.hz * grid.hz);
  if (cfg.scheme == Scheme::explicit_euler) {
    double eps = grid.pot.eps;
    if (dt > hmin2 / 4.0 || dt > eps * eps / 2.0)
      throw std::invalid_argument("flow: explicit dt must satisfy dt <= min(hr^2,hz^2)/4 and eps^2/2");
  } else if (dt > hmin2) {
    throw std::invalid_argument("flow: imex dt beyond the diffusion stability range");
  }
  return dt;
}

namespace {

// per-node implicit solve v + (dt/2) F'(v) = q by Newton; F' points inward
// at +-1 so the root stays in [-1,1] for |q| <= 1
inline double imex_reaction(double q, double dt, const PotentialSpec& pot) {
  double v = std::clamp(q, -1.0, 1.0);
  for (int it = 0; it < 12; ++it) {
    double g = v + 0.5 * dt * feps_deriv(v, pot) - q;
    if (std::abs(g) < 1e-14) break;
    // dF'/ds bounded below by -C/eps^2; dt keeps 1 + (dt/2) F'' > 0
    double h = 1e-7;
    double vp = std::clamp(v + h, -1.0, 1.0), vm = std::clamp(v - h, -1.0, 1.0);
    double d2 = (feps_deriv(vp, pot) - feps_deriv(vm, pot)) / (vp - vm);
    double slope = 1.0 + 0.5 * dt * d2;
    if (slope < 0.1) slope = 0.1;
    v = std::clamp(v - g / slope, -1.0, 1.0);
  }
  return v;
}

}  // namespace

void step_inplace(Field& u, Field& scratch, const BoundaryData& bd, double dt, Scheme scheme) {
  const AxiGrid& g = *u.grid;
  const PotentialSpec& pot = g.pot;
  scratch.v = u.v;
  const double ihz2 = 1.0 / (g.hz * g.hz);
  for (int i = 0; i < g.Nr; ++i) {
    const double wl = (i > 0) ? g.face_w[i - 1] : 0.0;
    const double wr = g.face_w[i];
    const double iv = 1.0 / (g.cell_v[i] * g.hr);
    for (int j = 0; j < g.Nz; ++j) {
      double lap_r = wr * (scratch.at(i + 1, j) - scratch.at(i, j));
      if (i > 0) lap_r -= wl * (scratch.at(i, j) - scratch.at(i - 1, j));
      lap_r *= iv;
      double below = (j > 0) ? scratch.at(i, j - 1) : scratch.at(i, 1);
      double lap_z = (scratch.at(i, j + 1) - 2.0 * scratch.at(i, j) + below) * ihz2;
      double q = scratch.at(i, j) + dt * (lap_r + lap_z);
      if (scheme == Scheme::explicit_euler) {
        u.at(i, j) = q - 0.5 * dt * feps_deriv(scratch.at(i, j), pot);
      } else {
        u.at(i, j) = imex_reaction(q, dt, pot);
      }
    }
  }
  impose_boundary(u, bd);
}

Field step(const Field& u, const BoundaryData& bd, const FlowConfig& cfg) {
  double dt = resolve_dt(*u.grid, cfg);
  Field out = u;
  Field scratch(*u.grid);
  step_inplace(out, scratch, bd, dt, cfg.scheme);
  return out;
}

std::pair<Field, FlowReport> relax(const Field& u0, const BoundaryData& bd,
                                   const FlowConfig& cfg) {
  const AxiGrid& g = *u0.grid;
  double dt = resolve_dt(g, cfg);
  double tol = cfg.steady_tol > 0.0 ? cfg.steady_tol : default_steady_tol(g);
  Field u = u0;
  impose_boundary(u, bd);
  Field scratch(g);
  FlowReport rep;
  rep.dt = dt;
  double e0 = energy(u);
  double e_prev = e0;
  rep.times.push_back(0.0);
  rep.energies.push_back(e0);
  rep.residuals.push_back(residual_norm2(u));
  if (rep.residuals.back() < tol) {
    rep.terminated_by = FlowReport::Termination::steady;
    return {u, rep};
  }
  for (long m = 1; m <= cfg.max_steps; ++m) {
    step_inplace(u, scratch, bd, dt, cfg.scheme);
    if (m % cfg.check_every == 0 || m == cfg.max_steps) {
      double e = energy(u);
      double res = residual_norm2(u);
      rep.times.push_back(m * dt);
      rep.energies.push_back(e);
      rep.residuals.push_back(res);
      rep.steps = m;
      if (e > e_prev + 1e-10 * std::abs(e0) + 1e-13)
        throw std::runtime_error("relax: energy increased beyond slack (stability violation)");
      e_prev = e;
      if (res < tol) {
        rep.terminated_by = FlowReport::Termination::steady;
        return {u, rep};
      }
    }
  }
  rep.terminated_by = FlowReport::Termination::t_max;
  return {u, rep};
}

double check_ordering(const Field& ua, const Field& ub, const BoundaryData& bd,
                      const FlowConfig& cfg, int n_steps) {
  const AxiGrid& g = *ua.grid;
  double dt = resolve_dt(g, cfg);
  Field a = ua, b = ub, scratch(g);
  double min_gap = std::numeric_limits<double>::infinity();
  auto scan = [&] {
    for (std::size_t t = 0; t < a.v.size(); ++t) min_gap = std::min(min_gap, b.v[t] - a.v[t]);
  };
  scan();
  for (int m = 0; m < n_steps; ++m) {
    step_inplace(a, scratch, bd, dt, cfg.scheme);
    step_inplace(b, scratch, bd, dt, cfg.scheme);
    scan();
  }
  return min_gap;
}

std::pair<double, double> check_monotone(const Field& u) {
  const AxiGrid& g = *u.grid;
  double min_dz = std::numeric_limits<double>::infinity();
  double max_dr = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= g.Nr; ++i)
    for (int j = 0; j + 1 <= g.Nz; ++j)
      min_dz = std::min(min_dz, (u.at(i, j + 1) - u.at(i, j)) / g.hz);
  for (int i = 0; i + 1 <= g.Nr; ++i)
    for (int j = 0; j <= g.Nz; ++j)
      max_dr = std::max(max_dr, (u.at(i + 1, j) - u.at(i, j)) / g.hr);
  return {min_dz, max_dr};
}

double wall_catenoid_sigma(const AxiGrid& grid) {
  const int n = grid.n;
  const double a = grid.a;
  auto zbar = [&](double sigma) {
    if (n == 3) return sigma * std::acosh(a / sigma);
    Catenoid c(n, sigma, Catenoid::Convention::centered);
    return c.z_of_r(a);
  };
  // sigma * zbar_1(a/sigma) rises then falls to 0 at sigma = a; the wall
  // root sits on the falling branch
  double lo = 0.5 * a, hi = a * (1.0 - 1e-9);
  // move lo to the maximum if the function still rises there
  for (int it = 0; it < 60; ++it) {
    double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (zbar(m1) < zbar(m2)) lo = m1;
    else hi = m2;
  }
  double peak = 0.5 * (lo + hi);
  if (zbar(peak) <= grid.z_cat)
    throw std::runtime_error("wall_catenoid_sigma: no wall-side root (a too small)");
  return brent_root([&](double s) { return zbar(s) - grid.z_cat; }, peak, a * (1.0 - 1e-12),
                    1e-12);
}

Field build_u2_seed(const Field& u1, const BoundaryData& bd, const HeteroclinicProfile& profile) {
  const AxiGrid& g = *u1.grid;
  double sigma = wall_catenoid_sigma(g);

  // polyline of the wall catenoid (neck on the bottom), extended past r = a
  Catenoid cat(g.n, sigma, Catenoid::Convention::centered);
  std::vector<double> cr, cz;
  const int ncurve = 800;
  double r_end = std::min(g.a + 3.0, (g.n == 3) ? sigma * std::cosh((g.z_cat + 3.0) / sigma)
                                                : g.a + 3.0);
  for (int t = 0; t <= ncurve; ++t) {
    double r = sigma + (r_end - sigma) * t / ncurve;
    cr.push_back(r);
    cz.push_back(cat.z_of_r(r));
  }

  const double lift_slope = 2.0;  // wall blend H(z - z_cat + M (a - r))
  Field u2(g);
  for (int i = 0; i <= g.Nr; ++i) {
    for (int j = 0; j <= g.Nz; ++j) {
      double r = g.r(i), z = g.z(j);
      double d = polyline_signed_distance(cr, cz, r, z);
      if (r < sigma && z < cz.front()) d = -std::hypot(sigma - r, cz.front() - z);
      double film = profile.value(d);
      double cap = profile.value(z - g.z_cat + lift_slope * (g.a - r));
      u2.at(i, j) = std::max(u1.at(i, j), std::min(film, cap));
    }
  }
  impose_boundary(u2, bd);
  return u2;
}

}  // namespace onephase
