#include "onephase/mountainpass.hpp"

#include <atomic>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <thread>

#include "onephase/catenoid.hpp"
#include "onephase/numerics.hpp"

namespace onephase {

namespace {

double zbar_unit(int n, double x) {
  if (n == 3) return std::acosh(x);
  static thread_local int cached_n = 0;
  static thread_local std::unique_ptr<Catenoid> unit;
  if (cached_n != n) {
    unit = std::make_unique<Catenoid>(n, 1.0, Catenoid::Convention::centered);
    cached_n = n;
  }
  return unit->z_of_r(x);
}

}  // namespace

std::vector<std::pair<double, double>> sweep_curve(const AxiGrid& grid, double sigma,
                                                   int n_points) {
  const double a = grid.a;
  double d = grid.z_cat - sigma * zbar_unit(grid.n, a / sigma);
  std::vector<std::pair<double, double>> pts;
  pts.reserve(n_points + 2);
  double r_end = a + 3.0;
  double r_start = sigma;
  if (d >= -3.0) {
    pts.emplace_back(1e-9, d);  // flat cap through the neck height
  } else {
    // start where the curve reaches z = -3; deeper parts only see
    // saturated profile values
    double target = -3.0 - d;  // sigma * zbar_1(r/sigma) at the start
    if (grid.n == 3) {
      r_start = sigma * std::cosh(target / sigma);
    } else {
      Catenoid c(grid.n, sigma, Catenoid::Convention::centered);
      if (target / sigma >= Catenoid::unit_height(grid.n)) {
        r_start = r_end;  // curve never climbs back into range
      } else {
        double lo = sigma, hi = a + 3.0;
        while (c.z_of_r(hi) < target && hi < 1e9) hi *= 1.5;
        r_start = brent_root([&](double r) { return c.z_of_r(r) - target; }, lo, hi, 1e-10);
      }
    }
    r_start = std::min(r_start, a);
  }
  for (int t = 0; t <= n_points; ++t) {
    double r = r_start + (r_end - r_start) * t / n_points;
    double zz = (r <= sigma) ? d : d + sigma * zbar_unit(grid.n, r / sigma);
    pts.emplace_back(r, zz);
  }
  return pts;
}

namespace {

Field member_from_curve(const AxiGrid& grid, const HeteroclinicProfile& profile,
                        const std::vector<std::pair<double, double>>& curve, const Field& u1,
                        const Field& u2) {
  std::vector<double> cr(curve.size()), cz(curve.size());
  for (std::size_t t = 0; t < curve.size(); ++t) {
    cr[t] = curve[t].first;
    cz[t] = curve[t].second;
  }
  Field u(grid);
  for (int i = 0; i <= grid.Nr; ++i) {
    for (int j = 0; j <= grid.Nz; ++j) {
      double d = polyline_signed_distance(cr, cz, grid.r(i), grid.z(j));
      double raw = profile.value(d);
      u.at(i, j) = std::min(u2.at(i, j), std::max(u1.at(i, j), raw));
    }
  }
  return u;
}

}  // namespace

PathFamily build_path(const Field& u1, const Field& u2, int m, double k, const AxiGrid& grid,
                      const HeteroclinicProfile& profile) {
  if (m < 4) throw std::invalid_argument("build_path: need at least 4 segments");
  for (std::size_t t = 0; t < u1.v.size(); ++t)
    if (u2.v[t] < u1.v[t] - 1e-9)
      throw std::invalid_argument("build_path: endpoints not ordered (u1 <= u2)");

  // sigma schedule: geometric ramp up to the pass catenoid (sigma = k),
  // then on to the wall film; final 10% of s blends into u2
  double sigma_wall = 0.0;
  {
    // the larger root of sigma*zbar_1(a/sigma) = z_cat (same as the flow's)
    double lo = 0.5 * grid.a, hi = grid.a * (1.0 - 1e-9);
    for (int it = 0; it < 60; ++it) {
      double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
      auto zb = [&](double s_) { return s_ * zbar_unit(grid.n, grid.a / s_); };
      if (zb(m1) < zb(m2)) lo = m1;
      else hi = m2;
    }
    double peak = 0.5 * (lo + hi);
    auto zb = [&](double s_) { return s_ * zbar_unit(grid.n, grid.a / s_); };
    if (zb(peak) <= grid.z_cat)
      throw std::runtime_error("build_path: domain too small for the catenoid sweep");
    sigma_wall = brent_root([&](double s_) { return zb(s_) - grid.z_cat; }, peak,
                            grid.a * (1.0 - 1e-12), 1e-12);
  }

  PathFamily path;
  path.s.resize(m + 1);
  path.members.reserve(m + 1);
  const double s_blend = 0.9;
  int last_sweep = -1;
  for (int j = 0; j <= m; ++j) {
    double s = static_cast<double>(j) / m;
    path.s[j] = s;
    if (j == 0) {
      path.members.push_back(u1);
      continue;
    }
    if (j == m) {
      path.members.push_back(u2);
      continue;
    }
    if (s <= s_blend) {
      // sigma ramps quadratically up to the pass catenoid, then
      // geometrically on to the wall film
      double sigma;
      if (s <= 0.5) {
        double t = s / 0.5;
        sigma = std::max(k * t * t, 1e-3 * k);
      } else {
        double t = (s - 0.5) / (s_blend - 0.5);
        sigma = k * std::pow(sigma_wall / k, t);
      }
      path.members.push_back(member_from_curve(grid, profile, sweep_curve(grid, sigma), u1, u2));
      last_sweep = j;
    } else {
      const Field& base = path.members[last_sweep >= 0 ? last_sweep : j - 1];
      double t = (s - s_blend) / (1.0 - s_blend);
      Field b(grid);
      for (std::size_t q = 0; q < b.v.size(); ++q)
        b.v[q] = (1.0 - t) * base.v[q] + t * u2.v[q];
      path.members.push_back(std::move(b));
    }
  }

  // enforce the s-order exactly (running max); large corrections signal a
  // construction bug
  double worst = 0.0;
  for (int j = 1; j <= m; ++j) {
    for (std::size_t q = 0; q < path.members[j].v.size(); ++q) {
      double gap = path.members[j - 1].v[q] - path.members[j].v[q];
      if (gap > worst) worst = gap;
      if (gap > 0.0 && j < m) path.members[j].v[q] = path.members[j - 1].v[q];
    }
  }
  if (worst > 0.05)
    throw std::runtime_error("build_path: monotonicity in s violated beyond tolerance");
  if (path_order_gap(path) < -1e-12)
    throw std::runtime_error("build_path: ordering enforcement failed");
  return path;
}

std::vector<double> path_energies(const PathFamily& path) {
  std::vector<double> e(path.members.size());
  for (std::size_t j = 0; j < path.members.size(); ++j) e[j] = energy(path.members[j]);
  return e;
}

double path_order_gap(const PathFamily& path) {
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j + 1 < path.members.size(); ++j)
    for (std::size_t q = 0; q < path.members[j].v.size(); ++q)
      min_gap = std::min(min_gap, path.members[j + 1].v[q] - path.members[j].v[q]);
  return min_gap;
}

namespace {

void flow_members(std::vector<Field*> members, const BoundaryData& bd, double dt, Scheme scheme,
                  long n_steps) {
  if (members.empty() || n_steps <= 0) return;
  unsigned n_workers = std::min<unsigned>(std::thread::hardware_concurrency(),
                                          static_cast<unsigned>(members.size()));
  if (n_workers <= 1) {
    Field scratch(*members[0]->grid);
    for (Field* f : members) {
      for (long t = 0; t < n_steps; ++t) step_inplace(*f, scratch, bd, dt, scheme);
    }
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  for (unsigned w = 0; w < n_workers; ++w) {
    pool.emplace_back([&] {
      Field scratch(*members[0]->grid);
      for (;;) {
        std::size_t idx = next.fetch_add(1);
        if (idx >= members.size()) break;
        for (long t = 0; t < n_steps; ++t) step_inplace(*members[idx], scratch, bd, dt, scheme);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

void flow_path(PathFamily& path, const BoundaryData& bd, const FlowConfig& cfg, double T) {
  if (path.members.empty()) return;
  double dt = resolve_dt(*path.members[0].grid, cfg);
  long n_steps = static_cast<long>(std::ceil(T / dt));
  if (n_steps <= 0) return;
  std::vector<Field*> ptrs;
  for (auto& f : path.members) ptrs.push_back(&f);
  flow_members(std::move(ptrs), bd, dt, cfg.scheme, n_steps);
  double gap = path_order_gap(path);
  if (gap < -1e-10)
    throw std::runtime_error("flow_path: order violated (discrete comparison failure)");
}

MinimaxResult minimax(PathFamily path, const BoundaryData& bd, const MinimaxConfig& cfg) {
  if (path.members.size() < 3) throw std::invalid_argument("minimax: degenerate path");
  const AxiGrid& grid = *path.members[0].grid;
  double plateau = cfg.plateau_tol > 0.0 ? cfg.plateau_tol
                                         : 1e-6 * std::pow(grid.a, grid.n - 1);
  MinimaxResult res;
  res.e_u1 = energy(path.members.front());
  res.e_u2 = energy(path.members.back());

  double best = std::numeric_limits<double>::infinity();
  double prev_best = best;
  int stale_rounds = 0;
  for (int round = 0; round < cfg.rounds; ++round) {
    flow_path(path, bd, cfg.flow, cfg.round_time);
    auto e = path_energies(path);
    std::size_t jmax = 0;
    for (std::size_t j = 0; j < e.size(); ++j)
      if (e[j] > e[jmax]) jmax = j;
    if (e[jmax] < best) {
      best = e[jmax];
      res.argmax_s = path.s[jmax];
      res.pass_state = path.members[jmax];
      res.final_energies = e;
    }
    res.history.emplace_back(round, best);

    if (prev_best - best < plateau) {
      if (++stale_rounds >= 3) break;
    } else {
      stale_rounds = 0;
    }
    prev_best = best;

    if (round + 1 >= cfg.rounds) break;

    // refine: re-sample s with extra density near the argmax; interpolated
    // members are convex blends of their bracketing neighbors (stays in the
    // ordered class), then flowed briefly
    const std::size_t m = path.members.size() - 1;
    double s_star = path.s[jmax];
    std::vector<double> new_s(m + 1);
    {
      // inverse-CDF of a uniform + Gaussian bump mixture
      const int ng = 2048;
      std::vector<double> cdf(ng + 1, 0.0);
      auto dens = [&](double s) {
        double d = (s - s_star) / 0.06;
        return 1.0 + 8.0 * std::exp(-0.5 * d * d);
      };
      for (int t = 1; t <= ng; ++t) {
        double s0 = static_cast<double>(t - 1) / ng, s1 = static_cast<double>(t) / ng;
        cdf[t] = cdf[t - 1] + 0.5 * (dens(s0) + dens(s1)) / ng;
      }
      for (std::size_t j = 0; j <= m; ++j) {
        double target = cdf[ng] * static_cast<double>(j) / m;
        auto it = std::lower_bound(cdf.begin(), cdf.end(), target);
        std::size_t t = std::min<std::size_t>(ng, it - cdf.begin());
        new_s[j] = static_cast<double>(t) / ng;
      }
      new_s.front() = 0.0;
      new_s.back() = 1.0;
      // keep the current argmax member exactly
      std::size_t keep = 1;
      for (std::size_t j = 1; j + 1 <= m; ++j)
        if (std::abs(new_s[j] - s_star) < std::abs(new_s[keep] - s_star)) keep = j;
      new_s[keep] = s_star;
      for (std::size_t j = 1; j + 1 <= m; ++j)
        if (new_s[j] <= new_s[j - 1]) new_s[j] = std::nextafter(new_s[j - 1], 2.0);
    }

    std::vector<Field> new_members;
    new_members.reserve(m + 1);
    std::vector<Field*> fresh;
    for (std::size_t j = 0; j <= m; ++j) {
      double s = new_s[j];
      auto it = std::upper_bound(path.s.begin(), path.s.end(), s);
      std::size_t hi = std::clamp<std::size_t>(it - path.s.begin(), 1, m);
      std::size_t lo = hi - 1;
      double w = (s - path.s[lo]) / (path.s[hi] - path.s[lo]);
      w = std::clamp(w, 0.0, 1.0);
      if (w <= 1e-12 || w >= 1.0 - 1e-12) {
        new_members.push_back(path.members[w <= 1e-12 ? lo : hi]);
        continue;
      }
      Field f(grid);
      for (std::size_t q = 0; q < f.v.size(); ++q)
        f.v[q] = (1.0 - w) * path.members[lo].v[q] + w * path.members[hi].v[q];
      new_members.push_back(std::move(f));
      fresh.push_back(&new_members.back());
    }
    if (!fresh.empty() && cfg.refine_time > 0.0) {
      double dt = resolve_dt(grid, cfg.flow);
      long steps = static_cast<long>(std::ceil(cfg.refine_time / dt));
      flow_members(std::move(fresh), bd, dt, cfg.flow.scheme, steps);
    }
    path.s = std::move(new_s);
    path.members = std::move(new_members);
    // blends can transiently break exact ordering at machine precision
    for (std::size_t j = 1; j <= m; ++j)
      for (std::size_t q = 0; q < path.members[j].v.size(); ++q)
        path.members[j].v[q] = std::max(path.members[j].v[q], path.members[j - 1].v[q]);
  }

  res.c_star = best;
  if (!(res.c_star > std::max(res.e_u1, res.e_u2)))
    throw std::runtime_error("minimax: bracket violated, c* <= max E(u_i) (a too small?)");
  return res;
}

double pass_residual(const MinimaxResult& result) { return residual_norm2(result.pass_state); }

}  // namespace onephase
