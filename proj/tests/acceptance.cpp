// Acceptance suite: one line per criterion, exit nonzero on any failure.
// Run all by default; --only=1,2,5 restricts to a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <random>
#include <set>
#include <string>

#include "onephase/catenoid.hpp"
#include "onephase/flow.hpp"
#include "onephase/freeboundary.hpp"
#include "onephase/grid.hpp"
#include "onephase/mountainpass.hpp"
#include "onephase/numerics.hpp"
#include "onephase/potential.hpp"

using namespace onephase;

namespace {

int g_failures = 0;

void line(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("[acceptance] %2d %-34s %s  %s\n", id, name, pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- criteria 1-4: profile laws ----

void c1_profile_sandwich() {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  double worst = 0.0;
  for (double eps : {0.1, 0.05, 0.02}) {
    auto spec = PotentialSpec::make(eps);
    auto H = heteroclinic_build(spec);
    double hi = 1.0 + eps * std::log(eps);
    for (int i = 0; i <= 1000; ++i) {
      double x = hi * i / 1000.0;
      double v = H.value(x);
      worst = std::max({worst, v - x, (1.0 - eps) * x - v});
    }
  }
  ok = worst <= 1e-8;
  line(1, "profile sandwich (1-eps)x<=H<=x", ok, fmt("worst violation %.3g, %.2fs", worst, elapsed(t0)));
}

void c2_tail_law() {
  auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (double eps : {0.1, 0.05, 0.02}) {
    auto spec = PotentialSpec::make(eps);
    auto H = heteroclinic_build(spec);
    for (int i = 0; i <= 1000; ++i) {
      double t = H.t_eps() + 10.0 * eps * i / 1000.0;
      double tail = 1.0 - 0.5 * eps * std::exp((H.t_eps() - t) / eps);
      worst = std::max(worst, std::abs(H.value(t) - tail));
    }
  }
  line(2, "tail law H=1-(eps/2)e^{(t_eps-t)/eps}", worst <= 1e-8,
       fmt("worst dev %.3g, %.2fs", worst, elapsed(t0)));
}

void c3_subsolution() {
  auto spec = PotentialSpec::make(0.05);
  auto H = heteroclinic_build(spec, 8.0, 2001);
  auto w = subsolution_build(spec, H, 5.0);
  double worst = -1e9;
  for (int i = 0; i < 1000; ++i) {
    double x = w.x_min() + (w.x_max() - w.x_min()) * (i + 0.5) / 1000.0;
    worst = std::max(worst, subsolution_residual(w, x));
  }
  line(3, "subsolution -w''+F'(w)/2 <= 0", worst <= 1e-8, fmt("max residual %.3g", worst));
}

void c4_e_eps() {
  bool ok = true;
  std::string detail;
  for (double eps : {0.1, 0.05}) {
    auto spec = PotentialSpec::make(eps);
    auto H = heteroclinic_build(spec);
    double e2 = e_eps(spec);
    double e1 = heteroclinic_line_energy(H);
    double gap = std::abs(e1 - e2);
    double deficit = 4.0 - e2;
    bool here = gap <= 1e-8 && deficit > 0.0 && deficit < 4.0 * eps;
    ok = ok && here;
    detail += fmt("eps=%g: e=%.8f |routes|=%.2g deficit=%.3g; ", eps, e2, gap, deficit);
  }
  line(4, "e_eps identity and 0<4-e<4eps", ok, detail);
}

// ---- criteria 5-6: catenoid identities ----

void c5_catenoid_identity() {
  Catenoid cat(3, 1.0, Catenoid::Convention::centered);
  double closed = 0.5 * std::acosh(10.0) + 50.0 * std::sqrt(1.0 - 0.01);
  double got = cat.weighted_area(1.0, 10.0);
  bool area_ok = std::abs(got - closed) <= 1e-8 * closed;

  // minimality against 100 perturbed competitors with fixed endpoints
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double base = weighted_area(
      PlanarCurve::from_function([&](double r) { return cat.z_of_r(r); },
                                 [&](double r) { return cat.zprime(r); }, 1.05, 10.0),
      1.05, 10.0, 3);
  int bad = 0;
  for (int t = 0; t < 100; ++t) {
    double amp = 0.3 * U(rng), width = 0.5 + 2.0 * std::abs(U(rng)), c0 = 2.0 + 6.0 * std::abs(U(rng));
    auto bump = [=](double r) {
      double u = (r - c0) / width;
      double cut = (r - 1.05) * (10.0 - r) / 20.0;  // vanish at the endpoints
      return amp * std::exp(-u * u) * cut;
    };
    auto dbump = [=](double r) {
      double h = 1e-6;
      return (bump(r + h) - bump(r - h)) / (2 * h);
    };
    auto curve = PlanarCurve::from_function(
        [&](double r) { return cat.z_of_r(r) + bump(r); },
        [&](double r) { return cat.zprime(r) + dbump(r); }, 1.05, 10.0, 513);
    double pert = weighted_area(curve, 1.05, 10.0, 3);
    if (pert < base * (1.0 - 1e-10)) ++bad;
  }
  line(5, "catenoid closed-form area+minimality", area_ok && bad == 0,
       fmt("area %.9f vs %.9f, %d/100 decreased", got, closed, bad));
}

void c6_excess() {
  double delta = excess_delta(4);
  bool ok = std::abs(delta - 0.073223) <= 2e-6;
  std::string detail = fmt("delta=%.8f; ", delta);
  for (double c : {1.0, 2.0}) {
    Catenoid cat(4, c, Catenoid::Convention::centered);
    double lhs = cat.weighted_area(c, 1000.0) - std::pow(1000.0, 3) / 3.0;
    double rhs = 0.5 * delta * c * c * c;
    ok = ok && (lhs >= rhs);
    detail += fmt("c=%g: excess %.6f >= %.6f slack %.3g; ", c, lhs, rhs, lhs - rhs);
  }
  line(6, "excess lemma n=4 (a=10^3)", ok, detail);
}

// ---- criteria 7-13: flow, minimax and free boundary ----

struct Setup {
  PotentialSpec pot;
  HeteroclinicProfile profile;
  AxiGrid grid;
  BoundaryData omega;
};

Setup make_setup(int n, double a, double k, double eps, int Nr, int Nz) {
  Setup s;
  s.pot = PotentialSpec::make(eps);
  s.profile = heteroclinic_build(s.pot);
  s.grid = build_domain(n, a, k, eps, Nr, Nz, s.pot, s.profile);
  SubsolutionProfile w = subsolution_build(s.pot, s.profile, s.grid.z_cat - eps);
  s.omega = boundary_omega(s.grid, w);
  return s;
}

void c7_dissipation_comparison() {
  auto t0 = std::chrono::steady_clock::now();
  Setup s = make_setup(3, 8.0, 1.0, 0.1, 128, 96);
  FlowConfig cfg;
  cfg.check_every = 25;

  // energy non-increasing over 10^4 steps from the omega extension
  Field u = omega_extension(s.grid, s.omega);
  Field scratch(s.grid);
  double dt = resolve_dt(s.grid, cfg);
  double e0 = energy(u), prev = e0;
  bool mono = true;
  for (int m = 1; m <= 10000; ++m) {
    step_inplace(u, scratch, s.omega, dt, cfg.scheme);
    if (m % cfg.check_every == 0) {
      double e = energy(u);
      if (e > prev + 1e-10 * e0) mono = false;
      prev = e;
    }
  }

  // 20 random ordered pairs stay ordered
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double min_gap = 1e9;
  for (int t = 0; t < 20; ++t) {
    Field ua(s.grid), ub(s.grid);
    double c1 = 0.5 + 2.0 * U(rng), w1 = 0.5 + U(rng);
    double drop = 0.2 + 0.6 * U(rng);
    for (int i = 0; i <= s.grid.Nr; ++i) {
      for (int j = 0; j <= s.grid.Nz; ++j) {
        double z = s.grid.z(j), r = s.grid.r(i);
        double base = std::tanh((z - c1) / w1) * (1.0 - 0.3 * std::sin(r));
        ua.at(i, j) = std::clamp(base - drop * 0.2 * (1.0 + std::cos(z)), -1.0, 1.0);
        ub.at(i, j) = std::clamp(base, -1.0, 1.0);
      }
    }
    impose_boundary(ua, s.omega);
    impose_boundary(ub, s.omega);
    for (std::size_t q = 0; q < ua.v.size(); ++q) ub.v[q] = std::max(ua.v[q], ub.v[q]);
    min_gap = std::min(min_gap, check_ordering(ua, ub, s.omega, cfg, 40));
  }
  double secs = elapsed(t0);
  line(7, "dissipation + comparison", mono && min_gap >= -1e-12 && secs < 120.0,
       fmt("monotone=%d min_gap=%.2g, %.1fs", mono, min_gap, secs));
}

void c8_flat_energy() {
  Setup s = make_setup(3, 10.0, 1.0, 0.1, 256, 192);
  Field u(s.grid);
  double c = 0.5 * s.grid.b_eps;
  for (int i = 0; i <= s.grid.Nr; ++i)
    for (int j = 0; j <= s.grid.Nz; ++j) u.at(i, j) = s.profile.value(s.grid.z(j) - c);
  double e = energy(u);
  double target = 0.5 * s.grid.a * s.grid.a * e_eps(s.pot);
  double rel = std::abs(e - target) / target;
  line(8, "flat interface energy a^2 e/2", rel <= 0.02,
       fmt("E=%.4f vs %.4f rel=%.4f", e, target, rel));
}

struct MpassOut {
  MinimaxResult mr;
  Setup setup;
  double e_quad;
};

MpassOut run_mpass(double a, int rounds) {
  MpassOut out;
  out.setup = make_setup(3, a, 1.0, 0.05, 256, 192);
  out.e_quad = e_eps(out.setup.pot);
  FlowConfig fcfg;
  auto [u1, r1] = relax(omega_extension(out.setup.grid, out.setup.omega), out.setup.omega, fcfg);
  Field seed = build_u2_seed(u1, out.setup.omega, out.setup.profile);
  auto [u2, r2] = relax(seed, out.setup.omega, fcfg);
  PathFamily path = build_path(u1, u2, 33, 1.0, out.setup.grid, out.setup.profile);
  MinimaxConfig mc;
  mc.rounds = rounds;
  mc.flow = fcfg;
  out.mr = minimax(std::move(path), out.setup.omega, mc);
  return out;
}

// measured constant of the c* upper bound, frozen after the first
// certified run of this suite at a=16 (slack there was ~1.5)
constexpr double kCupperMeasured = 6.0;

void c9_to_13() {
  auto t0 = std::chrono::steady_clock::now();
  MpassOut m16 = run_mpass(16.0, 40);
  const MinimaxResult& mr = m16.mr;
  const Setup& s = m16.setup;
  double e = m16.e_quad;
  double base16 = 0.5 * 16.0 * 16.0 * e;

  // 9a: strict bracket
  bool strict = mr.c_star > std::max(mr.e_u1, mr.e_u2);
  // 9b: c* - a^2 e/2 in (0, (e/2) k^2 ln a + C]
  double excess = mr.c_star - base16;
  double upper = 0.5 * e * std::log(16.0) + kCupperMeasured;
  bool in_bracket = excess > 0.0 && excess <= upper;

  // 9c: growth in a
  MpassOut m32 = run_mpass(32.0, 40);
  double diff = m32.mr.c_star - mr.c_star;
  double expect = 0.5 * e * (32.0 * 32.0 - 16.0 * 16.0);
  double lnterm = 0.5 * e * std::log(2.0) + kCupperMeasured;
  bool growth = diff >= 0.95 * expect && diff <= 1.05 * expect + lnterm;
  double secs = elapsed(t0);
  line(9, "mountain-pass geometry (a=16,32)", strict && in_bracket && growth && secs < 1800.0,
       fmt("c*(16)=%.3f excess=%.3f<=%.3f c*(32)-c*(16)=%.2f vs %.2f, %.0fs", mr.c_star, excess,
           upper, diff, expect, secs));

  // 10: coarea lower bound on the pass state
  {
    const Field& u = mr.pass_state;
    double E = energy(u);
    auto sqf = [&](double sv) { return std::sqrt(std::max(feps_eval(sv, s.pot), 0.0)); };
    const int ns = 60;
    double coarea = 0.0;
    for (int t = 0; t < ns; ++t) {
      double sv = -1.0 + 2.0 * (t + 0.5) / ns;
      coarea += level_area(u, sv) * sqf(sv) * (2.0 / ns);
    }
    // positive-phase half (s in (0,1)) alone also lower-bounds E; we assert
    // the full two-sided version with the 1% slack
    bool ok = E >= coarea * (1.0 - 0.01) - 0.01 * E;
    line(10, "coarea bound E >= 2 int A sqrt(F)", ok,
         fmt("E=%.3f coarea=%.3f ratio=%.4f", E, coarea, coarea > 0 ? E / coarea : 0.0));
  }

  // 11: asymptote fit on the pass state
  {
    BoundaryCurve f = extract(mr.pass_state, Side::minus, 0.5 * 0.05, s.profile);
    AsymptoticFit fit = fit_asymptote(f, 3, 0.3 * 16.0, 0.8 * 16.0);
    bool k_ok = std::abs(fit.k_hat - 1.0) <= 0.15;
    double R = 3.2;
    AsymptoticFit f1 = fit_asymptote(f, 3, R, 2 * R);
    AsymptoticFit f2 = fit_asymptote(f, 3, 2 * R, 4 * R);
    double ratio = f2.rms / std::max(f1.rms, 1e-300);
    bool rms_ok = ratio >= 0.35 && ratio <= 0.65;
    line(11, "free-boundary asymptote fit", k_ok && rms_ok,
         fmt("k_hat=%.4f rms(%g..%g)=%.2g rms(%g..%g)=%.2g ratio=%.3f", fit.k_hat, R, 2 * R,
             f1.rms, 2 * R, 4 * R, f2.rms, ratio));
  }

  // 12: blow-up one-phase checks
  {
    BlowupResult b = blowup(mr.pass_state, 3.0, s.profile);
    ShapeReport shape = theorem_shape_checks(b, 3);
    double htol = 2.0 * std::max(s.grid.hr, s.grid.hz) / b.rho_k;
    double sgn_tol = 4.0 * std::max(s.grid.hr, s.grid.hz);
    bool ok = b.grad_mean >= 0.85 && b.grad_mean <= 1.15 && b.max_interior_grad <= 1.05 &&
              shape.min_dz_psi >= -sgn_tol && shape.max_dr_psi <= sgn_tol &&
              std::abs(shape.g_at_1) <= htol;
    line(12, "blow-up one-phase checks", ok,
         fmt("grad_mean=%.3f max|grad u|=%.3f min_dz=%.2g max_dr=%.2g g(1)=%.3g (tol %.3g)",
             b.grad_mean, b.max_interior_grad, shape.min_dz_psi, shape.max_dr_psi, shape.g_at_1,
             htol));
  }

  // 13: mean curvature sign of the extracted minus boundary
  {
    BoundaryCurve f = extract(mr.pass_state, Side::minus, 0.5 * 0.05, s.profile);
    auto H = mean_curvature(PlanarCurve::from_samples(f.r, f.z), 3);
    double hmin = *std::min_element(H.begin(), H.end());
    line(13, "mean curvature >= -0.05", hmin >= -0.05, fmt("min H = %.4f", hmin));
  }
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    if (std::strncmp(argv[i], "--only=", 7) == 0) {
      const char* p = argv[i] + 7;
      while (*p) {
        only.insert(std::atoi(p));
        while (*p && *p != ',') ++p;
        if (*p == ',') ++p;
      }
    }
  }
  auto want = [&](int id) { return only.empty() || only.count(id) > 0; };

  try {
    if (want(1)) c1_profile_sandwich();
    if (want(2)) c2_tail_law();
    if (want(3)) c3_subsolution();
    if (want(4)) c4_e_eps();
    if (want(5)) c5_catenoid_identity();
    if (want(6)) c6_excess();
    if (want(7)) c7_dissipation_comparison();
    if (want(8)) c8_flat_energy();
    if (want(9) || want(10) || want(11) || want(12) || want(13)) {
      if (only.empty() || want(9) || want(10) || want(11) || want(12) || want(13)) c9_to_13();
    }
  } catch (const std::exception& e) {
    std::printf("[acceptance] aborted: %s\n", e.what());
    return 1;
  }
  std::printf("[acceptance] %s (%d failure%s)\n", g_failures == 0 ? "ALL PASS" : "FAILURES",
              g_failures, g_failures == 1 ? "" : "s");
  return g_failures == 0 ? 0 : 1;
}
