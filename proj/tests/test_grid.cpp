#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <random>

#include "onephase/catenoid.hpp"
#include "onephase/grid.hpp"
#include "onephase/numerics.hpp"

using namespace onephase;

namespace {

struct Ctx {
  PotentialSpec pot;
  HeteroclinicProfile profile;

  explicit Ctx(double eps) : pot(PotentialSpec::make(eps)), profile(heteroclinic_build(pot)) {}
  AxiGrid grid(int n, double a, double k, int Nr, int Nz) const {
    return build_domain(n, a, k, pot.eps, Nr, Nz, pot, profile);
  }
  BoundaryData omega(const AxiGrid& g) const {
    auto w = subsolution_build(pot, profile, g.z_cat - pot.eps);
    return boundary_omega(g, w);
  }
};

}  // namespace

TEST_CASE("domain construction") {
  Ctx ctx(0.05);
  auto g = ctx.grid(3, 10.0, 1.0, 64, 64);
  // b_eps = arccosh(10) + 2 + delta; arccosh(10) = ln(10+sqrt(99))
  CHECK(g.z_cat == Catch::Approx(2.9932228461263808).epsilon(1e-12));
  CHECK(g.b_eps == Catch::Approx(2.9932228461263808 + 2.0 + g.delta).epsilon(1e-12));
  CHECK(g.delta == Catch::Approx(delta_eps(ctx.pot, ctx.profile)).epsilon(1e-14));
  // monotone in a
  auto g2 = ctx.grid(3, 12.0, 1.0, 64, 64);
  CHECK(g2.b_eps > g.b_eps);
  // nodes hit r=0 and r=a exactly
  CHECK(g.r(0) == 0.0);
  CHECK(g.r(g.Nr) == Catch::Approx(10.0).margin(1e-13));
  CHECK_THROWS_AS(ctx.grid(3, 1.9, 1.0, 64, 64), std::domain_error);
  CHECK_THROWS_AS(ctx.grid(3, 10.0, 1.0, 8, 64), std::domain_error);

  // n=4 uses the asymptotic catenoid height (k > 1 in that regime)
  auto g4 = ctx.grid(4, 10.0, 2.0, 64, 64);
  Catenoid cat(4, 2.0, Catenoid::Convention::asymptotic);
  CHECK(g4.z_cat == Catch::Approx(cat.z_of_r(10.0)).epsilon(1e-12));
}

TEST_CASE("boundary omega") {
  Ctx ctx(0.05);
  auto g = ctx.grid(3, 10.0, 1.0, 64, 128);
  auto bd = ctx.omega(g);
  CHECK(bd.wall.size() == static_cast<std::size_t>(g.Nz + 1));
  // omega = 1 on the top, w(-z_cat) at the bottom, 0 at z = z_cat
  CHECK(bd.wall.back() == Catch::Approx(1.0).margin(1e-12));
  CHECK(bd.top.front() == bd.wall.back());
  auto w = subsolution_build(ctx.pot, ctx.profile, g.z_cat - ctx.pot.eps);
  CHECK(bd.wall.front() == Catch::Approx(w.value(-g.z_cat)).margin(1e-12));
  // the nodal height: interpolate the wall profile at z = z_cat
  int j = static_cast<int>(g.z_cat / g.hz);
  double t = (g.z_cat - g.z(j)) / g.hz;
  double omega_at_zcat = (1 - t) * bd.wall[j] + t * bd.wall[j + 1];
  CHECK(std::abs(omega_at_zcat) < 1e-3);
  // nondecreasing in z
  for (int q = 0; q + 1 <= g.Nz; ++q) CHECK(bd.wall[q + 1] >= bd.wall[q] - 1e-13);
  // mismatched l rejected
  auto wbad = subsolution_build(ctx.pot, ctx.profile, g.z_cat - 0.3);
  CHECK_THROWS_AS(boundary_omega(g, wbad), std::invalid_argument);
}

TEST_CASE("operator on constant and profile fields") {
  Ctx ctx(0.1);
  auto g = ctx.grid(3, 6.0, 1.0, 48, 64);

  // constant field: operator = F'(c)/2 everywhere inside
  for (double c : {-0.4, 0.0, 0.7}) {
    Field u(g, c);
    Field Lu = apply_operator(u);
    double want = 0.5 * feps_deriv(c, g.pot);
    for (int i = 0; i < g.Nr; ++i)
      for (int j = 0; j < g.Nz; ++j)
        CHECK(Lu.at(i, j) == Catch::Approx(want).margin(1e-13));
  }

  // H(z - c) sampled: interior residual O(h^2) under refinement (Richardson);
  // needs hz well below eps before the asymptotic regime shows
  double resid_coarse = 0.0, resid_fine = 0.0;
  for (int pass = 0; pass < 2; ++pass) {
    auto gg = ctx.grid(3, 6.0, 1.0, 32, pass == 0 ? 256 : 512);
    Field u(gg);
    double c = 0.45 * gg.b_eps;
    for (int i = 0; i <= gg.Nr; ++i)
      for (int j = 0; j <= gg.Nz; ++j) u.at(i, j) = ctx.profile.value(gg.z(j) - c);
    Field Lu = apply_operator(u);
    double worst = 0.0;
    for (int i = 0; i < gg.Nr; ++i)
      for (int j = 1; j < gg.Nz; ++j) worst = std::max(worst, std::abs(Lu.at(i, j)));
    (pass == 0 ? resid_coarse : resid_fine) = worst;
  }
  CHECK(resid_fine < resid_coarse / 2.5);  // ~factor 4 expected

  // omega extension: residual <= O(h^2) where the subsolution inequality is
  // active (z-only field, radial terms vanish identically)
  {
    auto gg = ctx.grid(3, 6.0, 1.0, 32, 256);
    auto bd = ctx.omega(gg);
    Field om = omega_extension(gg, bd);
    Field Lom = apply_operator(om);
    double worst = -1e9;
    for (int i = 0; i < gg.Nr; ++i)
      for (int j = 1; j < gg.Nz; ++j) worst = std::max(worst, Lom.at(i, j));
    // h^2 |w''''| with |w''''| ~ 1/eps^3 spikes across the bridge region
    CHECK(worst <= 0.15);
  }
}

TEST_CASE("discrete operator is self-adjoint in the weighted product") {
  Ctx ctx(0.1);
  for (int n : {3, 5}) {
    auto g = ctx.grid(n, 6.0, n == 3 ? 1.0 : 1.4, 32, 40);
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    Field u(g), v(g);
    for (int i = 0; i <= g.Nr; ++i)
      for (int j = 0; j <= g.Nz; ++j) {
        u.at(i, j) = U(rng);
        v.at(i, j) = U(rng);
      }
    // vanish on the Dirichlet rows
    for (int j = 0; j <= g.Nz; ++j) u.at(g.Nr, j) = v.at(g.Nr, j) = 0.0;
    for (int i = 0; i <= g.Nr; ++i) u.at(i, g.Nz) = v.at(i, g.Nz) = 0.0;
    Field Lu = apply_neg_laplacian(u), Lv = apply_neg_laplacian(v);
    double a = weighted_inner(Lu, v), b = weighted_inner(u, Lv);
    CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("energy: exact zero, flat interface, refinement") {
  Ctx ctx(0.1);
  auto g = ctx.grid(3, 10.0, 1.0, 64, 64);
  Field ones(g, 1.0);
  CHECK(energy(ones) == 0.0);

  // flat interface energy approaches a^2 e / 2
  double e = e_eps(ctx.pot);
  double err_coarse = 0, err_fine = 0;
  for (int pass = 0; pass < 2; ++pass) {
    auto gg = ctx.grid(3, 10.0, 1.0, pass == 0 ? 128 : 256, pass == 0 ? 96 : 192);
    Field u(gg);
    double c = 0.5 * gg.b_eps;
    for (int i = 0; i <= gg.Nr; ++i)
      for (int j = 0; j <= gg.Nz; ++j) u.at(i, j) = ctx.profile.value(gg.z(j) - c);
    double E = energy(u);
    double target = 0.5 * gg.a * gg.a * e;
    (pass == 0 ? err_coarse : err_fine) = std::abs(E - target) / target;
  }
  CHECK(err_fine <= 0.02);
  CHECK(err_fine <= err_coarse + 1e-12);
}

TEST_CASE("level area: discs, cylinders, catenoid cross-check") {
  Ctx ctx(0.1);
  auto g = ctx.grid(3, 10.0, 1.0, 128, 128);

  // horizontal interface: A(s) = a^2/2 for every s in range
  {
    Field u(g);
    double c = 0.5 * g.b_eps;
    for (int i = 0; i <= g.Nr; ++i)
      for (int j = 0; j <= g.Nz; ++j) u.at(i, j) = ctx.profile.value(g.z(j) - c);
    for (double s : {-0.5, 0.0, 0.5})
      CHECK(level_area(u, s) == Catch::Approx(50.0).epsilon(1e-6));
  }

  // vertical interface at radius c_s: A(s) = c_s * b_eps
  {
    Field u(g);
    double c = 4.0;
    for (int i = 0; i <= g.Nr; ++i)
      for (int j = 0; j <= g.Nz; ++j) u.at(i, j) = -ctx.profile.value(g.r(i) - c);
    double s = 0.25;
    // level radius where -H(r-c) = s
    double rs = c - ctx.profile.x_of_level(s) * 1.0;
    // H is odd: -H(r-c)=s at r = c - x(s)... x_of_level returns x with H=s
    rs = c - ctx.profile.x_of_level(s);
    CHECK(level_area(u, s) == Catch::Approx(rs * g.b_eps).epsilon(1e-3));
    // monotone in s for the vertical interface (larger s = smaller radius)
    CHECK(level_area(u, -0.5) > level_area(u, 0.0));
    CHECK(level_area(u, 0.0) > level_area(u, 0.5));
  }

  // catenoid-shaped level set matches the weighted curve area within 1%
  {
    auto gg = ctx.grid(3, 10.0, 1.0, 256, 256);
    Catenoid cat(3, 2.5);
    std::vector<double> cr, cz;
    for (int t = 0; t <= 2000; ++t) {
      double r = 2.5 + (14.0 - 2.5) * t / 2000.0;
      cr.push_back(r);
      cz.push_back(cat.z_of_r(r));
    }
    Field u(gg);
    for (int i = 0; i <= gg.Nr; ++i)
      for (int j = 0; j <= gg.Nz; ++j)
        u.at(i, j) = ctx.profile.value(polyline_signed_distance(cr, cz, gg.r(i), gg.z(j)));
    double A = level_area(u, 0.0);
    // the zero level is the catenoid clipped to the box
    double r_top = cat.r_of_z(gg.b_eps);
    double expect = cat.weighted_area(2.5, std::min(10.0, r_top));
    CHECK(A == Catch::Approx(expect).epsilon(0.01));
  }
}

TEST_CASE("coarea lower bound for a monotone synthetic field") {
  Ctx ctx(0.1);
  auto g = ctx.grid(3, 8.0, 1.0, 96, 96);
  Field u(g);
  double c = 0.5 * g.b_eps;
  for (int i = 0; i <= g.Nr; ++i)
    for (int j = 0; j <= g.Nz; ++j)
      u.at(i, j) = ctx.profile.value(g.z(j) - c + 0.1 * (1.0 - g.r(i) / 8.0));
  double E = energy(u);
  const int ns = 40;
  double coarea = 0.0;
  for (int t = 0; t < ns; ++t) {
    double s = -1.0 + 2.0 * (t + 0.5) / ns;
    coarea += level_area(u, s) * std::sqrt(std::max(feps_eval(s, g.pot), 0.0)) * (2.0 / ns);
  }
  CHECK(E >= coarea * 0.995);
}

TEST_CASE("field io round trip") {
  Ctx ctx(0.1);
  auto g = ctx.grid(3, 6.0, 1.0, 32, 32);
  Field u(g);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (auto& x : u.v) x = U(rng);
  std::string path = "test_field_dump.bin";
  write_field(u, path);
  Field v = read_field(g, path);
  CHECK(v.v == u.v);
  AxiGrid g2 = read_field_header(path, ctx.pot, ctx.profile);
  CHECK(g2.Nr == g.Nr);
  CHECK(g2.b_eps == Catch::Approx(g.b_eps).epsilon(1e-14));
  std::remove(path.c_str());
}
