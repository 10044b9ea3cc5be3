#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "onephase/numerics.hpp"
#include "onephase/potential.hpp"

using namespace onephase;

TEST_CASE("Fbar closed forms and bridge") {
  CHECK(fbar_eval(0.25) == Catch::Approx(0.0625).epsilon(1e-14));
  CHECK(fbar_eval(0.0) == 0.0);
  CHECK(fbar_eval(2.0) == Catch::Approx(1.0 - std::exp(-2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(fbar_eval(-0.1), std::domain_error);

  // monotone on [0, 4], concave past 3/4 (dense sampling)
  double prev = fbar_eval(0.0);
  for (int i = 1; i <= 4000; ++i) {
    double s = 4.0 * i / 4000.0;
    double v = fbar_eval(s);
    CHECK(v > prev);
    prev = v;
  }
  for (int i = 0; i <= 1000; ++i) {
    double s = 0.7501 + (4.0 - 0.7501) * i / 1000.0;
    double h = 1e-5;
    double d2 = (fbar_eval(s + h) - 2 * fbar_eval(s) + fbar_eval(s - h)) / (h * h);
    CHECK(d2 < 1e-4);
  }
}

TEST_CASE("rho cutoff symmetry") {
  for (int i = 0; i <= 100; ++i) {
    double s = -1.0 + 2.0 * i / 100.0;
    CHECK(rho_eval(s) + rho_eval(-s) == Catch::Approx(1.0).margin(1e-15));
    CHECK(rho_eval(s) >= 0.0);
  }
  CHECK(rho_eval(-0.6) == 1.0);
  CHECK(rho_eval(0.6) == 0.0);
}

TEST_CASE("F_eps values and symmetry") {
  auto spec = PotentialSpec::make(0.1);
  CHECK(feps_eval(1.0, spec) == Catch::Approx(0.0).margin(1e-15));
  CHECK(feps_eval(-1.0, spec) == Catch::Approx(0.0).margin(1e-15));
  // F_eps(1 - eps/2) = 1/4 (tail regime F = eps^-2 (1-s)^2)
  CHECK(feps_eval(1.0 - 0.05, spec) == Catch::Approx(0.25).epsilon(1e-12));
  // F_eps(0) = Fbar(1/eps) = 1 - e^{-10}
  CHECK(feps_eval(0.0, spec) == Catch::Approx(1.0 - std::exp(-10.0)).epsilon(1e-14));
  CHECK_THROWS_AS(feps_eval(1.00001, spec), std::domain_error);

  std::mt19937 rng(42);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    double s = U(rng);
    CHECK(std::abs(feps_eval(s, spec) - feps_eval(-s, spec)) <= 1e-14);
    CHECK(feps_eval(s, spec) >= 0.0);
    CHECK(feps_eval(s, spec) <= 1.0 + 1e-14);
    CHECK(std::abs(feps_deriv(s, spec) + feps_deriv(-s, spec)) <= 1e-12);
  }
}

TEST_CASE("F_eps derivative consistency") {
  auto spec = PotentialSpec::make(0.1);
  const double h = 1e-5;
  for (int i = 0; i <= 200; ++i) {
    double s = -0.999 + 1.998 * i / 200.0;
    if (std::abs(s) > 1.0 - 2 * h) continue;
    double fd = (feps_eval(s + h, spec) - feps_eval(s - h, spec)) / (2 * h);
    CHECK(feps_deriv(s, spec) == Catch::Approx(fd).margin(1e-6));
  }
}

TEST_CASE("heteroclinic profile: pinning, first integral, ODE") {
  auto spec = PotentialSpec::make(0.1);
  auto H = heteroclinic_build(spec, 4.0, 1001);

  CHECK(H.value(0.0) == Catch::Approx(0.0).margin(1e-14));
  CHECK(H.value(H.t_eps()) == Catch::Approx(1.0 - 0.05).epsilon(1e-10));
  CHECK(H.deriv(H.t_eps()) == Catch::Approx(0.5).epsilon(1e-9));
  // |H''(t_eps)| = 1/(2 eps); the sign is negative there (concave approach
  // to +1, forced by the first integral: H'' = F'(H)/2 and F' < 0 past 0)
  CHECK(H.second(H.t_eps()) == Catch::Approx(-1.0 / (2.0 * 0.1)).epsilon(1e-9));

  // oddness, monotonicity, |H|<1, |H'|<=1
  double prev = -2.0;
  for (const auto& s : H.samples()) {
    CHECK(std::abs(H.value(-s.x) + s.h) <= 1e-12);
    CHECK(s.h > prev);
    prev = s.h;
    CHECK(std::abs(s.h) < 1.0);
    CHECK(std::abs(s.hp) <= 1.0 + 1e-12);
  }

  // first integral against a finite-difference slope of the table
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < H.samples().size(); ++i) {
    const auto& a = H.samples()[i - 1];
    const auto& b = H.samples()[i + 1];
    double slope = (b.h - a.h) / (b.x - a.x);
    double f = feps_eval(H.samples()[i].h, spec);
    // slope^2 vs F at the midpoint, up to the centered-difference error
    worst = std::max(worst, std::abs(slope * slope - f));
  }
  CHECK(worst < 5e-3);  // O(h^2) of the sample grid, |H'''| ~ 1/eps^2
  // exact route: stored hp is sqrt(F(H)) by the first integral
  for (const auto& s : H.samples())
    CHECK(std::abs(s.hp * s.hp - feps_eval(s.h, spec)) <= 1e-12);

  // ODE residual H'' = F'(H)/2 by finite differences of value()
  for (int i = 0; i <= 100; ++i) {
    double x = -2.0 + 4.0 * i / 100.0;
    double h = 1e-4;
    double d2 = (H.value(x + h) - 2 * H.value(x) + H.value(x - h)) / (h * h);
    CHECK(d2 == Catch::Approx(0.5 * feps_deriv(H.value(x), spec)).margin(5e-4));
  }
}

TEST_CASE("profile sandwich and tail laws") {
  for (double eps : {0.1, 0.05, 0.02}) {
    auto spec = PotentialSpec::make(eps);
    auto H = heteroclinic_build(spec);
    double hi = 1.0 + eps * std::log(eps);
    for (int i = 0; i <= 1000; ++i) {
      double x = hi * i / 1000.0;
      double v = H.value(x);
      CHECK(v <= x + 1e-8);
      CHECK(v >= (1.0 - eps) * x - 1e-8);
    }
    for (int i = 0; i <= 1000; ++i) {
      double t = H.t_eps() + 10.0 * eps * i / 1000.0;
      double tail = 1.0 - 0.5 * eps * std::exp((H.t_eps() - t) / eps);
      CHECK(std::abs(H.value(t) - tail) <= 1e-8);
    }
    CHECK(H.t_eps() >= 1.0 + eps * std::log(eps));
    CHECK(H.t_eps() <= 1.0);
  }
}

TEST_CASE("sup-norm convergence to the clipped profile") {
  double prev_sup = 1e9;
  for (double eps : {0.1, 0.05, 0.02}) {
    auto spec = PotentialSpec::make(eps);
    auto H = heteroclinic_build(spec);
    double sup = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      double x = -4.0 + 8.0 * i / 2000.0;
      sup = std::max(sup, std::abs(H.value(x) - limit_profile(x)));
    }
    CHECK(sup < prev_sup);
    prev_sup = sup;
  }
  CHECK(prev_sup < 0.05);
}

TEST_CASE("delta_eps root") {
  auto spec = PotentialSpec::make(0.1);
  auto H = heteroclinic_build(spec);
  double d = delta_eps(spec, H);

  // residual of the displayed cubic at the root
  double eps = 0.1;
  double m = 1.0 - H.value(2.0);
  double resid = H.value(2.0) + H.deriv(2.0) * d + 0.5 * H.second(2.0) * d * d +
                 m / std::pow(eps, 4) * d * d * d - 1.0;
  CHECK(std::abs(resid) <= 1e-12);

  // independent oracle: plain bisection on the tail-scaled cubic built from
  // a trapezoid quadrature of the first integral (different route)
  double t_eps = 0.0;
  {
    const int n = 200000;
    double top = 1.0 - 0.5 * eps, acc = 0.0;
    for (int i = 0; i < n; ++i) {
      double h0 = top * i / n, h1 = top * (i + 1) / n;
      acc += 0.5 * (1.0 / std::sqrt(feps_eval(h0, spec)) + 1.0 / std::sqrt(feps_eval(h1, spec))) *
             (h1 - h0);
    }
    t_eps = acc;
  }
  CHECK(t_eps == Catch::Approx(H.t_eps()).epsilon(1e-8));
  auto scaled = [&](double x) {
    return x / eps - 0.5 * x * x / (eps * eps) + x * x * x / std::pow(eps, 4) - 1.0;
  };
  double lo = 0.0, hi = eps;
  for (int it = 0; it < 100; ++it) {
    double mid = 0.5 * (lo + hi);
    (scaled(mid) > 0.0 ? hi : lo) = mid;
  }
  CHECK(d == Catch::Approx(0.5 * (lo + hi)).epsilon(1e-10));
  // regression constant frozen from the oracle
  CHECK(d == Catch::Approx(0.040729340593).epsilon(1e-9));

  // scaling: delta/eps^{4/3} bounded above and below
  for (double e2 : {0.1, 0.05, 0.02}) {
    auto sp = PotentialSpec::make(e2);
    auto Hp = heteroclinic_build(sp);
    double ratio = delta_eps(sp, Hp) / std::pow(e2, 4.0 / 3.0);
    CHECK(ratio > 0.5);
    CHECK(ratio < 1.0);
  }
}

TEST_CASE("subsolution profile") {
  const double eps = 0.05, l = 5.0;
  auto spec = PotentialSpec::make(eps);
  auto H = heteroclinic_build(spec, 8.0, 2001);
  auto w = subsolution_build(spec, H, l);

  CHECK(w.deriv(w.x_min()) == Catch::Approx(0.0).margin(1e-12));
  CHECK(w.value(w.x_max()) == Catch::Approx(1.0).margin(1e-10));

  // w == H on [-l, 2]
  for (int i = 0; i <= 100; ++i) {
    double x = -l + (2.0 + l) * i / 100.0;
    CHECK(w.value(x) == Catch::Approx(H.value(x)).margin(1e-12));
  }

  // subsolution inequality and monotonicity at 1000 points
  for (int i = 0; i < 1000; ++i) {
    double x = w.x_min() + (w.x_max() - w.x_min()) * (i + 0.5) / 1000.0;
    CHECK(subsolution_residual(w, x) <= 1e-8);
    CHECK(w.deriv(x) >= -1e-12);
  }
  CHECK_THROWS_AS(w.value(w.x_max() + 0.1), std::domain_error);
  CHECK_THROWS_AS(subsolution_build(spec, H, 1.5), std::invalid_argument);
}

TEST_CASE("e_eps identity and limit") {
  double prev = 0.0;
  for (double eps : {0.1, 0.05, 0.01}) {
    auto spec = PotentialSpec::make(eps);
    double e = e_eps(spec);
    CHECK(e > prev);  // increasing toward 4
    prev = e;
    CHECK(4.0 - e > 0.0);
    if (eps <= 0.1) CHECK(4.0 - e < 4.0 * eps);
  }
  auto spec = PotentialSpec::make(0.05);
  auto H = heteroclinic_build(spec);
  CHECK(std::abs(heteroclinic_line_energy(H) - e_eps(spec)) <= 1e-8);
}
