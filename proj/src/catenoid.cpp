#include "onephase/catenoid.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "onephase/numerics.hpp"

namespace onephase {

namespace {

// z of the unit (neck 1) profile: exact arccosh for n = 3, otherwise the
// parametrized quadrature z = int_0^s cosh((n-2)t)^{(3-n)/(n-2)} dt with
// cosh((n-2)s) = r^{n-2} (removes the sqrt singularity at the neck).
double unit_z_of_r(int n, double r) {
  if (r < 1.0) {
    if (r > 1.0 - 1e-12) r = 1.0;
    else throw std::domain_error("catenoid: r below neck radius");
  }
  if (n == 3) return std::acosh(r);
  double m = static_cast<double>(n - 2);
  double s = std::acosh(std::pow(r, m)) / m;
  auto f = [&](double t) { return std::pow(std::cosh(m * t), (3.0 - n) / m); };
  return integrate(f, 0.0, s, 1e-13);
}

double unit_zprime(int n, double r) {
  double q = std::pow(r, 2 * (n - 2)) - 1.0;
  if (q <= 0.0) throw std::domain_error("catenoid: slope undefined at or below the neck");
  return 1.0 / std::sqrt(q);
}

}  // namespace

Catenoid::Catenoid(int dim, double scale, Convention conv)
    : dim_(dim), scale_(scale), conv_(conv) {
  if (dim < 3) throw std::domain_error("Catenoid: dimension must be >= 3");
  if (!(scale > 0.0)) throw std::domain_error("Catenoid: scale must be positive");
  if (conv == Convention::asymptotic) {
    if (dim == 3)
      throw std::domain_error("Catenoid: asymptotic convention needs n > 3 (log growth at n=3)");
    alpha_ = scale / unit_height(dim);
  } else {
    alpha_ = scale;
  }
}

double Catenoid::asymptote() const {
  if (dim_ == 3) throw std::domain_error("Catenoid: no height limit at n = 3");
  return alpha_ * unit_height(dim_);
}

double Catenoid::z_of_r(double r) const { return alpha_ * unit_z_of_r(dim_, r / alpha_); }

double Catenoid::r_of_z(double z) const {
  if (z < 0.0) throw std::domain_error("catenoid: r_of_z wants the z >= 0 branch");
  if (z == 0.0) return alpha_;
  if (dim_ == 3) return alpha_ * std::cosh(z / alpha_);
  double zu = z / alpha_;
  if (zu >= unit_height(dim_))
    throw std::domain_error("catenoid: z beyond the height limit");
  // bracket in r and invert the monotone z(r)
  double lo = 1.0, hi = 2.0;
  while (unit_z_of_r(dim_, hi) < zu) hi *= 2.0;
  double ru = brent_root([&](double r) { return unit_z_of_r(dim_, r) - zu; }, lo, hi, 1e-15);
  return alpha_ * ru;
}

double Catenoid::zprime(double r) const { return unit_zprime(dim_, r / alpha_); }

double Catenoid::zsecond(double r) const {
  double x = r / alpha_;
  double q = std::pow(x, 2 * (dim_ - 2)) - 1.0;
  if (q <= 0.0) throw std::domain_error("catenoid: curvature undefined at or below the neck");
  return -(dim_ - 2) * std::pow(x, 2 * dim_ - 5) * std::pow(q, -1.5) / alpha_;
}

double Catenoid::area_excess(double r) const {
  const int n = dim_;
  double x = r / alpha_;
  if (x < 1.0 - 1e-12) throw std::domain_error("catenoid: area below neck");
  double m = static_cast<double>(n - 2);
  // int sqrt(1+z'^2) r^{n-2} dr - r^{n-1}/(n-1)
  //   = alpha^{n-1} [ -1/(n-1) + (1/(n-2)) int_0^Y e^{-y} cosh(y)^{1/(n-2)} dy ],
  // Y = (n-2) s(r); the integrand decays like e^{-y(n-3)/(n-2)}.
  double Y = std::acosh(std::pow(std::max(x, 1.0), m));
  auto f = [&](double y) { return std::exp(-y) * std::pow(std::cosh(y), 1.0 / m); };
  double I = integrate(f, 0.0, Y, 1e-13);
  return std::pow(alpha_, n - 1) * (-1.0 / (n - 1) + I / m);
}

double Catenoid::weighted_area(double r1, double r2) const {
  const int n = dim_;
  double disc = (std::pow(r2, n - 1) - std::pow(r1, n - 1)) / (n - 1);
  return disc + area_excess(r2) - area_excess(r1);
}

double Catenoid::unit_height(int dim) {
  if (dim <= 3) throw std::domain_error("unit_height: needs n > 3");
  double m = static_cast<double>(dim - 2);
  auto f = [&](double t) { return std::pow(std::cosh(m * t), (3.0 - dim) / m); };
  // integrand ~ 2^{(dim-3)/m} e^{-(dim-3)t}
  double cut = 60.0 / (dim - 3);
  return integrate(f, 0.0, cut, 1e-13);
}

double Catenoid::unit_tail_coeff(int dim) {
  if (dim <= 3) throw std::domain_error("unit_tail_coeff: needs n > 3");
  // z(r) = c_n - r^{3-n}/(n-3) + O(r^{-(3n-7)})
  return 1.0 / (dim - 3);
}

PlanarCurve PlanarCurve::from_samples(std::vector<double> r, std::vector<double> z) {
  if (r.size() != z.size() || r.size() < 2)
    throw std::invalid_argument("PlanarCurve: need >= 2 matching samples");
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!std::isfinite(r[i]) || !std::isfinite(z[i]))
      throw std::invalid_argument("PlanarCurve: non-finite sample");
    if (!(r[i] > 0.0)) throw std::invalid_argument("PlanarCurve: r must be positive");
    if (i > 0 && !(r[i] > r[i - 1]))
      throw std::invalid_argument("PlanarCurve: r samples must strictly increase");
  }
  PlanarCurve c;
  c.r = std::move(r);
  c.z = std::move(z);
  return c;
}

PlanarCurve PlanarCurve::from_function(std::function<double(double)> fz,
                                       std::function<double(double)> fzp, double r1, double r2,
                                       int n_samples) {
  if (!(r2 > r1) || n_samples < 2) throw std::invalid_argument("PlanarCurve: bad sampling range");
  std::vector<double> r(n_samples), z(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    r[i] = r1 + (r2 - r1) * i / (n_samples - 1);
    z[i] = fz(r[i]);
  }
  PlanarCurve c = from_samples(std::move(r), std::move(z));
  c.fz = std::move(fz);
  c.fzp = std::move(fzp);
  return c;
}

double weighted_area(const PlanarCurve& curve, double r1, double r2, int n) {
  if (!(r2 > r1)) throw std::invalid_argument("weighted_area: need r2 > r1");
  if (r1 < curve.r.front() - 1e-12 || r2 > curve.r.back() + 1e-12)
    throw std::invalid_argument("weighted_area: [r1,r2] outside curve support");
  if (curve.analytic()) {
    auto f = [&](double r) {
      double d = curve.fzp(r);
      return std::sqrt(1.0 + d * d) * std::pow(r, n - 2);
    };
    return integrate(f, r1, r2, 1e-12);
  }
  Pchip interp(curve.r, curve.z);
  auto f = [&](double r) {
    double d = interp.deriv(r);
    return std::sqrt(1.0 + d * d) * std::pow(r, n - 2);
  };
  // integrate knot interval by knot interval (derivative is piecewise cubic)
  std::vector<double> breaks(curve.r.begin(), curve.r.end());
  return integrate_split(f, r1, r2, breaks, 1e-11);
}

std::vector<double> mean_curvature(const PlanarCurve& curve, int n) {
  const std::size_t m = curve.r.size();
  if (m < 5) throw std::invalid_argument("mean_curvature: need >= 5 samples");
  // conservative form: midpoint fluxes q = r^{n-2} f'/sqrt(1+f'^2)
  std::vector<double> H(m - 2);
  auto flux = [&](std::size_t i) {
    double dr = curve.r[i + 1] - curve.r[i];
    double s = (curve.z[i + 1] - curve.z[i]) / dr;
    double rm = 0.5 * (curve.r[i + 1] + curve.r[i]);
    return std::pow(rm, n - 2) * s / std::sqrt(1.0 + s * s);
  };
  for (std::size_t i = 1; i + 1 < m; ++i) {
    double dr = 0.5 * (curve.r[i + 1] - curve.r[i - 1]);
    H[i - 1] = (flux(i) - flux(i - 1)) / (dr * std::pow(curve.r[i], n - 2));
  }
  return H;
}

double polyline_signed_distance(const std::vector<double>& cr, const std::vector<double>& cz,
                                double r, double z) {
  if (cr.size() < 2 || cr.size() != cz.size())
    throw std::invalid_argument("polyline_signed_distance: bad polyline");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < cr.size(); ++i) {
    double ax = cr[i], ay = cz[i], bx = cr[i + 1], by = cz[i + 1];
    double vx = bx - ax, vy = by - ay;
    double tt = ((r - ax) * vx + (z - ay) * vy) / std::max(vx * vx + vy * vy, 1e-300);
    tt = std::clamp(tt, 0.0, 1.0);
    double dx = r - (ax + tt * vx), dy = z - (ay + tt * vy);
    best = std::min(best, dx * dx + dy * dy);
  }
  // sign: above the graph (or left of its r-range start) counts positive
  double zc;
  if (r <= cr.front()) zc = cz.front();
  else if (r >= cr.back()) zc = cz.back();
  else {
    auto it = std::upper_bound(cr.begin(), cr.end(), r);
    std::size_t j = static_cast<std::size_t>(it - cr.begin()) - 1;
    double t = (r - cr[j]) / (cr[j + 1] - cr[j]);
    zc = cz[j] + t * (cz[j + 1] - cz[j]);
  }
  return (z >= zc ? 1.0 : -1.0) * std::sqrt(best);
}

namespace {

// weighted area of the pchip graph through fixed endpoints and movable
// interior knot heights (competitor family for the bound verifiers)
struct SplineCompetitor {
  std::vector<double> knots_r;  // includes the endpoints
  double za, zb;
  int n;
  mutable int evals = 0;

  double area(const std::vector<double>& zk) const {
    ++evals;
    std::vector<double> z(knots_r.size());
    z.front() = za;
    z.back() = zb;
    for (std::size_t i = 0; i < zk.size(); ++i) z[i + 1] = zk[i];
    Pchip interp(knots_r, z);
    static const double gx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                 0.5384693101056831, 0.9061798459386640};
    static const double gw[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                 0.4786286704993665, 0.2369268850561891};
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < knots_r.size(); ++i) {
      double mid = 0.5 * (knots_r[i] + knots_r[i + 1]);
      double half = 0.5 * (knots_r[i + 1] - knots_r[i]);
      double p = 0.0;
      for (int q = 0; q < 5; ++q) {
        double r = mid + half * gx[q];
        double d = interp.deriv(r);
        p += gw[q] * std::sqrt(1.0 + d * d) * std::pow(r, n - 2);
      }
      total += p * half;
    }
    return total;
  }
};

// coordinate descent over knot heights; optional monotone projection
double descend(SplineCompetitor& comp, std::vector<double> zk, bool monotone, double& best_seen) {
  double cur = comp.area(zk);
  for (int sweep = 0; sweep < 40; ++sweep) {
    double before = cur;
    for (std::size_t i = 0; i < zk.size(); ++i) {
      double lo = monotone ? (i == 0 ? comp.za : zk[i - 1]) : zk[i] - 2.0 * std::abs(zk[i]) - 2.0;
      double hi = monotone ? (i + 1 == zk.size() ? comp.zb : zk[i + 1])
                           : zk[i] + 2.0 * std::abs(zk[i]) + 2.0;
      // golden-section on [lo, hi]
      const double gr = 0.6180339887498949;
      double a = lo, b = hi;
      double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
      auto eval_at = [&](double v) {
        double keep = zk[i];
        zk[i] = v;
        double out = comp.area(zk);
        zk[i] = keep;
        return out;
      };
      double f1 = eval_at(x1), f2 = eval_at(x2);
      for (int it = 0; it < 36; ++it) {
        if (f1 < f2) {
          b = x2; x2 = x1; f2 = f1;
          x1 = b - gr * (b - a);
          f1 = eval_at(x1);
        } else {
          a = x1; x1 = x2; f1 = f2;
          x2 = a + gr * (b - a);
          f2 = eval_at(x2);
        }
      }
      double v = 0.5 * (a + b), fv = eval_at(v);
      if (fv < cur) {
        zk[i] = v;
        cur = fv;
      }
    }
    if (before - cur < 1e-11 * (1.0 + std::abs(cur))) break;
  }
  best_seen = std::min(best_seen, cur);
  return cur;
}

BoundCheck minimize_family(double ra, double za, double rb, double zb, int n, bool monotone,
                           double rhs) {
  SplineCompetitor comp;
  const int m = 8;
  comp.knots_r.resize(m + 2);
  for (int i = 0; i <= m + 1; ++i)
    comp.knots_r[i] = ra * std::pow(rb / ra, static_cast<double>(i) / (m + 1));
  comp.za = za;
  comp.zb = zb;
  comp.n = n;

  double best = std::numeric_limits<double>::infinity();

  auto chord = [&](double jitter, unsigned seed) {
    std::vector<double> zk(m);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> U(-jitter, jitter);
    for (int i = 0; i < m; ++i) {
      double t = (comp.knots_r[i + 1] - ra) / (rb - ra);
      zk[i] = za + t * (zb - za) + (jitter > 0 ? U(rng) : 0.0);
    }
    if (monotone)
      for (int i = 1; i < m; ++i) zk[i] = std::max(zk[i], zk[i - 1]);
    return zk;
  };

  // restart 1: straight chord; restart 2: catenoid through the endpoints
  // (when one exists); restart 3: jittered chord
  descend(comp, chord(0.0, 0), monotone, best);
  if (zb > za) {
    // z = sig*arccosh(r/sig) + d through both endpoints: solve for sig
    auto gap = [&](double sig) {
      return sig * (std::acosh(rb / sig) - std::acosh(std::max(ra, sig) / sig)) - (zb - za);
    };
    double lo = 1e-8, hi = ra;
    if (gap(lo) * gap(hi) < 0.0) {
      double sig = brent_root(gap, lo, hi, 1e-12);
      double d = zb - sig * std::acosh(rb / sig);
      std::vector<double> zk(m);
      for (int i = 0; i < m; ++i) {
        double r = comp.knots_r[i + 1];
        zk[i] = r >= sig ? sig * std::acosh(r / sig) + d : d;
      }
      if (monotone)
        for (int i = 1; i < m; ++i) zk[i] = std::max(zk[i], zk[i - 1]);
      descend(comp, zk, monotone, best);
    }
  }
  descend(comp, chord(0.15 * (std::abs(zb - za) + 1.0), 1234), monotone, best);

  BoundCheck out;
  out.lhs_min = best;
  out.rhs = rhs;
  out.competitors = comp.evals;
  return out;
}

}  // namespace

BoundCheck bound_e1(double r0, double a, double k) {
  if (!(k > 0.0) || !(r0 >= k) || !(a > r0))
    throw std::invalid_argument("bound_e1: need k > 0 and k <= r0 < a");
  double zb = k * std::acosh(a / k);
  double rhs = 0.5 * a * a - 0.5 * r0 * r0 + 0.5 * k * k * std::log(a);
  return minimize_family(r0, 0.0, a, zb, 3, false, rhs);
}

BoundCheck bound_y(double b, double a, double k, double kbar) {
  if (!(b > 1.0) || !(a > 4.0 * b))
    throw std::invalid_argument("bound_y: need b > 1 and a/b large");
  double za = kbar * std::log(b), zb = k * std::log(a);
  double num = k * std::log(a) - kbar * std::log(b);
  double rhs = 0.5 * a * a - 0.5 * b * b + 0.5 * num * num / (std::log(a) - std::log(b));
  return minimize_family(b, za, a, zb, 3, false, rhs);
}

BoundCheck bound_a2(double A, double a, double k, double kprime, int n) {
  if (n < 4) throw std::invalid_argument("bound_a2: lemma needs n > 3");
  if (!(A >= 16.0) || !(a > A)) throw std::invalid_argument("bound_a2: need A large and a > A");
  // the weighted length is invariant under z -> const - z, so order the
  // endpoint values and charge |k - k'|
  double lo = std::min(kprime, k), hi = std::max(kprime, k);
  double rhs = (std::pow(a, n - 1) - std::pow(A, n - 1)) / (n - 1) +
               0.5 * std::sqrt(A) * (hi - lo);
  return minimize_family(A, lo, a, hi, n, true, rhs);
}

double excess_delta(int n) {
  if (n < 3) throw std::domain_error("excess_delta: n must be >= 3");
  double m = static_cast<double>(n - 2);
  return (1.0 - std::pow(0.5, 1.0 / m)) / (2.0 * m);
}

}  // namespace onephase
