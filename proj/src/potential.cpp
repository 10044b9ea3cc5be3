#include "onephase/potential.hpp"

#include <cmath>
#include <stdexcept>

#include "onephase/numerics.hpp"

namespace onephase {

namespace {

// Quintic bridge on [1/2, 1]: value/slope/curvature of s^2 at 1/2 and of
// 1-exp(-s) at 1. Solved once by Gaussian elimination.
std::array<double, 6> solve_bridge() {
  double A[6][7];
  auto fill_row = [&](int row, double x, int der) {
    for (int i = 0; i < 6; ++i) {
      if (i < der) {
        A[row][i] = 0.0;
        continue;
      }
      double c = 1.0;
      for (int d = 0; d < der; ++d) c *= (i - d);
      A[row][i] = c * std::pow(x, i - der);
    }
  };
  const double e1 = std::exp(-1.0);
  double rhs[6] = {0.25, 1.0, 2.0, 1.0 - e1, e1, -e1};
  fill_row(0, 0.5, 0);
  fill_row(1, 0.5, 1);
  fill_row(2, 0.5, 2);
  fill_row(3, 1.0, 0);
  fill_row(4, 1.0, 1);
  fill_row(5, 1.0, 2);
  for (int r = 0; r < 6; ++r) A[r][6] = rhs[r];
  for (int c = 0; c < 6; ++c) {
    int piv = c;
    for (int r = c + 1; r < 6; ++r)
      if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
    for (int j = 0; j < 7; ++j) std::swap(A[c][j], A[piv][j]);
    for (int r = 0; r < 6; ++r) {
      if (r == c) continue;
      double f = A[r][c] / A[c][c];
      for (int j = c; j < 7; ++j) A[r][j] -= f * A[c][j];
    }
  }
  std::array<double, 6> out;
  for (int i = 0; i < 6; ++i) out[i] = A[i][6] / A[i][i];
  return out;
}

const std::array<double, 6>& bridge_coeffs() {
  static const std::array<double, 6> c = [] {
    auto c = solve_bridge();
    // build-time sanity: monotone on (1/2,1], concave on (3/4,1]
    for (int i = 0; i <= 4000; ++i) {
      double s = 0.5 + 0.5 * i / 4000.0;
      double d1 = 0, d2 = 0;
      for (int k = 1; k < 6; ++k) d1 += k * c[k] * std::pow(s, k - 1);
      for (int k = 2; k < 6; ++k) d2 += k * (k - 1) * c[k] * std::pow(s, k - 2);
      if (d1 <= 0.0) throw std::runtime_error("Fbar bridge lost monotonicity");
      if (s > 0.75 && d2 >= 0.0) throw std::runtime_error("Fbar bridge lost concavity on (3/4,1]");
    }
    return c;
  }();
  return c;
}

double poly_eval(const std::array<double, 6>& c, double s, int der = 0) {
  double out = 0.0;
  for (int k = der; k < 6; ++k) {
    double f = c[k];
    for (int d = 0; d < der; ++d) f *= (k - d);
    out += f * std::pow(s, k - der);
  }
  return out;
}

constexpr std::array<double, 6> kSmoothstep = {0, 0, 0, 10, -15, 6};

}  // namespace

PotentialSpec PotentialSpec::make(double eps) {
  if (!(eps > 0.0) || eps > 0.25)
    throw std::domain_error("PotentialSpec: eps must lie in (0, 0.25]");
  PotentialSpec spec;
  spec.eps = eps;
  spec.blend_knots = bridge_coeffs();
  spec.rho_poly = kSmoothstep;
  return spec;
}

double fbar_eval(double s) {
  if (s < 0.0) throw std::domain_error("fbar_eval: negative argument");
  if (s <= 0.5) return s * s;
  if (s <= 1.0) return poly_eval(bridge_coeffs(), s);
  return 1.0 - std::exp(-s);
}

double fbar_deriv(double s) {
  if (s < 0.0) throw std::domain_error("fbar_deriv: negative argument");
  if (s <= 0.5) return 2.0 * s;
  if (s <= 1.0) return poly_eval(bridge_coeffs(), s, 1);
  return std::exp(-s);
}

double rho_eval(double s) {
  double t = s + 0.5;
  if (t <= 0.0) return 1.0;
  if (t >= 1.0) return 0.0;
  return 1.0 - poly_eval(kSmoothstep, t);
}

double rho_deriv(double s) {
  double t = s + 0.5;
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return -poly_eval(kSmoothstep, t, 1);
}

double feps_eval(double s, const PotentialSpec& spec) {
  if (std::abs(s) > 1.0) throw std::domain_error("feps_eval: |s| > 1");
  const double e = spec.eps;
  double rho = rho_eval(s);
  double a = 0.0, b = 0.0;
  if (rho > 0.0) a = fbar_eval((s + 1.0) / e);
  if (rho < 1.0) b = fbar_eval((1.0 - s) / e);
  return rho * a + (1.0 - rho) * b;
}

double feps_deriv(double s, const PotentialSpec& spec) {
  if (std::abs(s) > 1.0) throw std::domain_error("feps_deriv: |s| > 1");
  const double e = spec.eps;
  double rho = rho_eval(s), drho = rho_deriv(s);
  double a = 0.0, da = 0.0, b = 0.0, db = 0.0;
  if (rho > 0.0 || drho != 0.0) {
    a = fbar_eval((s + 1.0) / e);
    da = fbar_deriv((s + 1.0) / e) / e;
  }
  if (rho < 1.0 || drho != 0.0) {
    b = fbar_eval((1.0 - s) / e);
    db = -fbar_deriv((1.0 - s) / e) / e;
  }
  return drho * (a - b) + rho * da + (1.0 - rho) * db;
}

HeteroclinicProfile heteroclinic_build(const PotentialSpec& spec, double x_max, int n_samples) {
  if (n_samples < 3) throw std::invalid_argument("heteroclinic_build: n_samples < 3");
  HeteroclinicProfile p;
  p.spec_ = spec;
  const double eps = spec.eps;
  const double h_top = 1.0 - 0.5 * eps;

  // cumulative x(H) = int_0^H dsigma / sqrt(F_eps) on a fine uniform H grid;
  // 5-point Gauss per panel (integrand smooth, F_eps >= 1/4 here)
  const int nh = 4096;
  p.htab_.resize(nh + 1);
  p.xtab_.resize(nh + 1);
  static const double gx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                               0.5384693101056831, 0.9061798459386640};
  static const double gw[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                               0.4786286704993665, 0.2369268850561891};
  double acc = 0.0;
  p.htab_[0] = 0.0;
  p.xtab_[0] = 0.0;
  for (int j = 1; j <= nh; ++j) {
    double h0 = h_top * (j - 1) / nh, h1 = h_top * j / nh;
    double mid = 0.5 * (h0 + h1), half = 0.5 * (h1 - h0);
    double panel = 0.0;
    for (int q = 0; q < 5; ++q)
      panel += gw[q] / std::sqrt(feps_eval(mid + half * gx[q], spec));
    acc += panel * half;
    p.htab_[j] = h1;
    p.xtab_[j] = acc;
  }
  p.t_eps_ = acc;
  p.tail_coeff_ = 0.5 * eps * std::exp(p.t_eps_ / eps);

  if (x_max <= p.t_eps_) throw std::invalid_argument("heteroclinic_build: x_max below t_eps");
  p.samples_.resize(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    double x = -x_max + 2.0 * x_max * i / (n_samples - 1);
    double h = p.value(x);
    p.samples_[i] = {x, h, p.deriv(x)};
  }
  return p;
}

double HeteroclinicProfile::value(double x) const {
  if (x < 0.0) return -value(-x);
  const double eps = spec_.eps;
  if (x >= t_eps_) return 1.0 - 0.5 * eps * std::exp((t_eps_ - x) / eps);
  // invert the x(H) table: bracket + Newton with dx/dH = 1/sqrt(F)
  auto it = std::upper_bound(xtab_.begin(), xtab_.end(), x);
  std::size_t j = static_cast<std::size_t>(it - xtab_.begin());
  j = std::min(xtab_.size() - 2, j > 0 ? j - 1 : 0);
  double h = htab_[j] + (htab_[j + 1] - htab_[j]) *
                            ((x - xtab_[j]) / std::max(xtab_[j + 1] - xtab_[j], 1e-300));
  static const double gx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                               0.5384693101056831, 0.9061798459386640};
  static const double gw[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                               0.4786286704993665, 0.2369268850561891};
  for (int k = 0; k < 3; ++k) {
    // local correction of x(h) by one Gauss panel from the bracket knot
    double mid = 0.5 * (htab_[j] + h), half = 0.5 * (h - htab_[j]);
    double panel = 0.0;
    for (int q = 0; q < 5; ++q)
      panel += gw[q] / std::sqrt(feps_eval(mid + half * gx[q], spec_));
    double xh = xtab_[j] + panel * half;
    h -= (xh - x) * std::sqrt(feps_eval(h, spec_));
    h = std::clamp(h, htab_[j], htab_[j + 1]);
  }
  return h;
}

double HeteroclinicProfile::deriv(double x) const {
  return std::sqrt(std::max(feps_eval(value(x), spec_), 0.0));
}

double HeteroclinicProfile::second(double x) const {
  return 0.5 * feps_deriv(value(x), spec_);
}

double HeteroclinicProfile::x_of_level(double level) const {
  if (level < 0.0) return -x_of_level(-level);
  if (level >= 1.0) throw std::domain_error("x_of_level: level must be < 1");
  const double eps = spec_.eps;
  if (level > 1.0 - 0.5 * eps) return t_eps_ - eps * std::log(2.0 * (1.0 - level) / eps);
  auto it = std::upper_bound(htab_.begin(), htab_.end(), level);
  std::size_t j = std::min<std::size_t>(htab_.size() - 2, it - htab_.begin() - (it != htab_.begin()));
  // x(level) = x_j + panel integral, 5-point Gauss
  double mid = 0.5 * (htab_[j] + level), half = 0.5 * (level - htab_[j]);
  static const double gx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                               0.5384693101056831, 0.9061798459386640};
  static const double gw[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                               0.4786286704993665, 0.2369268850561891};
  double panel = 0.0;
  for (int q = 0; q < 5; ++q)
    panel += gw[q] / std::sqrt(feps_eval(mid + half * gx[q], spec_));
  return xtab_[j] + panel * half;
}

double limit_profile(double x) { return std::clamp(x, -1.0, 1.0); }

double delta_eps(const PotentialSpec& spec, const HeteroclinicProfile& profile) {
  const double eps = spec.eps;
  if (profile.t_eps() > 2.0)
    throw std::runtime_error("delta_eps: profile must cover x = 2 in its tail regime");
  // Past t_eps the tail identities give H'(2) = (1-H(2))/eps and
  // H''(2) = -(1-H(2))/eps^2, so dividing the cubic by 1-H(2) leaves
  //   d/eps - d^2/(2 eps^2) + d^3/eps^4 = 1,
  // which is well conditioned even when 1-H(2) underflows.
  auto scaled = [&](double d) {
    return d / eps - 0.5 * d * d / (eps * eps) + d * d * d / (eps * eps * eps * eps) - 1.0;
  };
  if (!(scaled(0.0) < 0.0 && scaled(eps) > 0.0))
    throw std::runtime_error("delta_eps: cubic does not bracket a root on (0, eps)");
  return brent_root(scaled, 0.0, eps, 1e-16);
}

SubsolutionProfile subsolution_build(const PotentialSpec& spec,
                                     const HeteroclinicProfile& profile, double l) {
  if (!(l > 2.0)) throw std::invalid_argument("subsolution_build: need l > 2");
  SubsolutionProfile w;
  w.profile_ = std::make_shared<HeteroclinicProfile>(profile);
  w.l_ = l;
  w.delta_ = delta_eps(spec, profile);
  const double eps = spec.eps;
  // tail identities at l and 2 (both >= t_eps since l > 2 > t_eps)
  double ml = 0.5 * eps * std::exp((profile.t_eps() - l) / eps);
  double m2 = 0.5 * eps * std::exp((profile.t_eps() - 2.0) / eps);
  w.hl_ = 1.0 - ml;
  w.hpl_ = ml / eps;
  w.hppl_ = -ml / (eps * eps);
  w.h2_ = 1.0 - m2;
  w.hp2_ = m2 / eps;
  w.hpp2_ = -m2 / (eps * eps);
  w.cub_ = m2 / (eps * eps * eps * eps);
  return w;
}

double SubsolutionProfile::value(double x) const {
  const double eps = profile_->eps();
  if (x < -l_ - eps || x > 2.0 + delta_)
    throw std::domain_error("SubsolutionProfile: x outside [-l-eps, 2+delta]");
  if (x <= -l_) {
    double t = x + l_;
    return -hl_ + hpl_ * t - 0.5 * hppl_ * t * t;
  }
  if (x <= 2.0) return profile_->value(x);
  double t = x - 2.0;
  return h2_ + hp2_ * t + 0.5 * hpp2_ * t * t + cub_ * t * t * t;
}

double SubsolutionProfile::deriv(double x) const {
  const double eps = profile_->eps();
  if (x < -l_ - eps || x > 2.0 + delta_)
    throw std::domain_error("SubsolutionProfile: x outside [-l-eps, 2+delta]");
  if (x <= -l_) return hpl_ - hppl_ * (x + l_);
  if (x <= 2.0) return profile_->deriv(x);
  double t = x - 2.0;
  return hp2_ + hpp2_ * t + 3.0 * cub_ * t * t;
}

double SubsolutionProfile::second(double x) const {
  const double eps = profile_->eps();
  if (x < -l_ - eps || x > 2.0 + delta_)
    throw std::domain_error("SubsolutionProfile: x outside [-l-eps, 2+delta]");
  if (x <= -l_) return -hppl_;
  if (x <= 2.0) return profile_->second(x);
  return hpp2_ + 6.0 * cub_ * (x - 2.0);
}

double subsolution_residual(const SubsolutionProfile& w, double x) {
  const PotentialSpec& spec = w.spec();
  return -w.second(x) + 0.5 * feps_deriv(w.value(x), spec);
}

double e_eps(const PotentialSpec& spec) {
  const double eps = spec.eps;
  auto f = [&](double s) { return std::sqrt(std::max(feps_eval(s, spec), 0.0)); };
  std::vector<double> seams = {-1.0 + 0.5 * eps, -(1.0 - eps), -0.5, 0.0,
                               0.5, 1.0 - eps, 1.0 - 0.5 * eps};
  return 2.0 * integrate_split(f, -1.0, 1.0, seams, 1e-11);
}

double heteroclinic_line_energy(const HeteroclinicProfile& profile) {
  const double eps = profile.eps();
  auto f = [&](double x) {
    double hp = profile.deriv(x);
    return hp * hp + feps_eval(profile.value(x), profile.spec());
  };
  // 2 * [ int_0^{t_eps} + exact tail int_{t_eps}^inf 2 H'^2 = eps/4 ]
  double core = integrate(f, 0.0, profile.t_eps(), 1e-11);
  return 2.0 * (core + eps / 4.0);
}

}  // namespace onephase
