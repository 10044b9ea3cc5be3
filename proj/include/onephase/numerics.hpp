#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

// Small numerical kernels shared by the modules: adaptive quadrature,
// bracketed root finding, monotone cubic interpolation, least squares.

namespace onephase {

// Adaptive Simpson quadrature. Terminates a panel when the Richardson
// estimate of its error is below the panel's share of the tolerance.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double rel_tol = 1e-12, double abs_tol = 0.0, int max_depth = 48) {
  if (a == b) return 0.0;
  struct Rec {
    const std::function<double(double)>& f;
    double rel, abs;
    int max_depth;
    double run(double a, double fa, double b, double fb, double m, double fm, double whole,
               int depth) const {
      double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      double flm = f(lm), frm = f(rm);
      double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      double err = (left + right - whole) / 15.0;
      double tol = std::max(abs, rel * std::abs(left + right));
      if (depth >= max_depth || std::abs(err) <= tol)
        return left + right + err;
      return run(a, fa, m, fm, lm, flm, left, depth + 1) +
             run(m, fm, b, fb, rm, frm, right, depth + 1);
    }
  };
  double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  Rec rec{f, rel_tol, abs_tol, max_depth};
  return rec.run(a, fa, b, fb, m, fm, whole, 0);
}

// Integrates over [a,b] split at interior breakpoints (helps the adaptive
// rule across seams of piecewise definitions).
inline double integrate_split(const std::function<double(double)>& f, double a, double b,
                              std::vector<double> breaks, double rel_tol = 1e-12,
                              double abs_tol = 0.0) {
  breaks.push_back(a);
  breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    double lo = breaks[i], hi = breaks[i + 1];
    if (hi <= a || lo >= b || hi - lo <= 0) continue;
    lo = std::max(lo, a);
    hi = std::min(hi, b);
    total += integrate(f, lo, hi, rel_tol, abs_tol);
  }
  return total;
}

// Brent's method on a bracketing interval [a,b] with f(a)*f(b) <= 0.
inline double brent_root(const std::function<double(double)>& f, double a, double b,
                         double tol = 1e-14, int max_iter = 200) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) throw std::runtime_error("brent_root: interval does not bracket a root");
  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < max_iter; ++it) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * tol;
    double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double s = fb / fa, p, q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        double r = fb / fc;
        q = fa / fc;
        p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d; d = p / q;
      } else {
        d = xm; e = d;
      }
    } else {
      d = xm; e = d;
    }
    a = b; fa = fb;
    b += (std::abs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
    fb = f(b);
    if ((fb > 0) == (fc > 0)) {
      c = a; fc = fa; d = b - a; e = d;
    }
  }
  return b;
}

// Monotone cubic (Fritsch-Carlson) interpolant through strictly increasing
// abscissas. Preserves monotonicity of the data.
class Pchip {
 public:
  Pchip() = default;
  Pchip(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw std::invalid_argument("Pchip: need >= 2 matching points");
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (!(x_[i + 1] > x_[i])) throw std::invalid_argument("Pchip: abscissas must increase");
    m_.resize(n);
    std::vector<double> d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
    m_[0] = d[0];
    m_[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (d[i - 1] * d[i] <= 0.0) {
        m_[i] = 0.0;
      } else {
        double w1 = 2.0 * (x_[i + 1] - x_[i]) + (x_[i] - x_[i - 1]);
        double w2 = (x_[i + 1] - x_[i]) + 2.0 * (x_[i] - x_[i - 1]);
        m_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
      }
    }
    // clamp endpoint slopes (Fritsch-Carlson condition)
    for (std::size_t i : {std::size_t(0), n - 1}) {
      std::size_t k = (i == 0) ? 0 : n - 2;
      if (d[k] == 0.0) m_[i] = 0.0;
      else if (m_[i] / d[k] < 0.0) m_[i] = 0.0;
      else if (std::abs(m_[i]) > 3.0 * std::abs(d[k])) m_[i] = 3.0 * d[k];
    }
  }

  double value(double x) const { return eval(x).first; }
  double deriv(double x) const { return eval(x).second; }
  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }

 private:
  std::pair<double, double> eval(double x) const {
    std::size_t i = locate(x);
    double h = x_[i + 1] - x_[i], t = (x - x_[i]) / h;
    double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
    double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
    double v = h00 * y_[i] + h10 * h * m_[i] + h01 * y_[i + 1] + h11 * h * m_[i + 1];
    double d00 = 6 * t * (t - 1) / h, d10 = (1 - t) * (1 - 3 * t);
    double d01 = -d00, d11 = t * (3 * t - 2);
    double dv = d00 * y_[i] + d10 * m_[i] + d01 * y_[i + 1] + d11 * m_[i + 1];
    return {v, dv};
  }
  std::size_t locate(double x) const {
    if (x <= x_.front()) return 0;
    if (x >= x_.back()) return x_.size() - 2;
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    return static_cast<std::size_t>(it - x_.begin()) - 1;
  }
  std::vector<double> x_, y_, m_;
};

// Least squares fit y ~ c0*phi0 + c1*phi1 over samples; returns (c0, c1, rms).
struct Fit2 {
  double c0 = 0, c1 = 0, rms = 0;
};
inline Fit2 least_squares_2(const std::vector<double>& phi0, const std::vector<double>& phi1,
                            const std::vector<double>& y) {
  const std::size_t n = y.size();
  if (phi0.size() != n || phi1.size() != n || n < 2)
    throw std::invalid_argument("least_squares_2: bad sample sizes");
  double a00 = 0, a01 = 0, a11 = 0, b0 = 0, b1 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    a00 += phi0[i] * phi0[i];
    a01 += phi0[i] * phi1[i];
    a11 += phi1[i] * phi1[i];
    b0 += phi0[i] * y[i];
    b1 += phi1[i] * y[i];
  }
  double det = a00 * a11 - a01 * a01;
  if (std::abs(det) <= 1e-14 * std::max(a00 * a11, 1e-300))
    throw std::runtime_error("least_squares_2: ill-conditioned fit window");
  Fit2 f;
  f.c0 = (a11 * b0 - a01 * b1) / det;
  f.c1 = (a00 * b1 - a01 * b0) / det;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = y[i] - f.c0 * phi0[i] - f.c1 * phi1[i];
    ss += r * r;
  }
  f.rms = std::sqrt(ss / static_cast<double>(n));
  return f;
}

inline double sqr(double x) { return x * x; }

}  // namespace onephase
