#include "onephase/freeboundary.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "onephase/numerics.hpp"

namespace onephase {

BoundaryCurve extract_level(const Field& u, double level) {
  if (!(std::abs(level) < 1.0)) throw std::domain_error("extract_level: |level| < 1");
  const AxiGrid& g = *u.grid;
  BoundaryCurve c;
  c.theta = 1.0 - std::abs(level);
  for (int i = 0; i <= g.Nr; ++i) {
    for (int j = 0; j < g.Nz; ++j) {
      double a = u.at(i, j) - level, b = u.at(i, j + 1) - level;
      if (a == 0.0 && b == 0.0) continue;
      if ((a > 0) != (b > 0) || a == 0.0) {
        double t = a / (a - b);
        c.r.push_back(g.r(i));
        double z = g.z(j) + t * g.hz;
        c.z.push_back(z);
        c.z_raw.push_back(z);
        break;  // monotone in z: first crossing only
      }
    }
  }
  return c;
}

BoundaryCurve extract(const Field& u, Side side, double theta,
                      const HeteroclinicProfile& profile) {
  if (!(theta > 0.0 && theta < 1.0)) throw std::domain_error("extract: theta in (0,1)");
  double level = (side == Side::minus) ? -1.0 + theta : 1.0 - theta;
  BoundaryCurve c = extract_level(u, level);
  c.side = side;
  c.theta = theta;
  // crossing sits at profile abscissa -/+ x_theta; the sharp boundary at
  // -/+ 1 (the eps -> 0 clip points), so shift by the remaining distance
  double x_theta = profile.x_of_level(1.0 - theta);
  double offset = 1.0 - x_theta;
  for (auto& z : c.z) z += (side == Side::minus) ? -offset : offset;
  return c;
}

AsymptoticFit fit_asymptote(const BoundaryCurve& curve, int n, double r_lo, double r_hi) {
  if (!(r_hi > r_lo)) throw std::invalid_argument("fit_asymptote: bad window");
  std::vector<double> phi0, phi1, y;
  for (std::size_t i = 0; i < curve.r.size(); ++i) {
    double r = curve.r[i];
    if (r < r_lo || r > r_hi || r <= 0.0) continue;
    phi0.push_back(n == 3 ? std::log(r) : 1.0);
    phi1.push_back(n == 3 ? 1.0 : -std::pow(r, 3 - n));
    y.push_back(curve.z[i]);
  }
  if (y.size() < 10) throw std::runtime_error("fit_asymptote: fewer than 10 samples in window");
  Fit2 f = least_squares_2(phi0, phi1, y);
  AsymptoticFit out;
  out.r_lo = r_lo;
  out.r_hi = r_hi;
  out.rms = f.rms;
  out.samples = static_cast<int>(y.size());
  if (n == 3) {
    out.log_model = true;
    out.k_hat = f.c0;
    out.b_hat = f.c1;
  } else {
    out.log_model = false;
    out.c_hat = f.c0;
    out.cprime_hat = f.c1;
    out.exponent = 3 - n;
  }
  return out;
}

namespace {

double bilinear(const Field& u, double r, double z) {
  const AxiGrid& g = *u.grid;
  double x = std::clamp(r / g.hr, 0.0, static_cast<double>(g.Nr));
  double y = std::clamp(z / g.hz, 0.0, static_cast<double>(g.Nz));
  int i = std::min(static_cast<int>(x), g.Nr - 1);
  int j = std::min(static_cast<int>(y), g.Nz - 1);
  double tx = x - i, ty = y - j;
  return (1 - tx) * (1 - ty) * u.at(i, j) + tx * (1 - ty) * u.at(i + 1, j) +
         (1 - tx) * ty * u.at(i, j + 1) + tx * ty * u.at(i + 1, j + 1);
}

// central-difference gradient magnitude at interior nodes, one-sided on edges
double grad_mag(const Field& u, int i, int j) {
  const AxiGrid& g = *u.grid;
  double dr, dz;
  if (i == 0) dr = (u.at(1, j) - u.at(0, j)) / g.hr;
  else if (i == g.Nr) dr = (u.at(g.Nr, j) - u.at(g.Nr - 1, j)) / g.hr;
  else dr = (u.at(i + 1, j) - u.at(i - 1, j)) / (2 * g.hr);
  if (j == 0) dz = (u.at(i, 1) - u.at(i, 0)) / g.hz;
  else if (j == g.Nz) dz = (u.at(i, g.Nz) - u.at(i, g.Nz - 1)) / g.hz;
  else dz = (u.at(i, j + 1) - u.at(i, j - 1)) / (2 * g.hz);
  return std::hypot(dr, dz);
}

double grad_mag_interp(const Field& u, double r, double z) {
  const AxiGrid& g = *u.grid;
  int i = std::clamp(static_cast<int>(std::round(r / g.hr)), 0, g.Nr);
  int j = std::clamp(static_cast<int>(std::round(z / g.hz)), 0, g.Nz);
  return grad_mag(u, i, j);
}

}  // namespace

BlowupResult blowup(const Field& u, double window_scale, const HeteroclinicProfile& profile,
                    int m) {
  const AxiGrid& g = *u.grid;
  double theta = 0.5 * g.pot.eps;
  BoundaryCurve fminus = extract(u, Side::minus, theta, profile);
  if (fminus.r.size() < 3) throw std::runtime_error("blowup: minus boundary too short");
  double rho = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < fminus.r.size(); ++i)
    rho = std::min(rho, std::hypot(fminus.r[i], std::max(fminus.z[i], 0.0)));
  if (!(rho > 2.0 * g.hr)) throw std::runtime_error("blowup: rho_k below 2 hr");
  if (rho < 4.0 * std::min(g.hr, g.hz))
    throw std::runtime_error("blowup: rho_k under-resolved, refine the grid or shrink k");

  BlowupResult res;
  res.rho_k = rho;
  res.window_scale = window_scale;
  res.m = m;
  res.psi.resize(static_cast<std::size_t>(m + 1) * (m + 1));
  for (int i = 0; i <= m; ++i) {
    for (int j = 0; j <= m; ++j) {
      double R = window_scale * rho * i / m, Z = window_scale * rho * j / m;
      R = std::min(R, g.a);
      Z = std::min(Z, g.b_eps);
      res.psi[i * (m + 1) + j] = (bilinear(u, R, Z) + 1.0) / rho;
    }
  }

  // gradient statistics along the mid-transition line (the nodal curve),
  // where the regularized profile carries the limit slope |grad| ~ 1
  BoundaryCurve nodal = extract_level(u, 0.0);
  double sum = 0, mn = std::numeric_limits<double>::infinity(), mx = 0;
  int count = 0;
  for (std::size_t i = 0; i < nodal.r.size(); ++i) {
    if (nodal.r[i] > window_scale * rho || nodal.z[i] > window_scale * rho) continue;
    double gm = grad_mag_interp(u, nodal.r[i], nodal.z[i]);
    sum += gm;
    mn = std::min(mn, gm);
    mx = std::max(mx, gm);
    ++count;
  }
  if (count == 0) {
    // nodal line may sit beyond the window; fall back to its full extent
    for (std::size_t i = 0; i < nodal.r.size(); ++i) {
      double gm = grad_mag_interp(u, nodal.r[i], nodal.z[i]);
      sum += gm;
      mn = std::min(mn, gm);
      mx = std::max(mx, gm);
      ++count;
    }
  }
  res.grad_mean = count ? sum / count : 0.0;
  res.grad_min = count ? mn : 0.0;
  res.grad_max = mx;

  double gmax = 0;
  for (int i = 1; i < g.Nr; ++i)
    for (int j = 1; j < g.Nz; ++j) gmax = std::max(gmax, grad_mag(u, i, j));
  res.max_interior_grad = gmax;

  res.boundary_r.reserve(fminus.r.size());
  res.boundary_z.reserve(fminus.r.size());
  for (std::size_t i = 0; i < fminus.r.size(); ++i) {
    res.boundary_r.push_back(fminus.r[i] / rho);
    res.boundary_z.push_back(fminus.z[i] / rho);
  }
  return res;
}

ShapeReport theorem_shape_checks(const BlowupResult& res, int n) {
  ShapeReport rep;
  const int m = res.m;
  double h = res.hx();
  double min_dz = std::numeric_limits<double>::infinity();
  double max_dr = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= m; ++i) {
    for (int j = 1; j < m; ++j)
      min_dz = std::min(min_dz, (res.psi_at(i, j + 1) - res.psi_at(i, j - 1)) / (2 * h));
  }
  for (int i = 1; i < m; ++i)
    for (int j = 0; j <= m; ++j)
      max_dr = std::max(max_dr, (res.psi_at(i + 1, j) - res.psi_at(i - 1, j)) / (2 * h));
  rep.min_dz_psi = min_dz;
  rep.max_dr_psi = max_dr;

  // boundary height at unit distance from the origin
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < res.boundary_r.size(); ++i) {
    double d = std::abs(std::hypot(res.boundary_r[i], std::max(res.boundary_z[i], 0.0)) - 1.0);
    if (d < best) {
      best = d;
      rep.g_at_1 = std::max(res.boundary_z[i], 0.0);
    }
  }

  // g'(r) r^{n-2} along the rescaled boundary, split into window halves
  const auto& br = res.boundary_r;
  const auto& bz = res.boundary_z;
  double gpr_max = 0, first = 0, last = 0;
  int nfirst = 0, nlast = 0;
  for (std::size_t i = 1; i + 1 < br.size(); ++i) {
    if (br[i] > res.window_scale) break;
    double gp = (bz[i + 1] - bz[i - 1]) / (br[i + 1] - br[i - 1]);
    double v = std::abs(gp) * std::pow(br[i], n - 2);
    gpr_max = std::max(gpr_max, v);
    if (br[i] < 0.5 * res.window_scale) {
      first += v;
      ++nfirst;
    } else {
      last += v;
      ++nlast;
    }
  }
  rep.gpr_max = gpr_max;
  rep.gpr_first = nfirst ? first / nfirst : 0.0;
  rep.gpr_last = nlast ? last / nlast : 0.0;
  return rep;
}

void write_curve_csv(const BoundaryCurve& curve, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_curve_csv: cannot open " + path);
  f << "r,z,z_raw\n";
  f.precision(17);
  for (std::size_t i = 0; i < curve.r.size(); ++i)
    f << curve.r[i] << ',' << curve.z[i] << ',' << curve.z_raw[i] << '\n';
}

}  // namespace onephase
