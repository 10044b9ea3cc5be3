#include "onephase/grid.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "onephase/catenoid.hpp"
#include "onephase/numerics.hpp"

namespace onephase {

AxiGrid build_domain(int n, double a, double k, double eps, int Nr, int Nz,
                     const PotentialSpec& pot, const HeteroclinicProfile& profile) {
  if (n < 3) throw std::domain_error("build_domain: n >= 3");
  if (Nr < 16 || Nz < 16) throw std::domain_error("build_domain: Nr, Nz >= 16");
  if (!(k > 0.0)) throw std::domain_error("build_domain: k > 0");
  AxiGrid g;
  g.n = n;
  g.a = a;
  g.k = k;
  g.Nr = Nr;
  g.Nz = Nz;
  g.pot = pot;
  g.delta = delta_eps(pot, profile);
  if (n == 3) {
    if (!(a > 2.0 * k)) throw std::domain_error("build_domain: need a > 2k for n = 3");
    g.z_cat = k * std::acosh(a / k);
  } else {
    Catenoid cat(n, k, Catenoid::Convention::asymptotic);
    if (!(a > cat.neck_radius()))
      throw std::domain_error("build_domain: a below the neck of the asymptotic catenoid");
    g.z_cat = cat.z_of_r(a);
  }
  g.b_eps = g.z_cat + 2.0 + g.delta;
  g.hr = a / Nr;
  g.hz = g.b_eps / Nz;

  g.face_w.resize(Nr);
  g.cell_v.resize(Nr + 1);
  auto mono = [&](double r) { return std::pow(r, n - 1) / (n - 1); };  // int r^{n-2}
  for (int i = 0; i < Nr; ++i) g.face_w[i] = std::pow((i + 0.5) * g.hr, n - 2);
  for (int i = 0; i <= Nr; ++i) {
    double lo = std::max(0.0, (i - 0.5) * g.hr);
    double hi = std::min(a, (i + 0.5) * g.hr);
    g.cell_v[i] = mono(hi) - mono(lo);
  }
  return g;
}

BoundaryData boundary_omega(const AxiGrid& grid, const SubsolutionProfile& w) {
  double l_expected = grid.z_cat - grid.pot.eps;
  if (std::abs(w.l() - l_expected) > 1e-9 * std::max(1.0, l_expected))
    throw std::invalid_argument("boundary_omega: subsolution built with wrong half-length l");
  if (std::abs(w.delta() - grid.delta) > 1e-12)
    throw std::invalid_argument("boundary_omega: delta_eps mismatch");
  BoundaryData bd;
  bd.wall.resize(grid.Nz + 1);
  for (int j = 0; j <= grid.Nz; ++j) {
    double x = std::min(grid.z(j) - grid.z_cat, w.x_max());
    bd.wall[j] = w.value(x);
  }
  bd.top.assign(grid.Nr + 1, bd.wall.back());
  return bd;
}

Field omega_extension(const AxiGrid& grid, const BoundaryData& omega) {
  Field u(grid);
  for (int i = 0; i <= grid.Nr; ++i)
    for (int j = 0; j <= grid.Nz; ++j) u.at(i, j) = omega.wall[j];
  for (int i = 0; i <= grid.Nr; ++i) u.at(i, grid.Nz) = omega.top[i];
  return u;
}

void impose_boundary(Field& u, const BoundaryData& bd) {
  const AxiGrid& g = *u.grid;
  for (int j = 0; j <= g.Nz; ++j) u.at(g.Nr, j) = bd.wall[j];
  for (int i = 0; i <= g.Nr; ++i) u.at(i, g.Nz) = bd.top[i];
}

namespace {

// conservative radial + standard vertical Laplacian, ghost reflection at
// r = 0 and z = 0, Dirichlet rows untouched (result 0 there)
inline void add_laplacian(const Field& u, Field& out, double sign) {
  const AxiGrid& g = *u.grid;
  const double ihz2 = 1.0 / (g.hz * g.hz);
  for (int i = 0; i < g.Nr; ++i) {
    const double wl = (i > 0) ? g.face_w[i - 1] : 0.0;
    const double wr = g.face_w[i];
    const double iv = 1.0 / (g.cell_v[i] * g.hr);
    for (int j = 0; j < g.Nz; ++j) {
      double lap_r = wr * (u.at(i + 1, j) - u.at(i, j));
      if (i > 0) lap_r -= wl * (u.at(i, j) - u.at(i - 1, j));
      lap_r *= iv;
      double below = (j > 0) ? u.at(i, j - 1) : u.at(i, 1);
      double lap_z = (u.at(i, j + 1) - 2.0 * u.at(i, j) + below) * ihz2;
      out.at(i, j) += sign * (lap_r + lap_z);
    }
  }
}

}  // namespace

Field apply_neg_laplacian(const Field& u) {
  Field out(*u.grid, 0.0);
  add_laplacian(u, out, -1.0);
  return out;
}

Field apply_operator(const Field& u) {
  const AxiGrid& g = *u.grid;
  Field out(g, 0.0);
  add_laplacian(u, out, -1.0);
  for (int i = 0; i < g.Nr; ++i)
    for (int j = 0; j < g.Nz; ++j)
      out.at(i, j) += 0.5 * feps_deriv(u.at(i, j), g.pot);
  return out;
}

double weighted_inner(const Field& u, const Field& v) {
  const AxiGrid& g = *u.grid;
  double s = 0.0;
  for (int i = 0; i <= g.Nr; ++i) {
    double wz_edge = g.cell_v[i] * g.hz;
    for (int j = 0; j <= g.Nz; ++j) {
      double w = wz_edge * ((j == 0 || j == g.Nz) ? 0.5 : 1.0);
      s += w * u.at(i, j) * v.at(i, j);
    }
  }
  return s;
}

double residual_norm2(const Field& u) {
  Field res = apply_operator(u);
  return weighted_inner(res, res);
}

// Face-based quadrature of int [ |grad u|^2 + F(u) ] r^{n-2}: the gradient
// terms live on cell faces with the same flux weights as the operator, the
// potential on nodes with trapezoid z-weights. This is the exact quadratic
// form of apply_neg_laplacian, so the parabolic scheme dissipates this very
// functional (not just an O(h^2) relative of it).
double energy(const Field& u) {
  const AxiGrid& g = *u.grid;
  const PotentialSpec& pot = g.pot;
  double total = 0.0;
  // radial gradient: faces (i,i+1) x node rows j (half weight on z edges)
  for (int i = 0; i < g.Nr; ++i) {
    double w = g.face_w[i] / g.hr * g.hz;
    double col = 0.0;
    for (int j = 0; j <= g.Nz; ++j) {
      double d = u.at(i + 1, j) - u.at(i, j);
      col += ((j == 0 || j == g.Nz) ? 0.5 : 1.0) * d * d;
    }
    total += w * col;
  }
  // vertical gradient: faces (j,j+1) x radial cells
  for (int i = 0; i <= g.Nr; ++i) {
    double w = g.cell_v[i] / g.hz;
    double col = 0.0;
    for (int j = 0; j < g.Nz; ++j) {
      double d = u.at(i, j + 1) - u.at(i, j);
      col += d * d;
    }
    total += w * col;
  }
  // potential on nodes
  for (int i = 0; i <= g.Nr; ++i) {
    double w = g.cell_v[i] * g.hz;
    double col = 0.0;
    for (int j = 0; j <= g.Nz; ++j)
      col += ((j == 0 || j == g.Nz) ? 0.5 : 1.0) * feps_eval(u.at(i, j), pot);
    total += w * col;
  }
  return total;
}

double level_area(const Field& u, double s) {
  if (!(std::abs(s) < 1.0)) throw std::domain_error("level_area: need |s| < 1");
  const AxiGrid& g = *u.grid;
  double area = 0.0;
  // marching squares: crossing points on cell edges, linear interpolation
  for (int i = 0; i < g.Nr; ++i) {
    for (int j = 0; j < g.Nz; ++j) {
      double c[4] = {u.at(i, j) - s, u.at(i + 1, j) - s, u.at(i + 1, j + 1) - s,
                     u.at(i, j + 1) - s};
      int mask = (c[0] > 0) | ((c[1] > 0) << 1) | ((c[2] > 0) << 2) | ((c[3] > 0) << 3);
      if (mask == 0 || mask == 15) continue;
      double x0 = g.r(i), y0 = g.z(j);
      // edge order: bottom, right, top, left; t in [0,1] along each
      double px[4], py[4];
      int np = 0;
      auto cut = [&](double ca, double cb, double ax, double ay, double bx, double by) {
        if ((ca > 0) == (cb > 0)) return;
        double t = ca / (ca - cb);
        px[np] = ax + t * (bx - ax);
        py[np] = ay + t * (by - ay);
        ++np;
      };
      cut(c[0], c[1], x0, y0, x0 + g.hr, y0);
      cut(c[1], c[2], x0 + g.hr, y0, x0 + g.hr, y0 + g.hz);
      cut(c[2], c[3], x0 + g.hr, y0 + g.hz, x0, y0 + g.hz);
      cut(c[3], c[0], x0, y0 + g.hz, x0, y0);
      auto add_seg = [&](int p, int q) {
        double dx = px[p] - px[q], dy = py[p] - py[q];
        double rm = 0.5 * (px[p] + px[q]);
        area += std::sqrt(dx * dx + dy * dy) * std::pow(rm, g.n - 2);
      };
      if (np == 2) {
        add_seg(0, 1);
      } else if (np == 4) {
        // saddle: resolve by the cell-center sign
        double cc = 0.25 * (c[0] + c[1] + c[2] + c[3]);
        bool center_pos = cc > 0;
        bool corner0_pos = c[0] > 0;
        // pair edges so the interface separates opposite-sign corners
        if (center_pos == corner0_pos) {
          add_seg(0, 3);
          add_seg(1, 2);
        } else {
          add_seg(0, 1);
          add_seg(2, 3);
        }
      }
    }
  }
  return area;
}

void write_field(const Field& u, const std::string& path) {
  const AxiGrid& g = *u.grid;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("write_field: cannot open " + path);
  auto put_i64 = [&](std::int64_t x) { f.write(reinterpret_cast<const char*>(&x), 8); };
  auto put_f64 = [&](double x) { f.write(reinterpret_cast<const char*>(&x), 8); };
  put_i64(g.n);
  put_f64(g.a);
  put_f64(g.b_eps);
  put_i64(g.Nr);
  put_i64(g.Nz);
  put_f64(g.pot.eps);
  put_f64(g.k);
  f.write(reinterpret_cast<const char*>(u.v.data()),
          static_cast<std::streamsize>(u.v.size() * sizeof(double)));
  if (!f) throw std::runtime_error("write_field: short write to " + path);
}

namespace {
struct DumpHeader {
  std::int64_t n, Nr, Nz;
  double a, b_eps, eps, k;
};
DumpHeader read_header(std::ifstream& f, const std::string& path) {
  DumpHeader h{};
  auto get_i64 = [&](std::int64_t& x) { f.read(reinterpret_cast<char*>(&x), 8); };
  auto get_f64 = [&](double& x) { f.read(reinterpret_cast<char*>(&x), 8); };
  get_i64(h.n);
  get_f64(h.a);
  get_f64(h.b_eps);
  get_i64(h.Nr);
  get_i64(h.Nz);
  get_f64(h.eps);
  get_f64(h.k);
  if (!f) throw std::runtime_error("read_field: truncated header in " + path);
  return h;
}
}  // namespace

Field read_field(const AxiGrid& grid, const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("read_field: cannot open " + path);
  DumpHeader h = read_header(f, path);
  if (h.n != grid.n || h.Nr != grid.Nr || h.Nz != grid.Nz ||
      std::abs(h.a - grid.a) > 1e-12 || std::abs(h.eps - grid.pot.eps) > 1e-12)
    throw std::runtime_error("read_field: dump header does not match the grid");
  Field u(grid);
  f.read(reinterpret_cast<char*>(u.v.data()),
         static_cast<std::streamsize>(u.v.size() * sizeof(double)));
  if (!f) throw std::runtime_error("read_field: truncated data in " + path);
  return u;
}

AxiGrid read_field_header(const std::string& path, const PotentialSpec& pot,
                          const HeteroclinicProfile& profile) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("read_field_header: cannot open " + path);
  DumpHeader h = read_header(f, path);
  if (std::abs(h.eps - pot.eps) > 1e-12)
    throw std::runtime_error("read_field_header: eps mismatch with the provided potential");
  return build_domain(static_cast<int>(h.n), h.a, h.k, h.eps, static_cast<int>(h.Nr),
                      static_cast<int>(h.Nz), pot, profile);
}

void write_field_csv(const Field& u, const std::string& path) {
  const AxiGrid& g = *u.grid;
  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_field_csv: cannot open " + path);
  f << "r,z,u\n";
  f.precision(17);
  for (int i = 0; i <= g.Nr; ++i)
    for (int j = 0; j <= g.Nz; ++j)
      f << g.r(i) << ',' << g.z(j) << ',' << u.at(i, j) << '\n';
}

}  // namespace onephase
