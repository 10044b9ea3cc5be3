#pragma once

#include <string>
#include <vector>

#include "onephase/potential.hpp"

// Discretized cylinder Omega_a = [0,a] x [0,b_eps], the axisymmetric
// operators in conservative (flux) form, the weighted energy, and
// marching-squares level-set area.

namespace onephase {

struct AxiGrid {
  int n = 3;        // ambient dimension (radial weight r^{n-2})
  double a = 0;     // outer radius
  double k = 0;     // catenoid parameter of the boundary height
  double b_eps = 0; // top height = z_cat(a) + 2 + delta_eps
  double z_cat = 0; // catenoid height at r = a
  double delta = 0; // delta_eps
  int Nr = 0, Nz = 0;
  double hr = 0, hz = 0;
  PotentialSpec pot;

  // radial flux/volume factors of the conservative stencil
  std::vector<double> face_w;  // ((r_i + r_{i+1})/2)^{n-2}, i = 0..Nr-1
  std::vector<double> cell_v;  // int_{cell i} r^{n-2} dr, clamped to [0, a]

  double r(int i) const { return hr * i; }
  double z(int j) const { return hz * j; }
  int idx(int i, int j) const { return i * (Nz + 1) + j; }
  int num_nodes() const { return (Nr + 1) * (Nz + 1); }
};

AxiGrid build_domain(int n, double a, double k, double eps, int Nr, int Nz,
                     const PotentialSpec& pot, const HeteroclinicProfile& profile);

// scalar state on the grid nodes, |u| <= 1
struct Field {
  const AxiGrid* grid = nullptr;
  std::vector<double> v;

  Field() = default;
  explicit Field(const AxiGrid& g, double fill = 0.0)
      : grid(&g), v(static_cast<std::size_t>(g.num_nodes()), fill) {}
  double& at(int i, int j) { return v[grid->idx(i, j)]; }
  double at(int i, int j) const { return v[grid->idx(i, j)]; }
};

// Dirichlet data on L_a: the r = a column (wall) and z = b_eps row (top)
struct BoundaryData {
  std::vector<double> wall;  // size Nz+1
  std::vector<double> top;   // size Nr+1
};

// omega(r,z) = w_{eps, z_cat - eps}(z - z_cat); z-only, reaches 1 at the top
BoundaryData boundary_omega(const AxiGrid& grid, const SubsolutionProfile& w);

// field whose every column is the wall profile (the flow's initial state)
Field omega_extension(const AxiGrid& grid, const BoundaryData& omega);

void impose_boundary(Field& u, const BoundaryData& bd);

// residual operator L u = -lap_h u + F_eps'(u)/2; interior + Neumann edges,
// zero at Dirichlet nodes
Field apply_operator(const Field& u);
// linear part only (positive-definite discrete -Laplacian), for symmetry and
// scheme internals
Field apply_neg_laplacian(const Field& u);

// weighted inner product sum w_ij u v with the conservative cell volumes
// (the product in which apply_neg_laplacian is self-adjoint)
double weighted_inner(const Field& u, const Field& v);
// int |L u|^2 r^{n-2} over the interior (steady-state residual measure)
double residual_norm2(const Field& u);

// E(u) = int [ |grad u|^2 + F_eps(u) ] r^{n-2} dr dz, cell-midpoint rule;
// the angular factor is omitted so a flat interface carries a^{n-1} e/( n-1 )
double energy(const Field& u);

// marching-squares area of the level set {u = s}, segments weighted by
// r^{n-2} at their midpoints; 0 when the level set is empty
double level_area(const Field& u, double s);

// file formats: compact binary dump and CSV (r,z,u)
void write_field(const Field& u, const std::string& path);
Field read_field(const AxiGrid& grid, const std::string& path);
// reads just the header of a dump and rebuilds the grid (needs pot/profile)
AxiGrid read_field_header(const std::string& path, const PotentialSpec& pot,
                          const HeteroclinicProfile& profile);
void write_field_csv(const Field& u, const std::string& path);

}  // namespace onephase
