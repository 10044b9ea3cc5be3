#pragma once

#include <vector>

#include "onephase/grid.hpp"

// Parabolic semiflow du/dt = lap u - F_eps'(u)/2 with the mixed boundary
// conditions of the cylinder: energy-decay monitoring, steady-state
// detection, and the comparison/monotonicity checks.

namespace onephase {

enum class Scheme { explicit_euler, imex };

struct FlowConfig {
  double dt = 0.0;          // 0 = automatic stable step
  Scheme scheme = Scheme::imex;
  double steady_tol = 0.0;  // 0 = 1e-10 * a^{n-1}
  long max_steps = 1000000;
  int check_every = 50;     // residual/energy cadence in relax()
};

struct FlowReport {
  std::vector<double> times, energies, residuals;
  enum class Termination { steady, t_max } terminated_by = Termination::t_max;
  long steps = 0;
  double dt = 0.0;
};

// largest step honoring the explicit stability bounds and the discrete
// maximum principle (dt * diag <= 1); imex drops the eps^2 reaction cap
double stable_dt(const AxiGrid& grid, Scheme scheme);
double default_steady_tol(const AxiGrid& grid);
// validates scheme invariants; returns the step actually used
double resolve_dt(const AxiGrid& grid, const FlowConfig& cfg);

// one time step; boundary rows re-imposed afterwards
Field step(const Field& u, const BoundaryData& bd, const FlowConfig& cfg);
// in-place variant used by the loops (scratch must match the grid)
void step_inplace(Field& u, Field& scratch, const BoundaryData& bd, double dt, Scheme scheme);

// iterate until int |lap u - F'/2|^2 r^{n-2} < steady_tol or max_steps;
// aborts with a diagnostic when the energy rises beyond 1e-10 * E0
std::pair<Field, FlowReport> relax(const Field& u0, const BoundaryData& bd,
                                   const FlowConfig& cfg);

// flows both states n_steps and returns min over nodes/steps of (ub - ua)
double check_ordering(const Field& ua, const Field& ub, const BoundaryData& bd,
                      const FlowConfig& cfg, int n_steps);

// one-sided interior differences: (min dz u, max dr u)
std::pair<double, double> check_monotone(const Field& u);

// Initial state above u1 with a near-vertical nodal set: the heteroclinic
// profile of the signed distance to the wall-side catenoid through the
// corner (a, z_cat) with its neck on the bottom edge, blended with a lifted
// wall profile so the Dirichlet data is met. Energy is reported by the
// caller, not assumed.
Field build_u2_seed(const Field& u1, const BoundaryData& bd, const HeteroclinicProfile& profile);

// the two corner catenoid parameters: sigma * zbar_1(a/sigma) = z_cat has a
// small root (~the pass) and a large root (the wall film); returns the large
double wall_catenoid_sigma(const AxiGrid& grid);

}  // namespace onephase
