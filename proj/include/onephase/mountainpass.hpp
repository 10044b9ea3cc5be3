#pragma once

#include <vector>

#include "onephase/flow.hpp"
#include "onephase/grid.hpp"

// Monotone path family joining the two steady states, path flow, and the
// minimax level c* with its pass state.

namespace onephase {

struct PathFamily {
  std::vector<double> s;       // m+1 parameters, 0 = u1 end, 1 = u2 end
  std::vector<Field> members;  // pointwise nondecreasing in s

  int segments() const { return static_cast<int>(s.size()) - 1; }
};

struct MinimaxConfig {
  int members = 33;            // path segments (members + 1 fields)
  int rounds = 40;
  double round_time = 0.12;    // flow time per round
  double refine_time = 0.03;   // polish time for freshly interpolated members
  double plateau_tol = 0.0;    // 0 = 1e-6 * a^{n-1}
  FlowConfig flow;
};

struct MinimaxResult {
  double c_star = 0.0;
  double argmax_s = 0.0;
  Field pass_state;
  std::vector<std::pair<int, double>> history;  // (round, best max-energy)
  std::vector<double> final_energies;
  double e_u1 = 0.0, e_u2 = 0.0;
};

// Members sweep the catenoid family z = sigma*zbar_1(r/sigma) + d(sigma)
// pinned at the corner (a, z_cat): flat disc (sigma -> 0) through the
// neck-on-bottom pass catenoid (sigma = k) to the wall film, then a convex
// blend into u2. Each raw member is the heteroclinic profile of the signed
// Euclidean distance to its curve, clipped between u1 and u2 (which forces
// the Dirichlet data exactly).
PathFamily build_path(const Field& u1, const Field& u2, int m, double k, const AxiGrid& grid,
                      const HeteroclinicProfile& profile);

// flows every member for time T with the shared boundary data; order in s
// is re-checked afterwards (violation beyond -1e-10 is a scheme bug)
void flow_path(PathFamily& path, const BoundaryData& bd, const FlowConfig& cfg, double T);

// alternating flow blocks and s-refinement concentrated at the running
// argmax; c* is the running minimum of the path max-energy (the minimax
// over the flow-generated path set), so the history is non-increasing
MinimaxResult minimax(PathFamily path, const BoundaryData& bd, const MinimaxConfig& cfg);

// elliptic residual of the pass state (how close to a critical point)
double pass_residual(const MinimaxResult& result);

// curve of the sweep: z = sigma*zbar_1(r/sigma) + d, d = z_cat - zbar_sigma(a)
std::vector<std::pair<double, double>> sweep_curve(const AxiGrid& grid, double sigma,
                                                   int n_points = 600);

std::vector<double> path_energies(const PathFamily& path);

// smallest pointwise gap between s-adjacent members (>= -1e-10 when ordered)
double path_order_gap(const PathFamily& path);

}  // namespace onephase
