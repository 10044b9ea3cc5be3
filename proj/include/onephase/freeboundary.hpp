#pragma once

#include <vector>

#include "onephase/grid.hpp"

// Level-set extraction of approximate free boundaries, asymptotic fitting
// (log law at n = 3, power law past it), gradient diagnostics, and the
// blow-up rescaling toward the one-phase solution.

namespace onephase {

enum class Side { plus, minus };

struct BoundaryCurve {
  Side side = Side::minus;
  double theta = 0.0;              // extraction level offset from +-1
  std::vector<double> r, z;        // profile-offset-corrected samples
  std::vector<double> z_raw;       // the +-(1-theta) crossings themselves
};

// Per column, the crossing of u = -(1-theta) (minus) or +(1-theta) (plus) by
// linear interpolation, then a shift of -/+ (1 - x_theta) with x_theta the
// profile abscissa of level 1-theta: estimates the sharp (eps -> 0) boundary.
// Columns without a crossing are omitted.
BoundaryCurve extract(const Field& u, Side side, double theta,
                      const HeteroclinicProfile& profile);

// raw crossings of u = level, no offset (level in (-1,1))
BoundaryCurve extract_level(const Field& u, double level);

struct AsymptoticFit {
  bool log_model = true;       // n = 3: z ~ k ln r + b; else z ~ c - c' r^{3-n}
  double k_hat = 0, b_hat = 0; // log model parameters
  double c_hat = 0, cprime_hat = 0, exponent = 0;
  double r_lo = 0, r_hi = 0;
  double rms = 0;
  int samples = 0;
};

AsymptoticFit fit_asymptote(const BoundaryCurve& curve, int n, double r_lo, double r_hi);

struct BlowupResult {
  double rho_k = 0;           // distance of the minus boundary to the origin
  double window_scale = 0;    // window = [0, window_scale]^2 in rescaled X
  int m = 0;                  // samples per direction
  std::vector<double> psi;    // (m+1)^2 values of (u(rho X)+1)/rho
  // |grad psi| along the rescaled mid-transition (nodal) line, where the
  // regularized profile carries the limit slope
  double grad_mean = 0, grad_min = 0, grad_max = 0;
  double max_interior_grad = 0;  // max |grad u| before rescaling
  std::vector<double> boundary_r, boundary_z;  // rescaled minus boundary

  double psi_at(int i, int j) const { return psi[i * (m + 1) + j]; }
  double hx() const { return window_scale / m; }
};

BlowupResult blowup(const Field& u, double window_scale, const HeteroclinicProfile& profile,
                    int m = 200);

struct ShapeReport {
  double min_dz_psi = 0;      // over z > 0 (sign check of d_z)
  double max_dr_psi = 0;      // sign check of d_r
  double g_at_1 = 0;          // boundary height at unit distance (should be ~0)
  double gpr_max = 0;         // max |g'(r) r^{n-2}| over the window
  double gpr_first = 0, gpr_last = 0;  // window halves (bounded, no blow-up)
};

ShapeReport theorem_shape_checks(const BlowupResult& result, int n);

void write_curve_csv(const BoundaryCurve& curve, const std::string& path);

}  // namespace onephase
