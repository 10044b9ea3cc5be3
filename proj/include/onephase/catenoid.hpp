#pragma once

#include <functional>
#include <optional>
#include <vector>

// n-dimensional catenoid profiles, weighted area functionals, mean
// curvature, and the quadrature verifiers for the energy-comparison lemmas.

namespace onephase {

// Upper branch z(r) of the rotationally symmetric minimal graph
//   z''/(1+z'^2) + (n-2) z'/r = 0,
// generated for n > 3 from eta(s) = cosh((n-2)s) via
//   r = eta^{1/(n-2)},  z = int_0^s eta^{(3-n)/(n-2)}.
// "centered" fixes the neck radius (= scale); "asymptotic" (n > 3 only)
// fixes the height limit z(inf) = scale.
class Catenoid {
 public:
  enum class Convention { centered, asymptotic };

  Catenoid(int dim, double scale, Convention conv = Convention::centered);

  int dim() const { return dim_; }
  double scale() const { return scale_; }
  Convention convention() const { return conv_; }
  double neck_radius() const { return alpha_; }
  // height limit of the upper branch (n > 3 only)
  double asymptote() const;

  double z_of_r(double r) const;   // domain error below the neck
  double r_of_z(double z) const;   // z >= 0 branch
  double zprime(double r) const;   // dz/dr = 1/sqrt((r/alpha)^{2(n-2)} - 1)
  double zsecond(double r) const;

  // int_{r1}^{r2} sqrt(1+z'^2) r^{n-2} dr, via the cancellation-free split
  //   (r2^{n-1} - r1^{n-1})/(n-1) + excess(r2) - excess(r1).
  double weighted_area(double r1, double r2) const;
  // area excess over the flat-disc sweep: int_neck^r - r^{n-1}/(n-1)
  double area_excess(double r) const;

  // unit-catenoid constants: c_n = height limit, c'_n = coefficient of the
  // r^{3-n} approach (n > 3)
  static double unit_height(int dim);
  static double unit_tail_coeff(int dim);

 private:
  int dim_;
  double scale_;
  Convention conv_;
  double alpha_;  // neck radius of the underlying centered profile
};

// Planar curve z(r) on strictly increasing r-samples; optionally backed by
// analytic evaluators (then quadratures use the exact derivative).
struct PlanarCurve {
  std::vector<double> r, z;
  std::function<double(double)> fz, fzp;  // optional analytic value/derivative

  bool analytic() const { return static_cast<bool>(fzp); }
  static PlanarCurve from_samples(std::vector<double> r, std::vector<double> z);
  static PlanarCurve from_function(std::function<double(double)> fz,
                                   std::function<double(double)> fzp, double r1, double r2,
                                   int n_samples = 257);
};

// int_{r1}^{r2} sqrt(1+f'^2) r^{n-2} dr; derivative from the analytic
// evaluator when present, else from a monotone cubic interpolant.
double weighted_area(const PlanarCurve& curve, double r1, double r2, int n);

// divergence-form mean curvature (1/r^{n-2}) d/dr( r^{n-2} f' / sqrt(1+f'^2) )
// at interior samples; needs >= 5 samples.
std::vector<double> mean_curvature(const PlanarCurve& curve, int n);

// signed Euclidean distance from (r, z) to the polyline; positive above.
double polyline_signed_distance(const std::vector<double>& cr, const std::vector<double>& cz,
                                double r, double z);

// Lemma-bound verifiers. lhs_min is the minimum weighted area over a rich
// competitor family (catenoids + movable-knot splines, coordinate descent,
// >= 200 candidates), an upper bound for the true infimum; rhs is the
// lemma's explicit bound with its unspecified constant set to zero.
struct BoundCheck {
  double lhs_min = 0;
  double rhs = 0;
  int competitors = 0;
};

// curves on [r0,a] with xi(r0)=0, xi(a)=k*arccosh(a/k); n=3 weight
BoundCheck bound_e1(double r0, double a, double k);
// curves on [b,a] with xi(b)=kbar*ln b, xi(a)=k*ln a; n=3 weight
BoundCheck bound_y(double b, double a, double k, double kbar);
// monotone curves on [A,a] with xi(A)=kprime, xi(a)=k; r^{n-2} weight
BoundCheck bound_a2(double A, double a, double k, double kprime, int n);

// closed-form excess constant delta = (1 - (1/2)^{1/(n-2)}) / (2(n-2));
// the comparison lemma behind it needs n >= 4, the value exists for n >= 3.
double excess_delta(int n);

}  // namespace onephase
