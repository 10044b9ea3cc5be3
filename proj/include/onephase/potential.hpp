#pragma once

#include <array>
#include <memory>
#include <vector>

// Regularized double-well potential family F_eps, its 1-D heteroclinic
// profile H_eps, the cubic-root constant delta_eps, the subsolution
// profile w_{eps,l} and the line energy constant e_eps.

namespace onephase {

// F_eps(s) = rho(s)*Fbar((s+1)/eps) + (1-rho(s))*Fbar((1-s)/eps) on [-1,1].
// Fbar is s^2 on [0,1/2], 1-exp(-s) past 1, joined by a quintic bridge that
// matches value/slope/curvature at both ends (monotone, concave past 3/4;
// both verified by dense sampling when the spec is built).
struct PotentialSpec {
  double eps = 0.0;
  std::array<double, 6> blend_knots{};  // quintic bridge coefficients on (1/2,1]
  std::array<double, 6> rho_poly{};     // degree-5 smoothstep used by the cutoff rho

  static PotentialSpec make(double eps);
};

double fbar_eval(double s);
double fbar_deriv(double s);
double rho_eval(double s);
double rho_deriv(double s);

double feps_eval(double s, const PotentialSpec& spec);
double feps_deriv(double s, const PotentialSpec& spec);

// 1-D heteroclinic connection H with H'' = F_eps'(H)/2, H(0)=0, H(+-inf)=+-1.
// Built by quadrature of the first integral H'^2 = F_eps(H); past t_eps
// (where H = 1 - eps/2) the profile is the exact exponential tail.
class HeteroclinicProfile {
 public:
  struct Sample {
    double x, h, hp;
  };

  double eps() const { return spec_.eps; }
  const PotentialSpec& spec() const { return spec_; }
  double t_eps() const { return t_eps_; }
  double tail_coeff() const { return tail_coeff_; }  // c_eps = (eps/2) e^{t_eps/eps}
  const std::vector<Sample>& samples() const { return samples_; }

  double value(double x) const;
  double deriv(double x) const;   // sqrt(F_eps(H))
  double second(double x) const;  // F_eps'(H)/2
  // abscissa with H = level, for level in (-1, 1)
  double x_of_level(double level) const;

 private:
  friend HeteroclinicProfile heteroclinic_build(const PotentialSpec&, double, int);
  PotentialSpec spec_;
  double t_eps_ = 0.0;
  double tail_coeff_ = 0.0;
  std::vector<Sample> samples_;
  std::vector<double> htab_, xtab_;  // x(H) table on [0, 1-eps/2]
};

HeteroclinicProfile heteroclinic_build(const PotentialSpec& spec, double x_max = 4.0,
                                       int n_samples = 2001);

// eps->0 limit of H_eps (clipped linear profile).
double limit_profile(double x);

// Unique small positive root of the junction cubic
//   H(2) + H'(2) d + H''(2) d^2/2 + (1-H(2))/eps^4 d^3 = 1,
// bracketed on (0, eps).
double delta_eps(const PotentialSpec& spec, const HeteroclinicProfile& profile);

// Piecewise C^2 subsolution w_{eps,l} on [-l-eps, 2+delta_eps]:
// quadratic on [-l-eps,-l], H_eps on [-l,2], the junction cubic on
// [2, 2+delta_eps] reaching exactly 1 at the right end.
class SubsolutionProfile {
 public:
  double eps() const { return profile_->eps(); }
  const PotentialSpec& spec() const { return profile_->spec(); }
  const HeteroclinicProfile& profile() const { return *profile_; }
  double l() const { return l_; }
  double delta() const { return delta_; }
  double x_min() const { return -l_ - profile_->eps(); }
  double x_max() const { return 2.0 + delta_; }

  double value(double x) const;
  double deriv(double x) const;
  double second(double x) const;

 private:
  friend SubsolutionProfile subsolution_build(const PotentialSpec&, const HeteroclinicProfile&,
                                              double);
  std::shared_ptr<const HeteroclinicProfile> profile_;
  double l_ = 0.0, delta_ = 0.0;
  double hl_, hpl_, hppl_;   // H, H', H'' at l
  double h2_, hp2_, hpp2_;   // H, H', H'' at 2
  double cub_;               // (1 - H(2)) / eps^4
};

SubsolutionProfile subsolution_build(const PotentialSpec& spec, const HeteroclinicProfile& profile,
                                     double l);

// -w'' + F_eps'(w)/2 at x (<= 0 by Lemma-type subsolution property).
double subsolution_residual(const SubsolutionProfile& w, double x);

// e_eps = 2 * int_{-1}^{1} sqrt(F_eps), adaptive quadrature (rel tol 1e-10).
double e_eps(const PotentialSpec& spec);

// Independent route: int_R [H'^2 + F_eps(H)] dx over the profile (table part
// by quadrature, tails in closed form). Agrees with e_eps via the first
// integral.
double heteroclinic_line_energy(const HeteroclinicProfile& profile);

}  // namespace onephase
