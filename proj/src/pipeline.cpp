#include "onephase/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "onephase/catenoid.hpp"
#include "onephase/numerics.hpp"

namespace onephase {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <typename F>
StageSummary run_stage(PipelineReport& rep, const std::string& name, F&& body) {
  auto t0 = Clock::now();
  StageSummary s;
  s.name = name;
  try {
    body(s);
  } catch (const std::exception& e) {
    throw std::runtime_error("stage " + name + ": " + e.what());
  }
  s.seconds = seconds_since(t0);
  rep.stages.push_back(s);
  return s;
}

void write_profile_csv(const HeteroclinicProfile& profile, double e_val, double delta,
                       const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  nlohmann::json hdr;
  hdr["eps"] = profile.eps();
  hdr["t_eps"] = profile.t_eps();
  hdr["e_eps"] = e_val;
  hdr["delta_eps"] = delta;
  f << "# " << hdr.dump() << "\n";
  f << "x,H,Hp\n";
  f.precision(17);
  for (const auto& s : profile.samples()) f << s.x << ',' << s.h << ',' << s.hp << '\n';
}

}  // namespace

PipelineReport run_pipeline(const RunConfig& cfg) {
  validate(cfg);
  auto t_start = Clock::now();
  PipelineReport rep;
  rep.config = cfg;
  std::filesystem::create_directories(cfg.out_dir);
  auto out = [&](const std::string& name) {
    return (std::filesystem::path(cfg.out_dir) / name).string();
  };

  PotentialSpec pot = PotentialSpec::make(cfg.eps);
  HeteroclinicProfile profile;
  double e_line = 0, delta = 0;
  run_stage(rep, "profile", [&](StageSummary& s) {
    profile = heteroclinic_build(pot);
    e_line = e_eps(pot);
    delta = delta_eps(pot, profile);
    write_profile_csv(profile, e_line, delta, out("profile.csv"));
    s.values = {{"t_eps", profile.t_eps()}, {"e_eps", e_line}, {"delta_eps", delta}};
  });

  AxiGrid grid;
  BoundaryData omega;
  run_stage(rep, "domain", [&](StageSummary& s) {
    grid = build_domain(cfg.n, cfg.a, cfg.k, cfg.eps, cfg.Nr, cfg.Nz, pot, profile);
    if (grid.hz > cfg.eps / 4.0)
      std::cerr << "[pipeline] note: hz = " << grid.hz << " above the eps/4 resolution target\n";
    SubsolutionProfile w = subsolution_build(pot, profile, grid.z_cat - cfg.eps);
    omega = boundary_omega(grid, w);
    s.values = {{"b_eps", grid.b_eps}, {"z_cat", grid.z_cat}, {"hr", grid.hr}, {"hz", grid.hz}};
  });

  FlowConfig fcfg = cfg.flow_config();
  Field u1(grid), u2(grid);
  run_stage(rep, "relax_u1", [&](StageSummary& s) {
    auto [st, repo] = relax(omega_extension(grid, omega), omega, fcfg);
    u1 = st;
    write_field(u1, out("u1.bin"));
    s.values = {{"energy", energy(u1)},
                {"residual", repo.residuals.back()},
                {"steps", static_cast<double>(repo.steps)},
                {"steady", repo.terminated_by == FlowReport::Termination::steady ? 1.0 : 0.0}};
  });

  run_stage(rep, "relax_u2", [&](StageSummary& s) {
    Field seed = build_u2_seed(u1, omega, profile);
    double e_seed = energy(seed);
    double bound = 10.0 * cfg.k * cfg.a * std::log(cfg.a);
    rep.checks.push_back({"seed_energy <= 10 k a ln a", e_seed <= bound, e_seed, bound});
    auto [st, repo] = relax(seed, omega, fcfg);
    u2 = st;
    write_field(u2, out("u2.bin"));
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q < u1.v.size(); ++q)
      min_gap = std::min(min_gap, u2.v[q] - u1.v[q]);
    rep.checks.push_back({"u2 >= u1", min_gap >= -1e-12, min_gap, -1e-12});
    s.values = {{"seed_energy", e_seed},
                {"energy", energy(u2)},
                {"residual", repo.residuals.back()},
                {"steps", static_cast<double>(repo.steps)}};
  });

  MinimaxResult mr;
  run_stage(rep, "minimax", [&](StageSummary& s) {
    PathFamily path = build_path(u1, u2, cfg.path_members, cfg.k, grid, profile);
    auto e0 = path_energies(path);
    double emax0 = *std::max_element(e0.begin(), e0.end());
    mr = minimax(std::move(path), omega, cfg.minimax_config());
    write_field(mr.pass_state, out("pass.bin"));
    nlohmann::json hist = nlohmann::json::array();
    for (auto& [round, c] : mr.history) hist.push_back({{"round", round}, {"c_star", c}});
    nlohmann::json jj;
    jj["history"] = hist;
    jj["c_star"] = mr.c_star;
    jj["argmax_s"] = mr.argmax_s;
    jj["energies"] = mr.final_energies;
    std::ofstream f(out("minimax.json"));
    f << jj.dump(2) << '\n';
    rep.checks.push_back({"c* > max E(u_i)", mr.c_star > std::max(mr.e_u1, mr.e_u2), mr.c_star,
                          std::max(mr.e_u1, mr.e_u2)});
    s.values = {{"c_star", mr.c_star},
                {"initial_max_energy", emax0},
                {"argmax_s", mr.argmax_s},
                {"E_u1", mr.e_u1},
                {"E_u2", mr.e_u2},
                {"pass_residual", pass_residual(mr)}};
  });

  BoundaryCurve fminus;
  run_stage(rep, "extract", [&](StageSummary& s) {
    fminus = extract(mr.pass_state, Side::minus, 0.5 * cfg.eps, profile);
    write_curve_csv(fminus, out("fminus.csv"));
    auto H = mean_curvature(PlanarCurve::from_samples(fminus.r, fminus.z), cfg.n);
    double hmin = H.empty() ? 0.0 : *std::min_element(H.begin(), H.end());
    rep.checks.push_back({"mean curvature >= -0.05", hmin >= -0.05, hmin, -0.05});
    s.values = {{"samples", static_cast<double>(fminus.r.size())}, {"min_mean_curvature", hmin}};
  });

  run_stage(rep, "fit", [&](StageSummary& s) {
    AsymptoticFit fit = fit_asymptote(fminus, cfg.n, cfg.fit_window_lo * cfg.a,
                                      cfg.fit_window_hi * cfg.a);
    nlohmann::json jf;
    if (fit.log_model) {
      jf["model"] = "log";
      jf["k_hat"] = fit.k_hat;
      jf["b_hat"] = fit.b_hat;
      rep.checks.push_back(
          {"|k_hat - k|/k <= 0.15", std::abs(fit.k_hat - cfg.k) / cfg.k <= 0.15, fit.k_hat, cfg.k});
    } else {
      jf["model"] = "power";
      jf["c_hat"] = fit.c_hat;
      jf["cprime_hat"] = fit.cprime_hat;
      jf["exponent"] = fit.exponent;
    }
    jf["rms"] = fit.rms;
    jf["window"] = {fit.r_lo, fit.r_hi};
    std::ofstream f(out("fit.json"));
    f << jf.dump(2) << '\n';
    s.values = {{"rms", fit.rms},
                {"k_hat", fit.log_model ? fit.k_hat : fit.c_hat}};
  });

  run_stage(rep, "blowup", [&](StageSummary& s) {
    BlowupResult b = blowup(mr.pass_state, cfg.blowup_scale, profile);
    ShapeReport shape = theorem_shape_checks(b, cfg.n);
    rep.checks.push_back({"mean |grad psi| in [0.85,1.15]",
                          b.grad_mean >= 0.85 && b.grad_mean <= 1.15, b.grad_mean, 1.15});
    rep.checks.push_back(
        {"max interior |grad u| <= 1.05", b.max_interior_grad <= 1.05, b.max_interior_grad, 1.05});
    double htol = 2.0 * std::max(grid.hr, grid.hz) / b.rho_k;
    rep.checks.push_back({"g(1) ~ 0", std::abs(shape.g_at_1) <= htol, shape.g_at_1, htol});
    nlohmann::json jb;
    jb["rho_k"] = b.rho_k;
    jb["grad_mean"] = b.grad_mean;
    jb["grad_min"] = b.grad_min;
    jb["grad_max"] = b.grad_max;
    jb["max_interior_grad"] = b.max_interior_grad;
    jb["g_at_1"] = shape.g_at_1;
    jb["min_dz_psi"] = shape.min_dz_psi;
    jb["max_dr_psi"] = shape.max_dr_psi;
    jb["gpr_max"] = shape.gpr_max;
    std::ofstream f(out("blowup.json"));
    f << jb.dump(2) << '\n';
    s.values = {{"rho_k", b.rho_k}, {"grad_mean", b.grad_mean}};
  });

  rep.wall_seconds = seconds_since(t_start);
  emit_report(rep, out("report.json"));
  return rep;
}

}  // namespace onephase
