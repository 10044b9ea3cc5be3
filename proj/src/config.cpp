#include "onephase/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace onephase {

using nlohmann::json;

FlowConfig RunConfig::flow_config() const {
  FlowConfig f;
  f.dt = dt;
  f.scheme = (scheme == "explicit") ? Scheme::explicit_euler : Scheme::imex;
  f.steady_tol = steady_tol;
  f.max_steps = max_steps;
  return f;
}

MinimaxConfig RunConfig::minimax_config() const {
  MinimaxConfig m;
  m.members = path_members;
  m.rounds = minimax_rounds;
  m.round_time = round_time;
  m.flow = flow_config();
  return m;
}

namespace {

const char* kKeys[] = {"n", "k", "eps", "a", "Nr", "Nz", "scheme", "dt", "steady_tol",
                       "max_steps", "path_members", "minimax_rounds", "round_time",
                       "fit_window_lo", "fit_window_hi", "blowup_scale", "snapshot_every",
                       "out_dir"};

}  // namespace

RunConfig config_from_json_text(const std::string& text) {
  json j = json::parse(text);
  if (!j.is_object()) throw std::runtime_error("config: top level must be a JSON object");
  std::string unknown;
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* key : kKeys) known |= (it.key() == key);
    if (!known) unknown += (unknown.empty() ? "" : ", ") + it.key();
  }
  if (!unknown.empty()) throw std::runtime_error("config: unknown keys: " + unknown);
  RunConfig c;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("n", c.n);
  get("k", c.k);
  get("eps", c.eps);
  get("a", c.a);
  get("Nr", c.Nr);
  get("Nz", c.Nz);
  get("scheme", c.scheme);
  get("dt", c.dt);
  get("steady_tol", c.steady_tol);
  get("max_steps", c.max_steps);
  get("path_members", c.path_members);
  get("minimax_rounds", c.minimax_rounds);
  get("round_time", c.round_time);
  get("fit_window_lo", c.fit_window_lo);
  get("fit_window_hi", c.fit_window_hi);
  get("blowup_scale", c.blowup_scale);
  get("snapshot_every", c.snapshot_every);
  get("out_dir", c.out_dir);
  validate(c);
  return c;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("config: cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return config_from_json_text(ss.str());
}

void validate(const RunConfig& c) {
  std::string bad;
  auto flag = [&](bool ok, const std::string& what) {
    if (!ok) bad += (bad.empty() ? "" : "; ") + what;
  };
  flag(c.n >= 3, "n >= 3");
  flag(c.k > 0.0, "k > 0");
  flag(c.eps > 0.0 && c.eps <= 0.25, "eps in (0, 0.25]");
  flag(c.a > 2.0 * c.k, "a > 2k");
  flag(c.Nr >= 16 && c.Nz >= 16, "Nr, Nz >= 16");
  flag(c.dt >= 0.0, "dt >= 0");
  flag(c.steady_tol >= 0.0, "steady_tol >= 0");
  flag(c.max_steps > 0, "max_steps > 0");
  flag(c.path_members >= 4, "path_members >= 4");
  flag(c.minimax_rounds >= 1, "minimax_rounds >= 1");
  flag(c.round_time > 0.0, "round_time > 0");
  flag(c.fit_window_lo > 0.0 && c.fit_window_hi > c.fit_window_lo && c.fit_window_hi <= 0.8,
       "fit windows in (0, 0.8] of a, ordered");
  flag(c.blowup_scale > 1.0, "blowup_scale > 1");
  flag(c.scheme == "imex" || c.scheme == "explicit", "scheme imex|explicit");
  flag(c.snapshot_every >= 0, "snapshot_every >= 0");
  if (!bad.empty()) throw std::runtime_error("config: invalid fields: " + bad);
  // eps-resolution target hz <= eps/4 (the top height shrinks with delta_eps,
  // so use the k-catenoid height as the estimate); hz <= eps is a hard floor
  double b_est = c.k * std::acosh(std::max(c.a / c.k, 1.0 + 1e-9)) + 2.0;
  double hz = b_est / c.Nz;
  if (hz > c.eps)
    throw std::runtime_error("config: hz exceeds eps; the transition layer is unresolved");
}

std::string config_to_json_text(const RunConfig& c) {
  json j;
  j["n"] = c.n;
  j["k"] = c.k;
  j["eps"] = c.eps;
  j["a"] = c.a;
  j["Nr"] = c.Nr;
  j["Nz"] = c.Nz;
  j["scheme"] = c.scheme;
  j["dt"] = c.dt;
  j["steady_tol"] = c.steady_tol;
  j["max_steps"] = c.max_steps;
  j["path_members"] = c.path_members;
  j["minimax_rounds"] = c.minimax_rounds;
  j["round_time"] = c.round_time;
  j["fit_window_lo"] = c.fit_window_lo;
  j["fit_window_hi"] = c.fit_window_hi;
  j["blowup_scale"] = c.blowup_scale;
  j["snapshot_every"] = c.snapshot_every;
  j["out_dir"] = c.out_dir;
  return j.dump(2);
}

void emit_config(const RunConfig& cfg, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("config: cannot write " + path);
  f << config_to_json_text(cfg) << '\n';
}

bool PipelineReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

void emit_report(const PipelineReport& report, const std::string& path) {
  json j;
  j["config"] = json::parse(config_to_json_text(report.config));
  j["wall_seconds"] = report.wall_seconds;
  j["stages"] = json::array();
  for (const auto& s : report.stages) {
    json js;
    js["name"] = s.name;
    js["seconds"] = s.seconds;
    for (const auto& kv : s.values) js["values"][kv.first] = kv.second;
    j["stages"].push_back(js);
  }
  j["checks"] = json::array();
  for (const auto& c : report.checks) {
    json jc;
    jc["name"] = c.name;
    jc["pass"] = c.pass;
    jc["value"] = c.value;
    jc["bound"] = c.bound;
    j["checks"].push_back(jc);
  }
  j["all_pass"] = report.all_pass();
  std::ofstream f(path);
  if (!f) throw std::runtime_error("emit_report: cannot write " + path);
  f << j.dump(2) << '\n';
}

}  // namespace onephase
