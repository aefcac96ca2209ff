#include "schubart/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <numbers>

#include "schubart/claims.hpp"
#include "schubart/dynamics.hpp"
#include "schubart/error.hpp"
#include "schubart/homothetic.hpp"
#include "schubart/potential.hpp"
#include "schubart/shooting.hpp"
#include "schubart/wazewski.hpp"

namespace schubart::cli {

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json num_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// Output goes to a file, or to the caller's stream for "" and "-".
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      os_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw UsageError("cannot open " + path + " for writing");
    os_ = file_.get();
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_ = nullptr;
};

struct Range {
  double a = 0, b = 0;
  int n = 0;
  double at(int k) const { return n == 1 ? a : a + (b - a) * k / (n - 1); }
};

Range parse_range(const std::string& text, const char* flag) {
  Range r;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%d%c", &r.a, &r.b, &r.n, &tail) != 3 || r.n < 1)
    throw UsageError(std::string(flag) + " expects a:b:n");
  return r;
}

void require_mass(double m) {
  if (!(m > 0 && m < 1)) throw UsageError("--m must lie in (0, 1)");
}

void require_tol(double tol) {
  if (!(tol > 0 && tol < 1)) throw UsageError("--tol must lie in (0, 1)");
}

IntegratorConfig integrator_config(const RunConfig& cfg) {
  IntegratorConfig ic;
  ic.rel_tol = cfg.tol;
  ic.abs_tol = cfg.tol;
  return ic;
}

json config_object(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["m"] = c.m;
  j["h"] = c.h;
  if (c.command == "simulate") {
    j["r0"] = c.r0;
    j["u0"] = c.u0;
    j["nu0"] = c.nu0;
    j["gamma_from_energy"] = c.gamma_from_energy;
    if (!c.gamma_from_energy) j["gamma"] = c.gamma0;
    j["until"] = c.until;
  }
  if (c.command == "simulate" || c.command == "shoot" || c.command == "wazewski") j["tol"] = c.tol;
  if (c.command == "shoot") j["scan"] = c.scan;
  if (c.command == "wazewski") {
    j["scan"] = c.scan;
    j["scan_r0"] = c.scan_r0;
  }
  if (c.command == "homothetic") {
    j["scan_m"] = c.scan_m;
    j["profile"] = c.profile;
  }
  if (c.command == "claims") {
    j["grid"] = c.grid;
    j["u0"] = c.claim_u0;
    j["scan_m"] = c.scan_m;
  }
  if (c.command == "zvc") {
    j["grid"] = c.grid;
    j["region"] = c.region;
  }
  return j;
}

void header(std::ostream& os, const RunConfig& cfg) { os << "# " << config_json(cfg) << '\n'; }

const char* kTrajectoryColumns = "sigma,t_phys,r,nu,u,gamma,theta,x1,x2,phi1,phi2,phi3,energy_residual";

void trajectory_row(std::ostream& os, const TrajectorySample& s, const MassContext& ctx) {
  const auto& st = s.state;
  const auto js = regularized_configuration(st.r, st.u, ctx);
  const auto ang = jacobi_to_angles(js, ctx);
  os << num(s.sigma) << ',' << num(s.t_phys) << ',' << num(st.r) << ',' << num(st.nu) << ',' << num(st.u) << ','
     << num(st.gamma) << ',' << num(ctx.theta_star * std::sin(st.u)) << ',' << num(js.x1) << ',' << num(js.x2) << ','
     << num(ang.phi1) << ',' << num(ang.phi2) << ',' << num(ang.phi3) << ',' << num(s.energy_residual) << '\n';
}

std::vector<EventSpec> parse_until(const std::string& text, IntegratorConfig& ic) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw UsageError("--until expects kind=value, e.g. u=1.5707963267948966");
  std::string kind = text.substr(0, eq);
  int direction = 0;
  if (kind.back() == '+' || kind.back() == '-') {
    direction = kind.back() == '+' ? 1 : -1;
    kind.pop_back();
  }
  double value = 0;
  try {
    std::size_t used = 0;
    value = std::stod(text.substr(eq + 1), &used);
    if (used != text.size() - eq - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw UsageError("--until value is not a number");
  }
  if (kind == "sigma") {
    if (!(value > 0)) throw UsageError("--until sigma must be positive");
    ic.sigma_max = value;
    return {};
  }
  try {
    return {EventSpec{parse_event_kind(kind), value, direction, true}};
  } catch (const Error&) {
    throw UsageError("--until kind must be one of sigma, u, nu, r, gamma");
  }
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  require_mass(cfg.m);
  require_tol(cfg.tol);
  if (!cfg.has_r0) throw UsageError("simulate needs --r0");
  IntegratorConfig ic = integrator_config(cfg);
  const auto events = parse_until(cfg.until, ic);
  const auto ctx = build_context(cfg.m);
  const EnergyLevel e{cfg.h};
  RegularizedState s0{cfg.r0, cfg.nu0, cfg.u0, cfg.gamma0};
  if (cfg.gamma_from_energy) s0.gamma = gamma_from_energy(cfg.r0, cfg.nu0, cfg.u0, ctx, e);
  const auto traj = integrate(s0, ctx, e, ic, events);

  Sink sink(cfg.out, out);
  header(*sink, cfg);
  *sink << kTrajectoryColumns << '\n';
  for (const auto& s : traj.samples) trajectory_row(*sink, s, ctx);
  return kExitOk;
}

int cmd_shoot(const RunConfig& cfg, std::ostream& out) {
  require_mass(cfg.m);
  require_tol(cfg.tol);
  if (!(cfg.h <= -1)) throw UsageError("shoot needs --h <= -1");
  const auto ctx = build_context(cfg.m);
  const EnergyLevel e{cfg.h};
  ShootConfig sc;
  sc.integrator = integrator_config(cfg);
  if (cfg.scan > 0) sc.scan_points = cfg.scan;
  const auto q = bracket_and_bisect(sc, ctx, e);
  const auto orbit = assemble_period(q, ctx, e, sc.integrator);

  {
    Sink sink(cfg.out.empty() ? std::string("orbit.csv") : cfg.out, out);
    header(*sink, cfg);
    *sink << kTrajectoryColumns << '\n';
    for (const auto& s : orbit.samples) trajectory_row(*sink, s, ctx);
  }

  json rep;
  rep["config"] = config_object(cfg);
  rep["r0"] = q.r0;
  rep["gamma0"] = q.gamma0;
  rep["r1"] = q.r1;
  rep["gamma1"] = q.gamma1;
  rep["exit_nu"] = q.exit_nu;
  rep["sigma_period"] = orbit.sigma_period;
  rep["t_period"] = orbit.t_period;
  rep["sigma_period_reintegrated"] = orbit.sigma_period_reintegrated;
  rep["t_period_reintegrated"] = orbit.t_period_reintegrated;
  rep["closure_error"] = orbit.closure_error;
  rep["closure_components"] = orbit.closure_components;
  rep["half_mismatch"] = orbit.half_mismatch;
  rep["max_energy_residual"] = orbit.reintegrated.max_energy_residual;
  rep["bracket"] = {q.bracket_lo, q.bracket_hi};
  rep["polished"] = q.polished;
  json trace = json::array();
  for (const auto& b : q.trace) {
    trace.push_back({{"lo", b.lo},
                     {"hi", b.hi},
                     {"mid", b.mid},
                     {"face", b.face ? json(to_string(*b.face)) : json(nullptr)},
                     {"exit_nu", b.exit_nu},
                     {"exit_u", b.exit_u}});
  }
  rep["bisection_trace"] = trace;
  Sink sink(cfg.report.empty() ? std::string("report.json") : cfg.report, out);
  *sink << rep.dump(2) << '\n';
  return kExitOk;
}

int cmd_wazewski(const RunConfig& cfg, std::ostream& out) {
  require_mass(cfg.m);
  require_tol(cfg.tol);
  if (!(cfg.h < 0)) throw UsageError("wazewski needs --h < 0");
  const auto ctx = build_context(cfg.m);
  const EnergyLevel e{cfg.h};
  IntegratorConfig ic = integrator_config(cfg);
  ic.record_samples = false;

  std::vector<ScanCell> cells;
  if (!cfg.scan_r0.empty()) {
    const auto rg = parse_range(cfg.scan_r0, "--scan-r0");
    const double rh = hill_radius(ctx, e);
    if (!(rg.a > 0 && rg.b < rh && rg.a <= rg.b))
      throw UsageError("--scan-r0 must lie inside (0, " + num(rh) + ")");
    for (int k = 0; k < rg.n; ++k) {
      const double r0 = rg.at(k);
      cells.push_back({r0, exit_map(r0, ctx, e, ic).record});
    }
  } else {
    cells = scan_exit_faces(cfg.scan > 0 ? cfg.scan : 200, ctx, e, ic);
  }

  Sink sink(cfg.out, out);
  header(*sink, cfg);
  *sink << "r0,face,exit_r,exit_nu,exit_u,exit_gamma,sigma\n";
  for (const auto& c : cells) {
    *sink << num(c.r0) << ',';
    if (c.exit) {
      const auto& x = c.exit->exit_state;
      *sink << to_string(c.exit->face) << ',' << num(x.r) << ',' << num(x.nu) << ',' << num(x.u) << ','
            << num(x.gamma) << ',' << num(c.exit->exit_sigma) << '\n';
    } else {
      *sink << "none,,,,,\n";
    }
  }
  return kExitOk;
}

int cmd_homothetic(const RunConfig& cfg, std::ostream& out) {
  std::vector<double> masses;
  if (!cfg.scan_m.empty()) {
    const auto rg = parse_range(cfg.scan_m, "--scan-m");
    for (int k = 0; k < rg.n; ++k) masses.push_back(rg.at(k));
  } else {
    masses.push_back(cfg.m);
  }
  for (double m : masses) require_mass(m);

  Sink sink(cfg.out, out);
  header(*sink, cfg);
  *sink << "m,h,regime,x1_eq,h0,motion\n";
  for (double m : masses) {
    const auto t = classify_trichotomy(m, cfg.h);
    *sink << num(m) << ',' << num(cfg.h) << ',' << to_string(t.regime) << ',' << (t.x1_eq ? num(*t.x1_eq) : "")
          << ',' << (t.h0 ? num(*t.h0) : "") << ',' << to_string(t.motion) << '\n';
  }

  if (!cfg.profile.empty()) {
    Sink prof(cfg.profile, out);
    header(*prof, cfg);
    *prof << "m,x1,U_iso\n";
    constexpr int kSteps = 2000;
    for (double m : masses) {
      for (int k = 1; k < kSteps; ++k) {
        if (2 * k == kSteps) continue;  // x1 = pi, antipodal
        const double x = 2 * std::numbers::pi * k / kSteps;
        *prof << num(m) << ',' << num(x) << ',' << num(iso_potential(x, m)) << '\n';
      }
    }
  }
  return kExitOk;
}

json claim_json(const ClaimReport& rep) {
  json j;
  j["m"] = rep.m;
  j["grid"] = {{"nr", rep.grid.nr}, {"nu", rep.grid.nu}};
  j["u0"] = rep.u0;
  j["all_pass"] = rep.all_pass;
  json arr = json::array();
  for (const auto& c : rep.claims) {
    json cj;
    cj["id"] = c.id;
    cj["status"] = to_string(c.status);
    cj["worst_margin"] = num_json(c.worst_margin);
    cj["worst_r"] = c.worst_r;
    cj["worst_u"] = c.worst_u;
    json consts = json::object();
    for (const auto& v : c.constants) consts[v.name] = num_json(v.value);
    cj["constants"] = consts;
    if (!c.curve.empty()) {
      json curve = json::array();
      for (const auto& [r, u] : c.curve) curve.push_back({r, u});
      cj["curve"] = curve;
    }
    cj["detail"] = c.detail;
    arr.push_back(cj);
  }
  j["claims"] = arr;
  return j;
}

int cmd_claims(const RunConfig& cfg, std::ostream& out) {
  ClaimGrid grid;
  if (cfg.grid != 0) {
    if (cfg.grid < 3) throw UsageError("--grid must be at least 3");
    grid = {cfg.grid, cfg.grid};
  }
  if (!(cfg.claim_u0 > 0 && cfg.claim_u0 < 0.5 * std::numbers::pi)) throw UsageError("--u0 must lie in (0, pi/2)");
  std::vector<double> masses;
  if (!cfg.scan_m.empty()) {
    const auto rg = parse_range(cfg.scan_m, "--scan-m");
    for (int k = 0; k < rg.n; ++k) masses.push_back(rg.at(k));
  } else {
    masses.push_back(cfg.m);
  }
  for (double m : masses) require_mass(m);

  json doc;
  doc["config"] = config_object(cfg);
  bool all = true;
  json reports = json::array();
  for (double m : masses) {
    const auto rep = verify_all_claims(build_context(m), grid, cfg.claim_u0);
    all = all && rep.all_pass;
    reports.push_back(claim_json(rep));
  }
  doc["all_pass"] = all;
  doc["reports"] = reports;
  Sink sink(cfg.out, out);
  *sink << doc.dump(2) << '\n';
  return kExitOk;
}

int cmd_zvc(const RunConfig& cfg, std::ostream& out) {
  require_mass(cfg.m);
  Region region;
  try {
    region = parse_region(cfg.region);
  } catch (const Error&) {
    throw UsageError("--region must be I, II, III or IV");
  }
  GridSpec grid;
  if (cfg.grid != 0) {
    if (cfg.grid < 2) throw UsageError("--grid must be at least 2");
    grid = {cfg.grid, cfg.grid};
  }
  const auto ctx = build_context(cfg.m);
  const auto lines = zero_velocity_curve(cfg.h, region, grid, ctx);
  Sink sink(cfg.out, out);
  header(*sink, cfg);
  *sink << "region,polyline_id,x1,x2\n";
  for (std::size_t id = 0; id < lines.size(); ++id)
    for (const auto& p : lines[id].points)
      *sink << to_string(lines[id].region) << ',' << id << ',' << num(p.x1) << ',' << num(p.x2) << '\n';
  return kExitOk;
}

int cmd_linearize(const RunConfig& cfg, std::ostream& out) {
  require_mass(cfg.m);
  const auto ctx = build_context(cfg.m);
  const auto eq = linearize_P(ctx, EnergyLevel{cfg.h});
  auto matrix = [](const Eigen::Matrix3d& a) {
    json rows = json::array();
    for (int i = 0; i < 3; ++i) rows.push_back({a(i, 0), a(i, 1), a(i, 2)});
    return rows;
  };
  json j;
  j["config"] = config_object(cfg);
  j["P"] = {eq.P.r, eq.P.nu, eq.P.u, eq.P.gamma};
  j["rU_theta_theta"] = eq.rU_theta_theta;
  j["rU_theta_theta_fd"] = eq.rU_theta_theta_fd;
  j["jacobian"] = matrix(eq.jacobian);
  j["jacobian_fd"] = matrix(eq.jacobian_fd);
  j["max_entry_discrepancy"] = eq.max_entry_discrepancy;
  j["eigenvalues"] = eq.eigenvalues;
  j["eigenvalues_fd"] = eq.eigenvalues_fd;
  json vecs = json::array();
  for (const auto& v : eq.eigenvectors) vecs.push_back({v(0), v(1), v(2)});
  j["eigenvectors"] = vecs;
  Sink sink(cfg.out, out);
  *sink << j.dump(2) << '\n';
  return kExitOk;
}

// Loads --config before the command line so explicit flags win.
void apply_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception&) {
    throw UsageError("config " + path + " is not valid JSON");
  }
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  const std::map<std::string, std::function<void(const json&)>> setters = {
      {"m", [&](const json& v) { cfg.m = v.get<double>(); }},
      {"h", [&](const json& v) { cfg.h = v.get<double>(); }},
      {"r0",
       [&](const json& v) {
         cfg.r0 = v.get<double>();
         cfg.has_r0 = true;
       }},
      {"u0", [&](const json& v) { cfg.u0 = cfg.claim_u0 = v.get<double>(); }},
      {"nu0", [&](const json& v) { cfg.nu0 = v.get<double>(); }},
      {"gamma", [&](const json& v) { cfg.gamma0 = v.get<double>(); }},
      {"gamma_from_energy", [&](const json& v) { cfg.gamma_from_energy = v.get<bool>(); }},
      {"until", [&](const json& v) { cfg.until = v.get<std::string>(); }},
      {"tol", [&](const json& v) { cfg.tol = v.get<double>(); }},
      {"grid", [&](const json& v) { cfg.grid = v.get<int>(); }},
      {"scan", [&](const json& v) { cfg.scan = v.get<int>(); }},
      {"scan_r0", [&](const json& v) { cfg.scan_r0 = v.get<std::string>(); }},
      {"scan_m", [&](const json& v) { cfg.scan_m = v.get<std::string>(); }},
      {"out", [&](const json& v) { cfg.out = v.get<std::string>(); }},
      {"report", [&](const json& v) { cfg.report = v.get<std::string>(); }},
      {"profile", [&](const json& v) { cfg.profile = v.get<std::string>(); }},
      {"region", [&](const json& v) { cfg.region = v.get<std::string>(); }},
  };
  for (const auto& [key, value] : j.items()) {
    if (key == "command") continue;
    const auto it = setters.find(key);
    if (it == setters.end()) throw UsageError("unknown config key " + key);
    try {
      it->second(value);
    } catch (const json::exception&) {
      throw UsageError("config key " + key + " has the wrong type");
    }
  }
}

}  // namespace

std::string config_json(const RunConfig& cfg) { return config_object(cfg).dump(); }

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    for (int i = 1; i + 1 < argc; ++i)
      if (std::string(argv[i]) == "--config") apply_config_file(argv[i + 1], cfg);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  CLI::App app{"Regularized three-body problem on the circle and the Schubart orbit"};
  // --h is the energy, so help is long-form only.
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);
  std::string config_path;
  auto common = [&](CLI::App* sub) {
    sub->set_help_flag("--help", "print help");
    sub->add_option("--config", config_path, "JSON file with option values");
    sub->add_option("--m", cfg.m, "mass of the middle body");
    sub->add_option("--h", cfg.h, "energy level");
    sub->add_option("--out", cfg.out, "output path, '-' for stdout");
  };

  auto* sim = app.add_subcommand("simulate", "integrate the regularized flow");
  common(sim);
  sim->add_option_function<double>("--r0", [&](double v) {
    cfg.r0 = v;
    cfg.has_r0 = true;
  });
  sim->add_option("--u0", cfg.u0);
  sim->add_option("--nu0", cfg.nu0);
  sim->add_option("--gamma", cfg.gamma0);
  sim->add_flag("--gamma-from-energy", cfg.gamma_from_energy);
  sim->add_option("--until", cfg.until, "sigma=<s> or <u|nu|r|gamma>[+|-]=<value>");
  sim->add_option("--tol", cfg.tol);

  auto* shoot = app.add_subcommand("shoot", "find the Schubart orbit");
  common(shoot);
  shoot->add_option("--scan", cfg.scan, "scan points used to bracket the face change");
  shoot->add_option("--report", cfg.report);
  shoot->add_option("--tol", cfg.tol);

  auto* waz = app.add_subcommand("wazewski", "exit faces along the shooting segment");
  common(waz);
  waz->add_option("--scan", cfg.scan);
  waz->add_option("--scan-r0", cfg.scan_r0, "a:b:n");
  waz->add_option("--tol", cfg.tol);

  auto* homo = app.add_subcommand("homothetic", "isosceles trichotomy table");
  common(homo);
  homo->add_option("--scan-m", cfg.scan_m, "a:b:n");
  homo->add_option("--profile", cfg.profile, "potential profile CSV");

  auto* cl = app.add_subcommand("claims", "verify the six claims");
  common(cl);
  cl->add_option("--grid", cfg.grid);
  cl->add_option("--u0", cfg.claim_u0, "Claim 5 cutoff");
  cl->add_option("--scan-m", cfg.scan_m, "a:b:n");

  auto* zvc = app.add_subcommand("zvc", "zero-velocity curve");
  common(zvc);
  zvc->add_option("--grid", cfg.grid);
  zvc->add_option("--region", cfg.region);

  auto* lin = app.add_subcommand("linearize", "linearization at the equilibrium P");
  common(lin);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    std::string msg = e.what();
    for (auto& ch : msg)
      if (ch == '\n') ch = ' ';
    err << "usage error: " << msg << '\n';
    return kExitUsage;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  const std::map<std::string, int (*)(const RunConfig&, std::ostream&)> dispatch = {
      {"simulate", cmd_simulate}, {"shoot", cmd_shoot},   {"wazewski", cmd_wazewski}, {"homothetic", cmd_homothetic},
      {"claims", cmd_claims},     {"zvc", cmd_zvc},       {"linearize", cmd_linearize},
  };
  try {
    return dispatch.at(cfg.command)(cfg, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("schubart");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace schubart::cli
