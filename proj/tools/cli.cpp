#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "ductflow/characteristics.hpp"
#include "ductflow/csv.hpp"
#include "ductflow/diagnostics.hpp"

namespace ductflow::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& where) {
  try {
    std::size_t idx = 0;
    const double x = std::stod(v, &idx);
    if (idx != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("bad number for " + where + ": '" + v + "'");
  }
}

int parse_int(const std::string& v, const std::string& where) {
  try {
    std::size_t idx = 0;
    const int x = std::stoi(v, &idx);
    if (idx != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("bad integer for " + where + ": '" + v + "'");
  }
}

std::vector<double> parse_list(const std::string& v, const std::string& where) {
  std::vector<double> out;
  std::istringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(item, where));
  }
  if (out.empty()) throw ConfigError("empty list for " + where);
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double require_gamma(const RunConfig& c) {
  if (!c.gamma) throw ConfigError("gas.gamma is not set");
  return *c.gamma;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig c;
  using Setter = std::function<void(RunConfig&, const std::string&)>;
  static const std::map<std::string, Setter> setters = {
      {"gas.gamma", [](RunConfig& c, const std::string& v) { c.gamma = parse_double(v, "gas.gamma"); }},
      {"gas.nu", [](RunConfig& c, const std::string& v) { c.nu = parse_double(v, "gas.nu"); }},
      {"gas.eta", [](RunConfig& c, const std::string& v) { c.eta = parse_double(v, "gas.eta"); }},
      {"profile.preset", [](RunConfig& c, const std::string& v) { c.profile_preset = v; }},
      {"profile.n", [](RunConfig& c, const std::string& v) { c.spherical_dim = parse_int(v, "profile.n"); }},
      {"profile.table", [](RunConfig& c, const std::string& v) { c.profile_table = v; }},
      {"domain.x_begin", [](RunConfig& c, const std::string& v) { c.x_begin = parse_double(v, "domain.x_begin"); }},
      {"domain.x_end", [](RunConfig& c, const std::string& v) { c.x_end = parse_double(v, "domain.x_end"); }},
      {"grid.n_cells", [](RunConfig& c, const std::string& v) { c.n_cells = parse_int(v, "grid.n_cells"); }},
      {"grid.dx", [](RunConfig& c, const std::string& v) { c.dx = parse_double(v, "grid.dx"); }},
      {"grid.cfl", [](RunConfig& c, const std::string& v) { c.cfl = parse_double(v, "grid.cfl"); }},
      {"grid.t_final", [](RunConfig& c, const std::string& v) { c.t_final = parse_double(v, "grid.t_final"); }},
      {"grid.snapshot_stride", [](RunConfig& c, const std::string& v) { c.snapshot_stride = parse_int(v, "grid.snapshot_stride"); }},
      {"grid.weno_epsilon", [](RunConfig& c, const std::string& v) { c.weno_epsilon = parse_double(v, "grid.weno_epsilon"); }},
      {"grid.outflow_order", [](RunConfig& c, const std::string& v) { c.outflow_order = parse_int(v, "grid.outflow_order"); }},
      {"data.preset", [](RunConfig& c, const std::string& v) { c.data_preset = v; }},
      {"data.s0", [](RunConfig& c, const std::string& v) { c.s0 = parse_double(v, "data.s0"); }},
      {"data.r0", [](RunConfig& c, const std::string& v) { c.r0 = parse_double(v, "data.r0"); }},
      {"data.s0_slope", [](RunConfig& c, const std::string& v) { c.s0_slope = parse_double(v, "data.s0_slope"); }},
      {"data.r0_slope", [](RunConfig& c, const std::string& v) { c.r0_slope = parse_double(v, "data.r0_slope"); }},
      {"data.initial_table", [](RunConfig& c, const std::string& v) { c.initial_table = v; }},
      {"data.boundary_table", [](RunConfig& c, const std::string& v) { c.boundary_table = v; }},
      {"sweep.nu_list", [](RunConfig& c, const std::string& v) { c.nu_list = parse_list(v, "sweep.nu_list"); }},
      {"validate.c_xi", [](RunConfig& c, const std::string& v) { c.c_xi = parse_double(v, "validate.c_xi"); }},
      {"validate.delta", [](RunConfig& c, const std::string& v) { c.k1_delta = parse_double(v, "validate.delta"); }},
      {"validate.c1_norm_limit", [](RunConfig& c, const std::string& v) { c.c1_norm_limit = parse_double(v, "validate.c1_norm_limit"); }},
      {"validate.grid_n", [](RunConfig& c, const std::string& v) { c.grid_n = parse_int(v, "validate.grid_n"); }},
      {"validate.t_horizon", [](RunConfig& c, const std::string& v) { c.t_horizon = parse_double(v, "validate.t_horizon"); }},
      {"validate.c_light", [](RunConfig& c, const std::string& v) { c.c_light = parse_double(v, "validate.c_light"); }},
      {"validate.compat_tol", [](RunConfig& c, const std::string& v) { c.compat_tol = parse_double(v, "validate.compat_tol"); }},
      {"diagnostics.probes", [](RunConfig& c, const std::string& v) { c.probes = parse_list(v, "diagnostics.probes"); }},
      {"diagnostics.tol", [](RunConfig& c, const std::string& v) { c.tol = parse_double(v, "diagnostics.tol"); }},
      {"output.dir", [](RunConfig& c, const std::string& v) { c.out_dir = v; }},
  };

  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(line_no) +
                          ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": key outside any [section]");
    }
    const auto it = setters.find(section + "." + key);
    if (it == setters.end()) {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" +
                        section + "." + key + "'");
    }
    it->second(c, value);
  }
  if (c.nu && c.eta) {
    throw ConfigError("set exactly one of gas.nu and gas.eta");
  }
  if (c.n_cells && c.dx) {
    throw ConfigError("set exactly one of grid.n_cells and grid.dx");
  }
  return c;
}

RunConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream o;
  o << "[gas]\n";
  if (c.gamma) o << "gamma = " << fmt(*c.gamma) << "\n";
  if (c.nu) o << "nu = " << fmt(*c.nu) << "\n";
  if (c.eta) o << "eta = " << fmt(*c.eta) << "\n";
  o << "\n[profile]\n";
  o << "preset = " << c.profile_preset << "\n";
  o << "n = " << c.spherical_dim << "\n";
  if (!c.profile_table.empty()) o << "table = " << c.profile_table << "\n";
  o << "\n[domain]\n";
  o << "x_begin = " << fmt(c.x_begin) << "\n";
  o << "x_end = " << fmt(c.x_end) << "\n";
  o << "\n[grid]\n";
  if (c.n_cells) o << "n_cells = " << *c.n_cells << "\n";
  if (c.dx) o << "dx = " << fmt(*c.dx) << "\n";
  o << "cfl = " << fmt(c.cfl) << "\n";
  o << "t_final = " << fmt(c.t_final) << "\n";
  o << "snapshot_stride = " << c.snapshot_stride << "\n";
  o << "weno_epsilon = " << fmt(c.weno_epsilon) << "\n";
  o << "outflow_order = " << c.outflow_order << "\n";
  o << "\n[data]\n";
  o << "preset = " << c.data_preset << "\n";
  if (c.s0) o << "s0 = " << fmt(*c.s0) << "\n";
  if (c.r0) o << "r0 = " << fmt(*c.r0) << "\n";
  if (c.s0_slope) o << "s0_slope = " << fmt(*c.s0_slope) << "\n";
  if (c.r0_slope) o << "r0_slope = " << fmt(*c.r0_slope) << "\n";
  if (!c.initial_table.empty()) o << "initial_table = " << c.initial_table << "\n";
  if (!c.boundary_table.empty()) o << "boundary_table = " << c.boundary_table << "\n";
  if (!c.nu_list.empty()) {
    o << "\n[sweep]\n";
    o << "nu_list = ";
    for (std::size_t i = 0; i < c.nu_list.size(); ++i) {
      o << (i ? ", " : "") << fmt(c.nu_list[i]);
    }
    o << "\n";
  }
  o << "\n[validate]\n";
  o << "c_xi = " << fmt(c.c_xi) << "\n";
  if (c.k1_delta) o << "delta = " << fmt(*c.k1_delta) << "\n";
  if (c.c1_norm_limit) o << "c1_norm_limit = " << fmt(*c.c1_norm_limit) << "\n";
  o << "grid_n = " << c.grid_n << "\n";
  if (c.t_horizon) o << "t_horizon = " << fmt(*c.t_horizon) << "\n";
  o << "c_light = " << fmt(c.c_light) << "\n";
  o << "compat_tol = " << fmt(c.compat_tol) << "\n";
  o << "\n[diagnostics]\n";
  o << "probes = ";
  for (std::size_t i = 0; i < c.probes.size(); ++i) {
    o << (i ? ", " : "") << fmt(c.probes[i]);
  }
  o << "\n";
  o << "tol = " << fmt(c.tol) << "\n";
  o << "\n[output]\n";
  o << "dir = " << c.out_dir << "\n";
  return o.str();
}

void apply_preset(RunConfig& c, const std::string& preset) {
  if (preset == "experiment1") {
    c.profile_preset = "exp1";
  } else if (preset == "experiment2") {
    c.profile_preset = "exp2";
  } else {
    throw ConfigError("unknown preset '" + preset +
                      "' (use experiment1 or experiment2)");
  }
  c.x_begin = 1.0;
  c.x_end = 10.0;
  c.gamma = 1.4;
  c.dx = 0.01;
  c.n_cells.reset();
  c.cfl = 0.1;
  c.t_final = 10.0;
  c.data_preset = "exp-data";
  if (c.nu_list.empty() && !c.nu && !c.eta) {
    c.nu_list = {0.1, 1e-3, 1e-5};
  }
}

std::vector<double> sweep_of(const RunConfig& c) {
  if (!c.nu_list.empty()) return c.nu_list;
  if (c.nu) return {*c.nu};
  if (c.eta) return {nu_from_eta(*c.eta, require_gamma(c))};
  throw ConfigError("no nu configured: set gas.nu, gas.eta or sweep.nu_list");
}

ResolvedCase resolve_case(const RunConfig& c, double nu) {
  const GasParameters gas = GasParameters::from_nu(require_gamma(c), nu);

  auto make_profile = [&]() -> DuctProfile {
    if (c.profile_preset == "exp1") return DuctProfile::exp1(c.x_begin);
    if (c.profile_preset == "exp2") return DuctProfile::exp2(c.x_begin);
    if (c.profile_preset == "spherical") {
      return DuctProfile::spherical(c.spherical_dim, c.x_begin, c.x_end);
    }
    if (c.profile_preset == "table") {
      if (c.profile_table.empty()) throw ConfigError("profile.table not set");
      return DuctProfile::from_table_file(c.profile_table);
    }
    throw ConfigError("unknown profile preset '" + c.profile_preset + "'");
  };
  DuctProfile profile = make_profile();
  if (c.x_begin < profile.x_begin() || c.x_end > profile.x_end()) {
    throw ConfigError("domain exceeds the profile table range");
  }

  Grid grid;
  grid.x_begin = c.x_begin;
  grid.x_end = c.x_end;
  if (c.n_cells) {
    grid.n_cells = *c.n_cells;
  } else if (c.dx) {
    grid.n_cells = static_cast<int>(std::lround((c.x_end - c.x_begin) / *c.dx));
  } else {
    throw ConfigError("set grid.n_cells or grid.dx");
  }
  if (grid.n_cells < 1) throw ConfigError("empty grid");

  InitialData initial;
  BoundaryData boundary;
  if (c.data_preset == "exp-data") {
    ExpDataParams p = corner_exp_data(gas, profile, c.s0.value_or(1.0 - std::sqrt(nu)),
                                      c.r0.value_or(1.0));
    if (c.s0_slope) p.s0_slope = *c.s0_slope;
    if (c.r0_slope) p.r0_slope = *c.r0_slope;
    initial = make_exp_initial(p, profile);
    boundary = make_exp_boundary(p);
  } else if (c.data_preset == "table") {
    if (c.initial_table.empty() || c.boundary_table.empty()) {
      throw ConfigError("table data needs data.initial_table and data.boundary_table");
    }
    initial = initial_from_table_file(c.initial_table);
    boundary = boundary_from_table_file(c.boundary_table);
  } else {
    throw ConfigError("unknown data preset '" + c.data_preset + "'");
  }

  SolverConfig solver(gas, profile, grid);
  solver.cfl_ratio = c.cfl;
  solver.t_final = c.t_final;
  solver.snapshot_stride = c.snapshot_stride;
  solver.weno_epsilon = c.weno_epsilon;
  solver.outflow_order = c.outflow_order;

  ValidationOptions validation;
  validation.c_xi = c.c_xi;
  validation.k1_delta = c.k1_delta;
  validation.c1_norm_limit = c.c1_norm_limit;
  validation.grid_n = c.grid_n;
  validation.t_horizon = c.t_horizon.value_or(c.t_final);
  validation.x_check_end = c.x_end;
  validation.compat_tol = c.compat_tol;
  validation.c_light = c.c_light;
  if (c.profile_preset == "spherical") {
    validation.spherical_dim = c.spherical_dim;
  }
  return ResolvedCase{gas, std::move(profile), std::move(initial),
                      std::move(boundary), std::move(solver), validation};
}

RunConfig assemble_config(const CommonOptions& opt) {
  RunConfig c;
  if (!opt.config_path.empty()) c = parse_config_file(opt.config_path);
  if (!opt.preset.empty()) apply_preset(c, opt.preset);
  if (opt.config_path.empty() && opt.preset.empty()) {
    throw ConfigError("need --config and/or --preset");
  }
  if (!opt.out_dir.empty()) c.out_dir = opt.out_dir;
  if (!opt.nu_override.empty()) {
    c.nu_list = opt.nu_override;
    c.nu.reset();
    c.eta.reset();
  }
  if (opt.dx) {
    c.dx = *opt.dx;
    c.n_cells.reset();
  }
  if (opt.cfl) c.cfl = *opt.cfl;
  if (opt.t_final) c.t_final = *opt.t_final;
  return c;
}

namespace {

ValidationReport validate_case(const RunConfig& config, double nu) {
  // gamma gate first: everything else needs a valid GasParameters
  const CheckResult gamma_check = check_gamma_range(require_gamma(config));
  if (gamma_check.status == CheckStatus::Fail) {
    ValidationReport rep;
    rep.checks.push_back(gamma_check);
    return rep;
  }
  const ResolvedCase rc = resolve_case(config, nu);
  return validate_all(rc.gas, rc.profile, rc.initial, rc.boundary,
                      rc.validation);
}

std::string nu_dir_name(double nu) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "nu_%g", nu);
  return buf;
}

void write_plot_script(const std::filesystem::path& out_root,
                       const std::vector<double>& sweep) {
  std::ofstream gp(out_root / "plot_norms.gnu");
  gp << "# gnuplot script: monitored sup norms, one panel per quantity,\n"
        "# one curve per nu. Run:  gnuplot plot_norms.gnu\n"
        "set terminal pngcairo size 1400,1000\n"
        "set output 'norms.png'\n"
        "set datafile separator ','\n"
        "set multiplot layout 2,2\n"
        "set key top right\n"
        "set xlabel 't'\n";
  const char* panels[4][2] = {{"2", "sup |rho|"},
                              {"3", "sup |v|"},
                              {"4", "sup |rho_x|"},
                              {"5", "sup |v_x|"}};
  for (const auto& p : panels) {
    gp << "set title '" << p[1] << "'\n";
    gp << "plot ";
    for (std::size_t i = 0; i < sweep.size(); ++i) {
      if (i) gp << ", ";
      gp << "'" << nu_dir_name(sweep[i]) << "/diagnostics.csv' every ::1 "
         << "using 1:" << p[0] << " with lines title 'nu=" << sweep[i] << "'";
    }
    gp << "\n";
  }
  gp << "unset multiplot\n";
}

struct RunClaims {
  std::vector<ClaimReport> claims;
  double sup_xi = 0.0;
};

RunClaims build_claims(const ResolvedCase& rc, const SimulationRecord& rec,
                       const RunConfig& config) {
  RunClaims out;
  const Grid& grid = rc.solver.grid;
  const double tol = config.tol;

  // data envelopes
  double M = 0.0;
  for (double x : linspace(grid.x_begin, grid.x_end, 2001)) {
    M = std::max(M, rc.initial.R(x));
  }
  for (double t : linspace(0.0, rc.solver.t_final, 2001)) {
    M = std::max(M, rc.boundary.R(t));
  }
  const double xi_sup = xi_data_envelope(rc.initial, rc.boundary, grid.x_begin,
                                         grid.x_end, rc.solver.t_final);

  ClaimReport maxp;
  maxp.claim_id = "max-principle";
  maxp.pass = true;
  maxp.worst_margin = std::numeric_limits<double>::infinity();
  for (const FieldSnapshot& s : rec.snapshots) {
    const ClaimReport r = max_principle_check(s, grid, rc.gas, M, 1e-8);
    if (r.worst_margin < maxp.worst_margin) {
      maxp.worst_margin = r.worst_margin;
      maxp.x = r.x;
      maxp.t = r.t;
    }
    maxp.pass = maxp.pass && r.pass;
  }
  out.claims.push_back(maxp);

  out.claims.push_back(
      xi_bound_check(rec.snapshots, grid, rc.gas, xi_sup, 1e-8));

  ClaimReport slope;
  slope.claim_id = "slope-inequality";
  slope.pass = true;
  slope.worst_margin = std::numeric_limits<double>::infinity();
  for (const FieldSnapshot& s : rec.snapshots) {
    const ClaimReport r =
        slope_inequality_check(s, grid, rc.profile, rc.gas, tol);
    if (r.worst_margin < slope.worst_margin) {
      slope.worst_margin = r.worst_margin;
      slope.x = r.x;
      slope.t = r.t;
    }
    slope.pass = slope.pass && r.pass;
  }
  out.claims.push_back(slope);

  const DecayReport decay = decay_check(rec.snapshots, grid, rc.initial,
                                        rc.profile, rc.gas, config.probes, tol);
  out.claims.push_back(decay.bound);
  out.claims.push_back(decay.envelope);
  out.claims.push_back(decay.monotone);
  out.claims.push_back(decay.rate);

  // figure-level properties of the norm series
  ClaimReport vmono;
  vmono.claim_id = "sup-v-nonincreasing";
  vmono.pass = true;
  vmono.worst_margin = std::numeric_limits<double>::infinity();
  ClaimReport finite;
  finite.claim_id = "norms-finite";
  finite.pass = true;
  ClaimReport positive;
  positive.claim_id = "supersonic";
  positive.pass = true;
  positive.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rec.diagnostics.size(); ++i) {
    const DiagRow& r = rec.diagnostics[i];
    const bool row_finite = std::isfinite(r.sup_rho) && std::isfinite(r.sup_v) &&
                            std::isfinite(r.sup_rho_x) && std::isfinite(r.sup_v_x);
    if (!row_finite && finite.pass) {
      finite.pass = false;
      finite.t = r.t;
    }
    if (i > 0) {
      const double m = rec.diagnostics[i - 1].sup_v + 1e-6 - r.sup_v;
      if (m < vmono.worst_margin) {
        vmono.worst_margin = m;
        vmono.t = r.t;
      }
      if (m < 0.0) vmono.pass = false;
    }
    if (r.min_S < positive.worst_margin) {
      positive.worst_margin = r.min_S;
      positive.t = r.t;
    }
    positive.pass = positive.pass && r.min_S > 0.0;
    out.sup_xi = std::max(out.sup_xi, r.sup_xi);
  }
  out.claims.push_back(vmono);
  out.claims.push_back(finite);
  out.claims.push_back(positive);

  ClaimReport rho_drop;
  rho_drop.claim_id = "sup-rho-final-below-initial";
  rho_drop.worst_margin =
      rec.diagnostics.front().sup_rho - rec.diagnostics.back().sup_rho;
  rho_drop.t = rec.diagnostics.back().t;
  rho_drop.pass = rho_drop.worst_margin > 0.0;
  out.claims.push_back(rho_drop);

  ClaimReport clips;
  clips.claim_id = "no-vacuum-clipping";
  clips.pass = rec.clip_events == 0;
  clips.worst_margin = -static_cast<double>(rec.clip_events);
  out.claims.push_back(clips);
  return out;
}

// nu-dependent verdict policy: the preserved-slope and xi-scaling claims are
// guaranteed by the theory only for sufficiently small nu; above the
// threshold their failures are warnings.
bool warn_only(const std::string& claim_id, double nu) {
  return (claim_id == "slope-inequality" || claim_id == "xi-scaling") &&
         nu > 1e-3;
}

}  // namespace

int cmd_validate(const CommonOptions& opt, std::ostream& out) {
  RunConfig config;
  try {
    config = assemble_config(opt);
  } catch (const std::exception& e) {
    out << "config error: " << e.what() << "\n";
    return kExitUsage;
  }
  bool all_pass = true;
  try {
    for (double nu : sweep_of(config)) {
      const ValidationReport rep = validate_case(config, nu);
      out << "validation at nu = " << nu << "\n";
      out << (opt.kv ? rep.key_values() : rep.text());
      all_pass = all_pass && rep.overall();
    }
  } catch (const ConfigError& e) {
    out << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    out << "validation error: " << e.what() << "\n";
    return kExitValidationFail;
  }
  return all_pass ? kExitOk : kExitValidationFail;
}

int cmd_run(const CommonOptions& opt, std::ostream& out) {
  RunConfig config;
  std::vector<double> sweep;
  try {
    config = assemble_config(opt);
    sweep = sweep_of(config);
  } catch (const std::exception& e) {
    out << "config error: " << e.what() << "\n";
    return kExitUsage;
  }

  namespace fs = std::filesystem;
  const fs::path root = config.out_dir;
  std::vector<std::pair<double, double>> sweep_xi;  // (nu, sup xi)

  for (double nu : sweep) {
    ValidationReport rep;
    ResolvedCase rc = [&] {
      try {
        rep = validate_case(config, nu);
      } catch (const std::exception& e) {
        rep.checks.push_back({"validation", CheckStatus::Fail, 0.0, 0.0, e.what()});
      }
      return resolve_case(config, nu);
    }();
    if (!rep.overall()) {
      out << "validation failed at nu = " << nu << ":\n" << rep.text();
      if (!opt.force) return kExitValidationFail;
      out << "continuing under --force\n";
    }

    const fs::path dir = root / nu_dir_name(nu);
    fs::create_directories(dir);
    {
      RunConfig resolved = config;
      resolved.nu = nu;
      resolved.eta.reset();
      resolved.nu_list.clear();
      resolved.n_cells = rc.solver.grid.n_cells;
      resolved.dx.reset();
      std::ofstream cf(dir / "resolved.cfg");
      cf << serialize_config(resolved);
    }
    {
      std::ofstream vf(dir / "validation.txt");
      vf << rep.text();
    }

    out << "running nu = " << nu << " (" << rc.solver.grid.n_cells
        << " cells, dt = " << rc.solver.dt() << ") ...\n";
    const SimulationRecord rec = run_simulation(rc.solver, rc.initial, rc.boundary);

    write_diagnostics_csv(dir / "diagnostics.csv", rec.diagnostics);
    for (const FieldSnapshot& s : rec.snapshots) {
      write_snapshot_csv(dir, s, rc.solver.grid, rc.gas);
    }
    if (!rec.completed()) {
      out << "solver abort: " << rec.abort_detail << "\n";
      std::ofstream af(dir / "ABORTED.txt");
      af << rec.abort_detail << "\n";
      write_snapshot_csv(dir, rec.final_state, rc.solver.grid, rc.gas);
      return kExitSolverAbort;
    }

    const RunClaims claims = build_claims(rc, rec, config);
    write_claims_csv(dir / "claims.csv", claims.claims);
    sweep_xi.emplace_back(nu, claims.sup_xi);
    for (const ClaimReport& cl : claims.claims) {
      const char* status = cl.pass            ? "pass"
                           : warn_only(cl.claim_id, nu) ? "WARN"
                                                        : "FAIL";
      out << "  [" << status << "] " << cl.claim_id
          << "  margin=" << cl.worst_margin << "\n";
    }
  }

  write_plot_script(root, sweep);

  if (sweep_xi.size() >= 2) {
    // log-log slope of sup xi against nu across the sweep
    double mx = 0, my = 0;
    for (auto& [nu, xi] : sweep_xi) {
      mx += std::log(nu);
      my += std::log(xi);
    }
    mx /= static_cast<double>(sweep_xi.size());
    my /= static_cast<double>(sweep_xi.size());
    double num = 0, den = 0;
    for (auto& [nu, xi] : sweep_xi) {
      num += (std::log(nu) - mx) * (std::log(xi) - my);
      den += (std::log(nu) - mx) * (std::log(nu) - mx);
    }
    const double slope = num / den;
    ClaimReport scaling;
    scaling.claim_id = "xi-scaling";
    scaling.worst_margin = slope;
    scaling.pass = slope >= 0.4 && slope <= 0.6;
    std::vector<ClaimReport> sc{scaling};
    write_claims_csv(root / "sweep_claims.csv", sc);
    out << "sweep: sup xi ~ nu^" << slope << "\n";
  }
  out << "outputs in " << root.string() << "\n";
  return kExitOk;
}

int cmd_trace(const TraceOptions& opt, std::ostream& out) {
  namespace fs = std::filesystem;
  const fs::path dir = opt.dir;
  if (!fs::exists(dir / "resolved.cfg")) {
    out << "no resolved.cfg in " << dir.string() << "\n";
    return kExitUsage;
  }
  TraceFamily family;
  if (opt.family == "1") {
    family = TraceFamily::One;
  } else if (opt.family == "2") {
    family = TraceFamily::Two;
  } else if (opt.family == "particle") {
    family = TraceFamily::Particle;
  } else {
    out << "bad family '" << opt.family << "' (1 | 2 | particle)\n";
    return kExitUsage;
  }
  try {
    const RunConfig config = parse_config_file(dir / "resolved.cfg");
    const ResolvedCase rc = resolve_case(config, *config.nu);
    SnapshotSet set = read_snapshots(dir);
    const SpaceTimeField field(std::move(set.snapshots), rc.solver.grid, rc.gas);
    const CurveTrace tr = trace(field, opt.x0, opt.t0, family);
    const fs::path csv = write_trace_csv(dir, tr, opt.x0, opt.t0);
    const MonotonicityReport rep = monotonicity_report(tr, opt.tol);
    out << "trace written to " << csv.string() << " (" << tr.points.size()
        << " samples)\n";
    out << "  S nondecreasing: " << (rep.s_increasing_ok ? "ok" : "VIOLATED")
        << " (worst " << rep.worst_s << ")\n";
    out << "  R nonincreasing: " << (rep.r_decreasing_ok ? "ok" : "VIOLATED")
        << " (worst " << rep.worst_r << ")\n";
    out << "  xi nonincreasing: " << (rep.xi_decreasing_ok ? "ok" : "VIOLATED")
        << " (worst " << rep.worst_xi << ")\n";
    return rep.all_ok() ? kExitOk : kExitValidationFail;
  } catch (const std::invalid_argument& e) {
    out << "trace error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    out << "trace error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int cmd_report(const ReportOptions& opt, std::ostream& out) {
  namespace fs = std::filesystem;
  const fs::path dir = opt.dir;
  bool all_ok = true;
  bool found = false;
  auto report_one = [&](const fs::path& run_dir) {
    found = true;
    double nu = 0.0;
    try {
      const RunConfig config = parse_config_file(run_dir / "resolved.cfg");
      nu = config.nu.value_or(0.0);
    } catch (const std::exception&) {
    }
    out << "run " << run_dir.string() << " (nu = " << nu << ")\n";
    const std::vector<ClaimReport> claims = read_claims_csv(run_dir / "claims.csv");
    for (const ClaimReport& c : claims) {
      const char* status = c.pass            ? "pass"
                           : warn_only(c.claim_id, nu) ? "WARN"
                                                       : "FAIL";
      if (!c.pass && !warn_only(c.claim_id, nu)) all_ok = false;
      char line[160];
      std::snprintf(line, sizeof(line), "  [%s] %-28s margin=%- .6e at (x=%g, t=%g)\n",
                    status, c.claim_id.c_str(), c.worst_margin, c.x, c.t);
      out << line;
    }
  };
  if (fs::exists(dir / "claims.csv")) {
    report_one(dir);
  } else if (fs::exists(dir)) {
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_directory() && fs::exists(entry.path() / "claims.csv")) {
        report_one(entry.path());
      }
    }
    if (fs::exists(dir / "sweep_claims.csv")) {
      out << "sweep claims:\n";
      for (const ClaimReport& c : read_claims_csv(dir / "sweep_claims.csv")) {
        if (!c.pass) all_ok = false;
        out << "  [" << (c.pass ? "pass" : "FAIL") << "] " << c.claim_id
            << " = " << c.worst_margin << "\n";
      }
    }
  }
  if (!found) {
    out << "no claims found under " << dir.string() << "\n";
    return kExitUsage;
  }
  return all_ok ? kExitOk : kExitValidationFail;
}

}  // namespace ductflow::cli
