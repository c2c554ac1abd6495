#ifndef DUCTFLOW_TOOLS_CLI_HPP_
#define DUCTFLOW_TOOLS_CLI_HPP_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ductflow/conditions.hpp"
#include "ductflow/solver.hpp"

namespace ductflow::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFail = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitSolverAbort = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Mirrors the line-oriented `key = value` config file with [section]
/// headers. Unknown sections or keys are rejected at parse time.
struct RunConfig {
  // [gas]
  std::optional<double> gamma;  // required; presets fill it in
  std::optional<double> nu;
  std::optional<double> eta;
  // [profile]
  std::string profile_preset = "exp1";  // exp1 | exp2 | spherical | table
  int spherical_dim = 3;
  std::string profile_table;
  // [domain]
  double x_begin = 1.0;
  double x_end = 10.0;
  // [grid]
  std::optional<int> n_cells;
  std::optional<double> dx;
  double cfl = 0.1;
  double t_final = 10.0;
  int snapshot_stride = 100;
  double weno_epsilon = 1e-6;
  int outflow_order = 0;
  // [data]
  std::string data_preset = "exp-data";  // exp-data | table
  std::optional<double> s0, r0, s0_slope, r0_slope;
  std::string initial_table, boundary_table;
  // [sweep]
  std::vector<double> nu_list;
  // [validate]
  double c_xi = 2.0;
  std::optional<double> k1_delta;
  std::optional<double> c1_norm_limit;
  int grid_n = 1001;
  std::optional<double> t_horizon;
  double c_light = 1e8;
  double compat_tol = 1e-9;
  // [diagnostics]
  std::vector<double> probes{1.0, 2.0, 5.0};
  double tol = 1e-6;
  // [output]
  std::string out_dir = "out";

  bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::filesystem::path& path);
/// Canonical form; parse_config_text(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

/// The two reference experiment setups (profile, domain, grid, data).
void apply_preset(RunConfig& config, const std::string& preset);

/// One sweep member resolved to concrete objects.
struct ResolvedCase {
  GasParameters gas;
  DuctProfile profile;
  InitialData initial;
  BoundaryData boundary;
  SolverConfig solver;
  ValidationOptions validation;
};
ResolvedCase resolve_case(const RunConfig& config, double nu);
/// nu values to run: the sweep list, else the single configured nu.
std::vector<double> sweep_of(const RunConfig& config);

struct CommonOptions {
  std::string config_path;
  std::string preset;  // experiment1 | experiment2 | ""
  std::string out_dir;
  std::vector<double> nu_override;
  std::optional<double> dx, cfl, t_final;
  bool force = false;
  bool kv = false;  // key-value validate output
};

/// Merges the file config (if any), preset, and flag overrides.
RunConfig assemble_config(const CommonOptions& opt);

int cmd_validate(const CommonOptions& opt, std::ostream& out);
int cmd_run(const CommonOptions& opt, std::ostream& out);

struct TraceOptions {
  std::string dir;
  double x0 = 1.0;
  double t0 = 0.0;
  std::string family = "1";  // 1 | 2 | particle
  double tol = 1e-6;
};
int cmd_trace(const TraceOptions& opt, std::ostream& out);

struct ReportOptions {
  std::string dir;
};
int cmd_report(const ReportOptions& opt, std::ostream& out);

}  // namespace ductflow::cli

#endif  // DUCTFLOW_TOOLS_CLI_HPP_
