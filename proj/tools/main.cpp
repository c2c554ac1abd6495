// Command-line front end: validate | run | trace | report.
#include <CLI11.hpp>
#include <iostream>

#include "cli.hpp"

using namespace ductflow;

int main(int argc, char** argv) {
  CLI::App app{"ductflow - isentropic supersonic duct flow simulator and "
               "hypothesis checker"};
  app.require_subcommand(1);

  cli::CommonOptions common;
  std::string nu_csv;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "config file path");
    sub->add_option("--preset", common.preset,
                    "experiment preset (experiment1|experiment2)");
    sub->add_option("--out", common.out_dir, "output directory");
    sub->add_option("--nu", nu_csv, "comma-separated nu sweep override");
    sub->add_option("--dx", common.dx, "grid spacing override");
    sub->add_option("--cfl", common.cfl, "dt/dx ratio override");
    sub->add_option("--t-final", common.t_final, "final time override");
  };

  CLI::App* validate = app.add_subcommand("validate",
                                          "check every theorem hypothesis");
  add_common(validate);
  validate->add_flag("--kv", common.kv, "machine-readable key-value output");

  CLI::App* run = app.add_subcommand("run", "validate, solve and write CSVs");
  add_common(run);
  run->add_flag("--force", common.force, "run even if validation fails");

  cli::TraceOptions trace_opt;
  CLI::App* trace = app.add_subcommand("trace",
                                       "integrate a characteristic curve "
                                       "through a recorded run");
  trace->add_option("--dir", trace_opt.dir, "run directory (one nu)")
      ->required();
  trace->add_option("--x0", trace_opt.x0, "start position");
  trace->add_option("--t0", trace_opt.t0, "start time");
  trace->add_option("--family", trace_opt.family, "1 | 2 | particle");
  trace->add_option("--tol", trace_opt.tol, "monotonicity tolerance");

  cli::ReportOptions report_opt;
  CLI::App* report = app.add_subcommand("report",
                                        "summarize claims of recorded runs");
  report->add_option("--dir", report_opt.dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitUsage;
  }

  if (!nu_csv.empty()) {
    std::istringstream ss(nu_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) common.nu_override.push_back(std::stod(item));
    }
  }

  try {
    if (validate->parsed()) return cli::cmd_validate(common, std::cout);
    if (run->parsed()) return cli::cmd_run(common, std::cout);
    if (trace->parsed()) return cli::cmd_trace(trace_opt, std::cout);
    if (report->parsed()) return cli::cmd_report(report_opt, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitUsage;
  }
  return cli::kExitUsage;
}
