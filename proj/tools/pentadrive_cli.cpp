#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pentadrive/config.hpp"
#include "pentadrive/csv.hpp"
#include "pentadrive/sweep.hpp"
#include "pentadrive/vsi.hpp"

namespace fs = std::filesystem;
using namespace pentadrive;

namespace {

struct Flags {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<double> vdc;
  std::optional<double> ts;
  std::optional<std::string> variant;
  std::optional<double> lambda_xy;
  std::optional<double> lambda_sc;
  std::optional<std::string> fe;
  std::optional<std::string> is;
  bool trace = false;
  bool decisions = false;
  std::vector<std::string> overrides;
};

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Flags and key=value overrides become trailing config lines, so later lines win.
std::optional<RunConfig> resolve(const Flags& f, bool sweep) {
  std::string text;
  if (!f.config_path.empty()) {
    auto content = read_file(f.config_path);
    if (!content) {
      std::cerr << "error: cannot read config '" << f.config_path << "'\n";
      return std::nullopt;
    }
    text = *content + "\n";
  }
  for (const auto& o : f.overrides) {
    if (o.find('=') == std::string::npos) {
      std::cerr << "error: override '" << o << "' is not key=value\n";
      return std::nullopt;
    }
    text += o + "\n";
  }
  if (f.vdc) text += "machine.Vdc = " + fmt_double(*f.vdc) + "\n";
  if (f.ts) text += "plant.Ts = " + fmt_double(*f.ts) + "\n";
  if (sweep) {
    if (f.variant) {
      text += "sweep.variants = " + *f.variant + ":" + fmt_double(f.lambda_xy.value_or(0.0)) +
              ":" + fmt_double(f.lambda_sc.value_or(0.0)) + "\n";
    } else if (f.lambda_xy || f.lambda_sc) {
      std::cerr << "error: --lambda-xy/--lambda-sc need --variant for a sweep\n";
      return std::nullopt;
    }
    if (f.fe) text += "sweep.fe = " + *f.fe + "\n";
    if (f.is) text += "sweep.is = " + *f.is + "\n";
  } else {
    if (f.variant) text += "controller.variant = " + *f.variant + "\n";
    if (f.lambda_xy) text += "controller.lambda_xy = " + fmt_double(*f.lambda_xy) + "\n";
    if (f.lambda_sc) text += "controller.lambda_sc = " + fmt_double(*f.lambda_sc) + "\n";
  }

  auto result = validate_config(text);
  if (!result.ok()) {
    for (const auto& e : result.errors) std::cerr << "config error: " << e << '\n';
    return std::nullopt;
  }
  return result.config;
}

bool open_out(std::ofstream& os, const fs::path& path) {
  os.open(path);
  if (!os) std::cerr << "error: cannot write '" << path.string() << "'\n";
  return static_cast<bool>(os);
}

bool prepare_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    std::cerr << "error: cannot create output directory '" << dir << "': " << ec.message() << '\n';
    return false;
  }
  return true;
}

int cmd_tables(const Flags& f) {
  const double vdc = f.vdc.value_or(MachineParams{}.Vdc);
  if (!(vdc > 0.0)) {
    std::cerr << "error: --vdc must be positive\n";
    return 2;
  }
  if (!prepare_dir(f.out_dir)) return 1;
  const VsiTables tables(vdc);
  std::ofstream vv, vvv;
  if (!open_out(vv, fs::path(f.out_dir) / "vv.csv")) return 1;
  if (!open_out(vvv, fs::path(f.out_dir) / "vvv.csv")) return 1;
  write_vv_csv(vv, tables.vv);
  write_vvv_csv(vvv, tables.vvv);
  std::cout << "wrote vv.csv (32 rows) and vvv.csv (11 rows) to " << f.out_dir << '\n';
  return 0;
}

int cmd_single(const Flags& f) {
  const auto cfg = resolve(f, false);
  if (!cfg) return 2;
  if (f.fe && f.fe->find(',') != std::string::npos) {
    std::cerr << "error: single takes one --fe value\n";
    return 2;
  }
  OperatingPoint op;
  op.slip_fraction = cfg->sweep.slip_fraction;
  try {
    if (f.fe) op.fe = parse_double(*f.fe);
    if (f.is) op.Is_star = parse_double(*f.is);
    op.validate();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  if (!prepare_dir(f.out_dir)) return 1;

  RunOptions options = cfg->sweep.run;
  options.keep_trace = f.trace;
  options.keep_decisions = f.decisions;
  const auto run = run_single(op, cfg->controller, cfg->machine, cfg->plant, options);

  std::ofstream metrics;
  if (!open_out(metrics, fs::path(f.out_dir) / "metrics.csv")) return 1;
  write_metrics_csv(metrics, {run.report});
  if (f.trace) {
    std::ofstream trace;
    const auto name = trace_file_name(run.report.variant, op.fe, op.Is_star);
    if (!open_out(trace, fs::path(f.out_dir) / name)) return 1;
    write_trace_csv(trace, run.trace);
  }
  if (f.decisions) {
    std::ofstream dec;
    if (!open_out(dec, fs::path(f.out_dir) / "decisions.csv")) return 1;
    write_decisions_csv(dec, run.decisions);
  }
  std::cout << metrics_csv_header() << '\n' << metrics_csv_row(run.report) << '\n';
  if (!run.report.note.empty()) std::cout << "note: " << run.report.note << '\n';
  return 0;
}

int cmd_sweep(const Flags& f) {
  auto cfg = resolve(f, true);
  if (!cfg) return 2;
  if (!prepare_dir(f.out_dir)) return 1;

  const auto result = run_sweep(cfg->sweep, cfg->machine, cfg->plant);
  std::ofstream metrics, meta, bounds;
  if (!open_out(metrics, fs::path(f.out_dir) / "metrics.csv")) return 1;
  write_metrics_csv(metrics, result.rows);
  if (!open_out(meta, fs::path(f.out_dir) / "sweep_meta.cfg")) return 1;
  meta << to_config_text(*cfg);
  if (!open_out(bounds, fs::path(f.out_dir) / "boundaries.csv")) return 1;
  bounds << "variant,lambda_xy,fe,first_infeasible_Is\n";
  for (const auto& b : result.boundaries) {
    bounds << b.variant << ',' << fmt_double(b.lambda_xy) << ',' << fmt_double(b.fe) << ','
           << fmt_double(b.first_infeasible_Is.value_or(std::nan(""))) << '\n';
  }
  std::cout << "wrote " << result.rows.size() << " rows to "
            << (fs::path(f.out_dir) / "metrics.csv").string() << '\n';
  return 0;
}

void add_run_flags(CLI::App* cmd, Flags& f, bool lists) {
  cmd->add_option("--config", f.config_path, "key = value configuration file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", f.out_dir, "output directory");
  cmd->add_option("--vdc", f.vdc, "DC-link voltage (V)");
  cmd->add_option("--ts", f.ts, "control period (s)");
  cmd->add_option("--variant", f.variant, "controller variant")
      ->check(CLI::IsMember({"sv-zl", "sv-zw", "vvv"}));
  cmd->add_option("--lambda-xy", f.lambda_xy, "xy weighting factor");
  cmd->add_option("--lambda-sc", f.lambda_sc, "switching weighting factor");
  cmd->add_option("--fe", f.fe, lists ? "electrical frequencies, comma separated (Hz)"
                                      : "electrical frequency (Hz)");
  cmd->add_option("--is", f.is, lists ? "current amplitudes, comma separated (A)"
                                      : "current amplitude (A)");
  cmd->add_option("overrides", f.overrides, "extra key=value settings");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Five-phase induction machine FSMPC simulator"};
  app.require_subcommand(1);
  Flags f;

  auto* tables = app.add_subcommand("tables", "write the VV and VVV tables as CSV");
  tables->add_option("--vdc", f.vdc, "DC-link voltage (V)");
  tables->add_option("--out", f.out_dir, "output directory");

  auto* single = app.add_subcommand("single", "simulate one operating point");
  add_run_flags(single, f, false);
  single->add_flag("--trace", f.trace, "write the per-period time series");
  single->add_flag("--decisions", f.decisions, "write the per-step controller decisions");

  auto* sweep = app.add_subcommand("sweep", "sweep fe x Is* x variant");
  add_run_flags(sweep, f, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (tables->parsed()) return cmd_tables(f);
    if (single->parsed()) return cmd_single(f);
    return cmd_sweep(f);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
