#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "crdctl/errors.hpp"
#include "crdctl/experiment.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

std::string load_config_text(const std::string& path) {
  if (path.rfind("preset:", 0) == 0) {
    return crdctl::preset_text(path.substr(7));
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw crdctl::ConfigError("cannot read config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void print_summary(const crdctl::RunSummary& summary) {
  std::cout << crdctl::summary_text(summary);
  std::cout << "artifacts: " << summary.out_dir << "\n";
}

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::string backend;
  bool open_loop = false;
};

crdctl::RunOverrides to_overrides(const CommonOpts& opts) {
  crdctl::RunOverrides o;
  if (!opts.out_dir.empty()) o.out_dir = opts.out_dir;
  if (opts.backend == "fd") o.backend = crdctl::DiffBackend::FiniteDifference;
  if (opts.backend == "rbf") o.backend = crdctl::DiffBackend::Multiquadric;
  o.force_open_loop = opts.open_loop;
  return o;
}

int run_command(const CommonOpts& opts) {
  const auto file = crdctl::parse_config(load_config_text(opts.config_path));
  const auto summary = crdctl::run_experiment(file, to_overrides(opts));
  print_summary(summary);
  return crdctl::exit_code_for(summary.outcome);
}

int compare_command(const CommonOpts& opts) {
  const auto file = crdctl::parse_config(load_config_text(opts.config_path));
  const std::string base = opts.out_dir.empty() ? file.directory : opts.out_dir;

  // The two legs are independent; run them concurrently into per-leg dirs.
  crdctl::RunOverrides open_o, closed_o;
  open_o.out_dir = base + "/open";
  open_o.force_open_loop = true;
  closed_o.out_dir = base + "/closed";
  if (!opts.backend.empty()) {
    const auto b = opts.backend == "fd" ? crdctl::DiffBackend::FiniteDifference
                                        : crdctl::DiffBackend::Multiquadric;
    open_o.backend = b;
    closed_o.backend = b;
  }

  crdctl::ExperimentFile closed_file = file;
  if (closed_file.mode != crdctl::LoopMode::Closed) {
    throw crdctl::ConfigError("compare: config must define a closed-loop controller");
  }

  auto open_fut = std::async(std::launch::async, [&] {
    return crdctl::run_experiment(file, open_o);
  });
  const auto closed_summary = crdctl::run_experiment(closed_file, closed_o);
  const auto open_summary = open_fut.get();

  const auto report = crdctl::compare(open_summary, closed_summary);
  std::cout << report.text;
  return 0;
}

int presets_command(const std::string& action) {
  if (action != "list") throw crdctl::ConfigError("presets: unknown action '" + action + "'");
  for (const auto& name : crdctl::preset_names()) {
    std::cout << name << "  -  " << crdctl::preset_description(name) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boundary-feedback stabilization of convection-reaction-diffusion PDEs"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string presets_action = "list";

  auto* run_cmd = app.add_subcommand("run", "Run one experiment from a config file or preset:<name>");
  run_cmd->add_option("config", opts.config_path, "Config path or preset:<name>")->required();
  run_cmd->add_option("--out", opts.out_dir, "Override the output directory");
  run_cmd->add_option("--backend", opts.backend, "Override the spatial backend")
      ->check(CLI::IsMember({"fd", "rbf"}));
  run_cmd->add_flag("--open-loop", opts.open_loop, "Force the open loop (v = 0)");

  auto* compare_cmd = app.add_subcommand("compare", "Run open- and closed-loop legs and compare");
  compare_cmd->add_option("config", opts.config_path, "Config path or preset:<name>")->required();
  compare_cmd->add_option("--out", opts.out_dir, "Override the output directory");
  compare_cmd->add_option("--backend", opts.backend, "Override the spatial backend")
      ->check(CLI::IsMember({"fd", "rbf"}));

  auto* presets_cmd = app.add_subcommand("presets", "Manage shipped experiment presets");
  presets_cmd->add_option("action", presets_action, "list")->required();

  auto* version_cmd = app.add_subcommand("version", "Print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 3;
  }

  try {
    if (run_cmd->parsed()) return run_command(opts);
    if (compare_cmd->parsed()) return compare_command(opts);
    if (presets_cmd->parsed()) return presets_command(presets_action);
    if (version_cmd->parsed()) {
      std::cout << "crdctl " << kVersion << "\n";
      return 0;
    }
  } catch (const crdctl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const crdctl::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
