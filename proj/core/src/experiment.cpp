#include "crdctl/experiment.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "crdctl/errors.hpp"
#include "crdctl/svg.hpp"

namespace crdctl {

namespace fs = std::filesystem;

std::string csv_number(double x) {
  if (x == 0.0) x = 0.0;  // canonicalize -0
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

int exit_code_for(Outcome outcome) {
  return outcome == Outcome::Completed ? 0 : 2;
}

std::string resolve_out_dir(const std::string& configured,
                            const std::optional<std::string>& override_dir) {
  fs::path dir = override_dir ? fs::path(*override_dir) : fs::path(configured);
  if (dir.is_relative()) {
    if (const char* root = std::getenv("CRDCTL_OUT_ROOT"); root && *root) {
      dir = fs::path(root) / dir;
    }
  }
  return dir.string();
}

std::string series_csv(const RunResult& result) {
  std::string out = "t,V,v,max_abs_u,boundary_slope\n";
  for (const auto& rec : result.series) {
    out += csv_number(rec.t);
    out += ',';
    out += csv_number(rec.lyapunov);
    out += ',';
    out += csv_number(rec.control);
    out += ',';
    out += csv_number(rec.max_abs_u);
    out += ',';
    out += csv_number(rec.boundary_slope);
    out += '\n';
  }
  return out;
}

std::string snapshots_csv(const RunResult& result, const Grid& grid) {
  std::string out = "t,x,u\n";
  for (const auto& snap : result.snapshots) {
    for (int i = 0; i < snap.state.size(); ++i) {
      out += csv_number(snap.t);
      out += ',';
      out += csv_number(grid.nodes(i));
      out += ',';
      out += csv_number(snap.state(i));
      out += '\n';
    }
  }
  return out;
}

std::string summary_text(const RunSummary& s) {
  std::ostringstream out;
  out << "outcome: " << (s.outcome == Outcome::Completed ? "completed" : "blowup") << "\n";
  out << "V0: " << csv_number(s.v_initial) << "\n";
  if (s.v_final) out << "V_final: " << csv_number(*s.v_final) << "\n";
  if (s.blowup_time) out << "blowup_time: " << csv_number(*s.blowup_time) << "\n";
  out << "decay_rate: " << (s.decay ? csv_number(*s.decay) : "n/a") << "\n";
  out << "max_abs_control: " << csv_number(s.max_abs_control) << "\n";
  out << "wall_seconds: " << csv_number(s.wall_seconds) << "\n";
  return out.str();
}

RunResult execute(const ExperimentFile& file, const RunOverrides& overrides) {
  ExperimentFile effective = file;
  if (overrides.backend) effective.backend = *overrides.backend;
  if (overrides.force_open_loop) effective.mode = LoopMode::Open;

  const Grid grid = build_grid(effective.grid_n);
  const DiffOps ops = (effective.backend == DiffBackend::FiniteDifference)
                          ? build_fd_diff_ops(grid)
                          : build_rbf_diff_ops(grid, effective.shape);

  const auto profile = ic_function(effective);
  GridState initial(grid.n_nodes());
  for (int i = 0; i < grid.n_nodes(); ++i) initial(i) = profile(grid.nodes(i));

  return run(to_sim_config(effective), ops, initial);
}

RunSummary summarize(const ExperimentFile& file, const RunResult& result,
                     const std::string& out_dir) {
  RunSummary s;
  s.outcome = result.outcome;
  s.v_initial = result.series.empty() ? 0.0 : result.series.front().lyapunov;
  if (result.outcome == Outcome::Completed && !result.series.empty()) {
    s.v_final = result.series.back().lyapunov;
  }
  if (result.outcome == Outcome::BlowUp) s.blowup_time = result.blowup_time;
  try {
    s.decay = decay_rate(result.series);
  } catch (const NumericError&) {
    s.decay = std::nullopt;
  }
  for (const auto& rec : result.series) {
    if (std::isfinite(rec.control)) {
      s.max_abs_control = std::max(s.max_abs_control, std::abs(rec.control));
    }
  }
  s.epsilon = file.epsilon;
  s.convection = file.convection;
  s.grid_n = file.grid_n;
  s.dt = file.dt;
  s.t_final = file.t_final;
  s.loop = file.mode;
  s.out_dir = out_dir;
  return s;
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

RunSummary run_experiment(const ExperimentFile& file, const RunOverrides& overrides) {
  ExperimentFile effective = file;
  if (overrides.backend) effective.backend = *overrides.backend;
  if (overrides.force_open_loop) effective.mode = LoopMode::Open;

  const auto start = std::chrono::steady_clock::now();
  const RunResult result = execute(effective);
  const auto stop = std::chrono::steady_clock::now();

  const std::string out_dir = resolve_out_dir(effective.directory, overrides.out_dir);
  RunSummary summary = summarize(effective, result, out_dir);
  summary.wall_seconds = std::chrono::duration<double>(stop - start).count();

  const fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir / "plots", ec);
  if (ec) throw std::runtime_error("cannot create output directory: " + dir.string());

  const Grid grid = build_grid(effective.grid_n);
  write_file(dir / "series.csv", series_csv(result));
  write_file(dir / "snapshots.csv", snapshots_csv(result, grid));
  write_file(dir / "summary.txt", summary_text(summary));

  std::vector<double> ts, vs, cs;
  ts.reserve(result.series.size());
  for (const auto& rec : result.series) {
    ts.push_back(rec.t);
    vs.push_back(rec.lyapunov);
    cs.push_back(std::isfinite(rec.control) ? rec.control : 0.0);
  }
  write_file(dir / "plots" / "lyapunov.svg",
             svg_line_plot(ts, vs, {"Lyapunov functional", "t", "V", true}));
  write_file(dir / "plots" / "control.svg",
             svg_line_plot(ts, cs, {"Boundary control", "t", "v", false}));
  write_file(dir / "plots" / "heatmap.svg",
             svg_heatmap(result.snapshots, grid, "State evolution"));

  return summary;
}

ComparisonReport compare(const RunSummary& open_leg, const RunSummary& closed_leg) {
  if (open_leg.loop != LoopMode::Open || closed_leg.loop != LoopMode::Closed) {
    throw std::invalid_argument("compare: expected one open-loop and one closed-loop summary");
  }
  if (open_leg.epsilon != closed_leg.epsilon || open_leg.convection != closed_leg.convection ||
      open_leg.grid_n != closed_leg.grid_n || open_leg.dt != closed_leg.dt ||
      open_leg.t_final != closed_leg.t_final) {
    throw std::invalid_argument("compare: plant/grid/time settings differ between legs");
  }

  ComparisonReport report;
  report.blowup_prevented = open_leg.outcome == Outcome::BlowUp &&
                            closed_leg.outcome == Outcome::Completed;

  std::ostringstream out;
  const auto describe = [](const RunSummary& s) {
    std::ostringstream line;
    if (s.outcome == Outcome::BlowUp) {
      line << "blow-up at t = " << csv_number(*s.blowup_time);
    } else {
      line << "completed, V(t_final) = " << csv_number(*s.v_final);
      if (s.decay) line << ", decay rate " << csv_number(*s.decay);
    }
    return line.str();
  };
  out << "open loop:   " << describe(open_leg) << "\n";
  out << "closed loop: " << describe(closed_leg) << "\n";
  if (report.blowup_prevented) {
    out << "blow-up prevented: the feedback stabilized a plant that diverges uncontrolled\n";
  } else if (open_leg.outcome == Outcome::Completed &&
             closed_leg.outcome == Outcome::Completed && open_leg.decay && closed_leg.decay) {
    out << "both legs completed; decay rates " << csv_number(*open_leg.decay) << " (open) vs "
        << csv_number(*closed_leg.decay) << " (closed)\n";
  }
  report.text = out.str();
  return report;
}

}  // namespace crdctl
