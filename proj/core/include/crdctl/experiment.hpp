#pragma once
#include <optional>
#include <string>

#include "crdctl/config.hpp"

namespace crdctl {

/// Command-line overrides applied on top of a parsed experiment file.
struct RunOverrides {
  std::optional<std::string> out_dir;
  std::optional<DiffBackend> backend;
  bool force_open_loop = false;
};

struct RunSummary {
  Outcome outcome = Outcome::Completed;
  double v_initial = 0.0;
  std::optional<double> v_final;      // set when the run completed
  std::optional<double> blowup_time;  // set when the run blew up
  std::optional<double> decay;        // least-squares log-V slope, when estimable
  double max_abs_control = 0.0;
  double wall_seconds = 0.0;

  // Settings echo so comparisons can verify both legs match.
  double epsilon = 0.0;
  Convection convection = Convection::None;
  int grid_n = 0;
  double dt = 0.0;
  double t_final = 0.0;
  LoopMode loop = LoopMode::Open;
  std::string out_dir;
};

/// Run one experiment and write series.csv, snapshots.csv, summary.txt and
/// plots/*.svg under the output directory (rooted at $CRDCTL_OUT_ROOT when
/// that variable is set and the directory is relative).
RunSummary run_experiment(const ExperimentFile& file, const RunOverrides& overrides = {});

/// Library-level run without artifacts; also returns the raw trajectory.
RunSummary summarize(const ExperimentFile& file, const RunResult& result,
                     const std::string& out_dir);
RunResult execute(const ExperimentFile& file, const RunOverrides& overrides = {});

struct ComparisonReport {
  bool blowup_prevented = false;
  std::string text;
};

/// Side-by-side open vs closed report. Throws std::invalid_argument when the
/// two legs were produced with different plant/grid/time settings.
ComparisonReport compare(const RunSummary& open_leg, const RunSummary& closed_leg);

/// CSV serialization used for series.csv (schema: t,V,v,max_abs_u,boundary_slope).
std::string series_csv(const RunResult& result);
std::string snapshots_csv(const RunResult& result, const Grid& grid);
std::string summary_text(const RunSummary& summary);

/// Shortest round-trip decimal formatting used in all CSV output.
std::string csv_number(double x);

/// Exit code mapping documented in the README: 0 completed, 2 blow-up,
/// 3 configuration error, 4 numeric failure.
int exit_code_for(Outcome outcome);

/// Resolve the effective output directory (environment root + override).
std::string resolve_out_dir(const std::string& configured,
                            const std::optional<std::string>& override_dir);

}  // namespace crdctl
