#pragma once
#include <functional>
#include <string>
#include <vector>

#include "crdctl/simulator.hpp"

namespace crdctl {

/// One term of the initial-condition expression language: sums of a*x^k,
/// a*cos(b*pi*x) and a*sin(b*pi*x).
struct IcTerm {
  enum class Kind { Poly, Cos, Sin };
  Kind kind = Kind::Poly;
  double amplitude = 0.0;
  double param = 0.0;  // exponent k for Poly, frequency b for Cos/Sin

  friend bool operator==(const IcTerm&, const IcTerm&) = default;
};

/// Parsed experiment file: sectioned key = value text, strict about unknown
/// sections and keys. See the README for the full key list.
struct ExperimentFile {
  // [plant]
  double epsilon = 1.0;
  Convection convection = Convection::None;
  ReactionSpec reaction;
  // [grid]
  int grid_n = 100;
  DiffBackend backend = DiffBackend::FiniteDifference;
  double shape = 1e-9;
  // [time]
  double dt = 1e-3;
  double t_final = 1.0;
  // [control]
  LoopMode mode = LoopMode::Open;
  ControllerKind kind = ControllerKind::FlowNegative;
  double alpha_gain = 1.0;
  double alpha_exponent = 1.0;
  RootBranch branch = RootBranch::Plus;
  // [ic]
  std::string ic_preset;        // non-empty when a named profile was requested
  std::vector<IcTerm> ic_terms;
  // [output]
  std::string directory = "out";
  int snapshots = 200;
  double blowup_threshold = 1e6;

  friend bool operator==(const ExperimentFile&, const ExperimentFile&) = default;
};

/// Throws ConfigError with a line number on syntax errors and with the key
/// name on validation errors.
ExperimentFile parse_config(const std::string& text);

/// Canonical text form; parse_config(render_config(f)) == f.
std::string render_config(const ExperimentFile& file);

/// The initial condition as a callable profile.
std::function<double(double)> ic_function(const ExperimentFile& file);

/// Translate to the simulator's configuration (controller attached when the
/// control mode is closed).
SimConfig to_sim_config(const ExperimentFile& file);

/// Shipped experiment presets, addressable as "preset:<name>" on the CLI.
std::vector<std::string> preset_names();
bool is_preset(const std::string& name);
std::string preset_text(const std::string& name);  // throws ConfigError if unknown
std::string preset_description(const std::string& name);

}  // namespace crdctl
