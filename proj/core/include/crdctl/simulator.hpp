#pragma once
#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "crdctl/discretization.hpp"

namespace crdctl {

/// Polynomial reaction R(u) = sum coeff * u^power with integer powers >= 1,
/// so R(0) = 0 always holds.
struct ReactionTerm {
  double coeff = 0.0;
  int power = 1;

  friend bool operator==(const ReactionTerm&, const ReactionTerm&) = default;
};

struct ReactionSpec {
  std::vector<ReactionTerm> terms;

  friend bool operator==(const ReactionSpec&, const ReactionSpec&) = default;
};

double reaction_eval(const ReactionSpec& spec, double u);

/// Plant convection C(u)_x. The flux C(u) is +-u^2, +-u, +-u^3 or absent.
enum class Convection {
  None,              // pure reaction-diffusion
  FlowPositive,      // +(u^2)_x
  FlowNegative,      // -(u^2)_x
  Counter,           // +u_x
  Buckmaster,        // +(u^3)_x
  CounterNegative,   // -u_x   (right-actuated plant)
  BuckmasterNegative // -(u^3)_x (right-actuated plant)
};

const char* to_string(Convection kind);

/// Which endpoint carries the control value for this plant.
BoundarySide actuated_side(Convection kind);

/// How the convection term is discretized: d1 applied to the flux C(u), or
/// the chain-rule form C'(u) .* (d1*u).
enum class ConvectionForm { Conservative, ChainRule };

enum class LoopMode { Open, Closed };

struct SimConfig {
  double epsilon = 1.0;
  ReactionSpec reaction;
  Convection convection = Convection::None;
  ConvectionForm convection_form = ConvectionForm::Conservative;
  int grid_n = 100;
  double dt = 1e-3;
  double t_final = 1.0;
  LoopMode loop = LoopMode::Open;
  std::optional<ControllerSpec> controller;  // required when loop == Closed
  double blowup_threshold = 1e6;
  int snapshot_frames = 200;
};

/// Throws ConfigError on invalid values or a controller whose kind does not
/// match the plant convection and actuation side.
void validate(const SimConfig& config);

/// Pre-factored Crank-Nicolson system for the diffusion part:
/// left = I - (eps*dt/2)*d2 with identity rows at both boundary nodes,
/// right = I + (eps*dt/2)*d2 with zeroed boundary rows.
struct CnSystem {
  Eigen::MatrixXd left;
  Eigen::MatrixXd right;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
};

CnSystem cn_matrices(const SimConfig& config, const DiffOps& ops);

/// dt-free convection contribution d1*C(u) (or chain-rule variant).
Eigen::VectorXd convection_term(Convection kind, ConvectionForm form,
                                const GridState& state, const DiffOps& ops);

/// One step: explicit convection + reaction, Crank-Nicolson diffusion,
/// Dirichlet value v at the actuated endpoint and 0 at the other.
GridState step(const GridState& state, double v, const CnSystem& cn,
               const SimConfig& config, const DiffOps& ops);

struct SeriesRecord {
  double t = 0.0;
  double lyapunov = 0.0;
  double control = 0.0;
  double max_abs_u = 0.0;
  double boundary_slope = 0.0;
  double phi = 0.0;  // kept for the per-step certificate; not part of the CSV schema
};

struct Snapshot {
  double t = 0.0;
  GridState state;
};

enum class Outcome { Completed, BlowUp };

struct RunResult {
  std::vector<SeriesRecord> series;
  std::vector<Snapshot> snapshots;
  Outcome outcome = Outcome::Completed;
  double blowup_time = 0.0;  // meaningful only when outcome == BlowUp
};

/// Run the closed or open loop from the given initial state.
RunResult run(const SimConfig& config, const DiffOps& ops, const GridState& initial);

/// Least-squares slope of log V(t) over the window V > 1e-12 * V(0).
/// Throws NumericError when fewer than 10 usable points exist.
double decay_rate(const std::vector<SeriesRecord>& series);

/// Re-check the algebraic decrease condition on every recorded step of a
/// closed-loop run: vdot_closed_form(inputs, v) <= -alpha(V) + tol with
/// tol = 1e-8 * (1 + |phi| + alpha(V)). Records with non-finite or
/// over-threshold states (the terminal blow-up record) are skipped.
struct CertificateReport {
  int checked = 0;
  int violations = 0;
  double worst_margin = 0.0;  // max of (vdot + alpha - tol); <= 0 when clean
};

CertificateReport check_certificate(const RunResult& result, const ControllerSpec& spec,
                                    double blowup_threshold = 1e6);

}  // namespace crdctl
