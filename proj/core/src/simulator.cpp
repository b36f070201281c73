#include "crdctl/simulator.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "crdctl/errors.hpp"

namespace crdctl {

namespace {

double int_pow(double u, int p) {
  double r = 1.0;
  for (int k = 0; k < p; ++k) r *= u;
  return r;
}

}  // namespace

double reaction_eval(const ReactionSpec& spec, double u) {
  double r = 0.0;
  for (const auto& term : spec.terms) r += term.coeff * int_pow(u, term.power);
  return r;
}

const char* to_string(Convection kind) {
  switch (kind) {
    case Convection::None: return "none";
    case Convection::FlowPositive: return "flow_positive";
    case Convection::FlowNegative: return "flow_negative";
    case Convection::Counter: return "counter";
    case Convection::Buckmaster: return "buckmaster";
    case Convection::CounterNegative: return "counter_negative";
    case Convection::BuckmasterNegative: return "buckmaster_negative";
  }
  return "?";
}

BoundarySide actuated_side(Convection kind) {
  switch (kind) {
    case Convection::CounterNegative:
    case Convection::BuckmasterNegative:
      return BoundarySide::Right;
    default:
      return BoundarySide::Left;
  }
}

namespace {

// The Lyapunov argument only closes when the feedback law matches the plant
// convection and acts on the matching endpoint.
std::optional<ControllerKind> matching_controller(Convection kind) {
  switch (kind) {
    case Convection::FlowPositive: return ControllerKind::FlowPositive;
    case Convection::FlowNegative: return ControllerKind::FlowNegative;
    case Convection::Counter: return ControllerKind::Counter;
    case Convection::Buckmaster: return ControllerKind::Buckmaster;
    case Convection::CounterNegative: return ControllerKind::CounterRight;
    case Convection::BuckmasterNegative: return ControllerKind::BuckmasterRight;
    case Convection::None: return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

void validate(const SimConfig& config) {
  if (!(config.epsilon > 0.0)) throw ConfigError("config: epsilon must be positive");
  if (!(config.dt > 0.0)) throw ConfigError("config: dt must be positive");
  if (!(config.t_final >= config.dt)) throw ConfigError("config: t_final must be >= dt");
  if (config.grid_n < 4) throw ConfigError("config: grid_n must be at least 4");
  if (!(config.blowup_threshold > 0.0)) throw ConfigError("config: blowup threshold must be positive");
  if (config.snapshot_frames < 2) throw ConfigError("config: need at least 2 snapshot frames");
  for (const auto& term : config.reaction.terms) {
    if (term.power < 1) throw ConfigError("config: reaction powers must be >= 1 (no constant term)");
    if (!std::isfinite(term.coeff)) throw ConfigError("config: reaction coefficient not finite");
  }
  if (config.loop == LoopMode::Closed) {
    if (!config.controller) throw ConfigError("config: closed loop requires a controller spec");
    const auto expected = matching_controller(config.convection);
    if (!expected) {
      throw ConfigError("config: plant convection '" + std::string(to_string(config.convection)) +
                        "' admits no matching controller");
    }
    if (config.controller->kind != *expected) {
      throw ConfigError("config: controller kind '" + std::string(to_string(config.controller->kind)) +
                        "' does not match plant convection '" + to_string(config.convection) + "'");
    }
    if (!(config.controller->epsilon == config.epsilon)) {
      throw ConfigError("config: controller epsilon must equal plant epsilon");
    }
    if (!(config.controller->alpha.gain > 0.0) || !(config.controller->alpha.exponent >= 1.0)) {
      throw ConfigError("config: alpha requires gain > 0 and exponent >= 1");
    }
  }
}

Eigen::VectorXd convection_term(Convection kind, ConvectionForm form,
                                const GridState& state, const DiffOps& ops) {
  const int n = static_cast<int>(state.size());
  if (kind == Convection::None) return Eigen::VectorXd::Zero(n);

  double sign = 1.0;
  int degree = 1;
  switch (kind) {
    case Convection::FlowPositive: sign = 1.0; degree = 2; break;
    case Convection::FlowNegative: sign = -1.0; degree = 2; break;
    case Convection::Counter: sign = 1.0; degree = 1; break;
    case Convection::CounterNegative: sign = -1.0; degree = 1; break;
    case Convection::Buckmaster: sign = 1.0; degree = 3; break;
    case Convection::BuckmasterNegative: sign = -1.0; degree = 3; break;
    case Convection::None: break;
  }

  if (form == ConvectionForm::Conservative) {
    Eigen::VectorXd flux(n);
    for (int i = 0; i < n; ++i) flux(i) = sign * int_pow(state(i), degree);
    return ops.d1 * flux;
  }
  // Chain rule: C'(u) .* (d1*u)
  Eigen::VectorXd du = ops.d1 * state;
  for (int i = 0; i < n; ++i) {
    du(i) *= sign * degree * int_pow(state(i), degree - 1);
  }
  return du;
}

CnSystem cn_matrices(const SimConfig& config, const DiffOps& ops) {
  const int n = static_cast<int>(ops.d2.rows());
  const double scale = 0.5 * config.epsilon * config.dt;

  CnSystem cn;
  cn.left = Eigen::MatrixXd::Identity(n, n) - scale * ops.d2;
  cn.right = Eigen::MatrixXd::Identity(n, n) + scale * ops.d2;

  // Dirichlet rows: the boundary entries of the new state come straight from
  // the right-hand side.
  cn.left.row(0).setZero();
  cn.left(0, 0) = 1.0;
  cn.left.row(n - 1).setZero();
  cn.left(n - 1, n - 1) = 1.0;
  cn.right.row(0).setZero();
  cn.right.row(n - 1).setZero();

  cn.lu.compute(cn.left);
  if (!(cn.lu.rcond() > 1e-14)) {
    std::ostringstream msg;
    msg << "cn_matrices: left matrix numerically singular (rcond=" << cn.lu.rcond() << ")";
    throw NumericError(msg.str());
  }
  return cn;
}

GridState step(const GridState& state, double v, const CnSystem& cn,
               const SimConfig& config, const DiffOps& ops) {
  const int n = static_cast<int>(state.size());
  Eigen::VectorXd rhs = cn.right * state;
  rhs += config.dt * convection_term(config.convection, config.convection_form, state, ops);
  for (int i = 0; i < n; ++i) {
    rhs(i) += config.dt * reaction_eval(config.reaction, state(i));
  }

  const bool right_side = actuated_side(config.convection) == BoundarySide::Right;
  rhs(0) = right_side ? 0.0 : v;
  rhs(n - 1) = right_side ? v : 0.0;

  return cn.lu.solve(rhs);
}

RunResult run(const SimConfig& config, const DiffOps& ops, const GridState& initial) {
  validate(config);
  if (initial.size() != ops.d1.rows()) {
    throw std::invalid_argument("run: initial state length does not match operators");
  }

  const Grid grid = build_grid(config.grid_n);
  if (grid.n_nodes() != initial.size()) {
    throw std::invalid_argument("run: grid_n does not match initial state");
  }

  const CnSystem cn = cn_matrices(config, ops);
  const auto n_steps = static_cast<long>(std::llround(config.t_final / config.dt));
  const long stride = std::max<long>(1, (n_steps + config.snapshot_frames - 1) / config.snapshot_frames);
  const BoundarySide side = actuated_side(config.convection);

  FeedbackMap controller;
  if (config.loop == LoopMode::Closed) controller = make_controller(*config.controller);

  const auto reaction = [&](double u) { return reaction_eval(config.reaction, u); };

  RunResult result;
  result.series.reserve(n_steps + 1);
  GridState u = initial;

  for (long n = 0; n <= n_steps; ++n) {
    const double t = n * config.dt;
    const double max_abs = u.allFinite() ? u.cwiseAbs().maxCoeff()
                                         : std::numeric_limits<double>::infinity();
    if (!(max_abs <= config.blowup_threshold)) {
      // Terminal record computed without the finite-state guard.
      SeriesRecord rec;
      rec.t = t;
      rec.max_abs_u = max_abs;
      double vsum = 0.0;
      for (int i = 0; i < u.size(); ++i) vsum += 0.5 * ops.quad_weights(i) * u(i) * u(i);
      rec.lyapunov = vsum;
      rec.control = 0.0;
      rec.boundary_slope = std::numeric_limits<double>::quiet_NaN();
      rec.phi = std::numeric_limits<double>::quiet_NaN();
      result.series.push_back(rec);
      result.snapshots.push_back({t, u});
      result.outcome = Outcome::BlowUp;
      result.blowup_time = t;
      return result;
    }

    const FeedbackInputs in = feedback_inputs(u, ops, reaction, config.epsilon, side);
    const double v = controller ? controller(in) : 0.0;

    result.series.push_back({t, in.lyapunov, v, max_abs, in.boundary_slope, in.phi});
    if (n % stride == 0 || n == n_steps) result.snapshots.push_back({t, u});
    if (n == n_steps) break;

    u = step(u, v, cn, config, ops);
  }

  result.outcome = Outcome::Completed;
  return result;
}

double decay_rate(const std::vector<SeriesRecord>& series) {
  if (series.empty()) throw NumericError("decay_rate: empty series");
  const double v0 = series.front().lyapunov;
  const double floor = 1e-12 * v0;

  // Least squares of log V against t.
  long n = 0;
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (const auto& rec : series) {
    if (!(rec.lyapunov > 0.0) || !(rec.lyapunov > floor)) continue;
    const double y = std::log(rec.lyapunov);
    ++n;
    st += rec.t;
    sy += y;
    stt += rec.t * rec.t;
    sty += rec.t * y;
  }
  if (n < 10) throw NumericError("decay_rate: fewer than 10 usable points");
  const double denom = n * stt - st * st;
  if (denom == 0.0) throw NumericError("decay_rate: degenerate time axis");
  return (n * sty - st * sy) / denom;
}

CertificateReport check_certificate(const RunResult& result, const ControllerSpec& spec,
                                    double blowup_threshold) {
  CertificateReport report;
  bool first = true;
  for (const auto& rec : result.series) {
    if (!std::isfinite(rec.lyapunov) || !std::isfinite(rec.phi) ||
        !std::isfinite(rec.boundary_slope) || !(rec.max_abs_u <= blowup_threshold)) {
      continue;  // terminal blow-up record; no control was applied from it
    }
    FeedbackInputs in;
    in.lyapunov = rec.lyapunov;
    in.boundary_slope = rec.boundary_slope;
    in.phi = rec.phi;
    const double alpha = alpha_eval(spec.alpha, in.lyapunov);
    const double tol = 1e-8 * (1.0 + std::abs(in.phi) + alpha);
    const double vdot = vdot_closed_form(spec.kind, in, spec, rec.control);
    const double margin = vdot + alpha - tol;
    ++report.checked;
    if (margin > 0.0) ++report.violations;
    if (first || margin > report.worst_margin) report.worst_margin = margin;
    first = false;
  }
  return report;
}

}  // namespace crdctl
