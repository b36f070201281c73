#include "crdctl/controllers.hpp"

#include <cmath>
#include <stdexcept>

#include "crdctl/errors.hpp"

namespace crdctl {

const char* to_string(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::FlowPositive: return "flow_positive";
    case ControllerKind::FlowNegative: return "flow_negative";
    case ControllerKind::Counter: return "counter";
    case ControllerKind::Buckmaster: return "buckmaster";
    case ControllerKind::CounterRight: return "counter_right";
    case ControllerKind::BuckmasterRight: return "buckmaster_right";
  }
  return "?";
}

bool is_right_actuated(ControllerKind kind) {
  return kind == ControllerKind::CounterRight || kind == ControllerKind::BuckmasterRight;
}

double alpha_eval(const AlphaSpec& spec, double lyapunov) {
  if (lyapunov < 0.0) throw std::domain_error("alpha_eval: negative Lyapunov value");
  if (spec.exponent == 1.0) return spec.gain * lyapunov;
  return spec.gain * std::pow(lyapunov, spec.exponent);
}

namespace {

// alpha(V) + |phi|, the state-dependent bulk that every law must dominate.
double forcing(const FeedbackInputs& in, const ControllerSpec& spec) {
  return alpha_eval(spec.alpha, in.lyapunov) + std::abs(in.phi);
}

double slope_term(double epsilon, double slope) {
  // sqrt(2*eps^3)/2 * |slope|^(3/2)
  return 0.5 * std::sqrt(2.0 * epsilon * epsilon * epsilon) *
         std::pow(std::abs(slope), 1.5);
}

}  // namespace

DepressedCubic build_cubic_flow_positive(const FeedbackInputs& in, const ControllerSpec& spec) {
  const double s = in.boundary_slope;
  return DepressedCubic{
      1.5 * spec.epsilon * s,
      -1.5 * forcing(in, spec) - slope_term(spec.epsilon, s),
  };
}

DepressedCubic build_cubic_flow_negative(const FeedbackInputs& in, const ControllerSpec& spec) {
  const double s = in.boundary_slope;
  return DepressedCubic{
      -1.5 * spec.epsilon * s,
      1.5 * forcing(in, spec) + slope_term(spec.epsilon, s),
  };
}

double control_flow(const FeedbackInputs& in, const ControllerSpec& spec) {
  switch (spec.kind) {
    case ControllerKind::FlowPositive:
      return cardano_real_root(build_cubic_flow_positive(in, spec));
    case ControllerKind::FlowNegative:
      return cardano_real_root(build_cubic_flow_negative(in, spec));
    default:
      throw ConfigError("control_flow: controller kind is not a flow kind");
  }
}

double control_counter(const FeedbackInputs& in, const ControllerSpec& spec) {
  if (spec.kind != ControllerKind::Counter && spec.kind != ControllerKind::CounterRight) {
    throw ConfigError("control_counter: controller kind is not a counter kind");
  }
  // dV/dt = phi + b*v - v^2/2 with b = -eps*u_x(0) (left) or +eps*u_x(1)
  // (right). Solve -v^2/2 + b*v + c = 0 with c = alpha(V) + |phi| >= 0.
  const double b = (spec.kind == ControllerKind::Counter ? -1.0 : 1.0) *
                   spec.epsilon * in.boundary_slope;
  const double c = forcing(in, spec);
  const auto [lo, hi] = quadratic_roots(QuadraticCoeffs{-0.5, b, c});
  return spec.branch == RootBranch::Plus ? hi : lo;
}

double control_buckmaster(const FeedbackInputs& in, const ControllerSpec& spec) {
  if (spec.kind != ControllerKind::Buckmaster && spec.kind != ControllerKind::BuckmasterRight) {
    throw ConfigError("control_buckmaster: controller kind is not a Buckmaster kind");
  }
  // After the Young bound the quartic in v becomes a quadratic in w = v^2:
  // -(3/4)w^2 + b*w + c = 0, b = |s|/2, c = alpha(V) + |phi| + (eps^2/2)|s|.
  const double abs_s = std::abs(in.boundary_slope);
  const double b = 0.5 * abs_s;
  const double c = forcing(in, spec) + 0.5 * spec.epsilon * spec.epsilon * abs_s;
  const auto [lo, hi] = quadratic_roots(QuadraticCoeffs{-0.75, b, c});
  (void)lo;  // the smaller root is nonpositive; v^2 needs the larger one
  const double v = std::sqrt(hi);
  return spec.branch == RootBranch::Plus ? v : -v;
}

double vdot_closed_form(ControllerKind kind, const FeedbackInputs& in,
                        const ControllerSpec& spec, double v) {
  const double s = in.boundary_slope;
  const double eps = spec.epsilon;
  switch (kind) {
    case ControllerKind::FlowPositive:
      return in.phi - (2.0 / 3.0) * v * v * v - eps * v * s;
    case ControllerKind::FlowNegative:
      return in.phi + (2.0 / 3.0) * v * v * v - eps * v * s;
    case ControllerKind::Counter:
      return in.phi - 0.5 * v * v - eps * v * s;
    case ControllerKind::CounterRight:
      return in.phi - 0.5 * v * v + eps * v * s;
    case ControllerKind::Buckmaster:
    case ControllerKind::BuckmasterRight:
      // Young-inequality upper bound on dV/dt; the sign of the slope term is
      // already absorbed into |s|.
      return in.phi - 0.75 * v * v * v * v + 0.5 * std::abs(s) * v * v +
             0.5 * eps * eps * std::abs(s);
  }
  throw ConfigError("vdot_closed_form: unknown controller kind");
}

FeedbackMap make_controller(const ControllerSpec& spec) {
  switch (spec.kind) {
    case ControllerKind::FlowPositive:
    case ControllerKind::FlowNegative:
      return [spec](const FeedbackInputs& in) { return control_flow(in, spec); };
    case ControllerKind::Counter:
    case ControllerKind::CounterRight:
      return [spec](const FeedbackInputs& in) { return control_counter(in, spec); };
    case ControllerKind::Buckmaster:
    case ControllerKind::BuckmasterRight:
      return [spec](const FeedbackInputs& in) { return control_buckmaster(in, spec); };
  }
  throw ConfigError("make_controller: unknown controller kind");
}

}  // namespace crdctl
