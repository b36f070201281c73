#pragma once
#include <functional>

#include "crdctl/rootsolve.hpp"

namespace crdctl {

/// The triple of state functionals a boundary feedback law consumes:
/// the Lyapunov value V = (1/2)*integral(u^2), the state slope at the
/// actuated endpoint, and phi = integral(u*R(u) - eps*u_x^2).
struct FeedbackInputs {
  double lyapunov = 0.0;        // V >= 0
  double boundary_slope = 0.0;  // u_x at the actuated endpoint
  double phi = 0.0;
};

/// Class-K gain profile alpha(V) = gain * V^exponent with gain > 0 and
/// exponent >= 1 (continuous, strictly increasing, alpha(0) = 0).
struct AlphaSpec {
  double gain = 1.0;
  double exponent = 1.0;
};

/// Which feedback law to apply. The first four actuate the left endpoint
/// (x = 0); the Right variants actuate x = 1 and expect boundary_slope to be
/// u_x(1).
enum class ControllerKind {
  FlowPositive,     // plant convection +(u^2)_x
  FlowNegative,     // plant convection -(u^2)_x
  Counter,          // plant convection +u_x
  Buckmaster,       // plant convection +(u^3)_x
  CounterRight,     // plant convection -u_x, right actuation
  BuckmasterRight,  // plant convection -(u^3)_x, right actuation
};

/// Sign selector for the two-root laws (Counter and Buckmaster families).
enum class RootBranch { Plus, Minus };

struct ControllerSpec {
  ControllerKind kind = ControllerKind::FlowNegative;
  AlphaSpec alpha;
  double epsilon = 1.0;  // plant diffusion coefficient, > 0
  RootBranch branch = RootBranch::Plus;
};

const char* to_string(ControllerKind kind);
bool is_right_actuated(ControllerKind kind);

/// alpha(V) = gain * V^exponent. Throws std::domain_error for V < 0.
double alpha_eval(const AlphaSpec& spec, double lyapunov);

/// Depressed-cubic coefficients for the two flow-convection laws. Both
/// constructions have nonnegative discriminant for every input.
DepressedCubic build_cubic_flow_positive(const FeedbackInputs& in, const ControllerSpec& spec);
DepressedCubic build_cubic_flow_negative(const FeedbackInputs& in, const ControllerSpec& spec);

/// Feedback value for the flow (cubic), counter (quadratic) and Buckmaster
/// (biquadratic) families. Each returns exactly 0 on zero inputs.
double control_flow(const FeedbackInputs& in, const ControllerSpec& spec);
double control_counter(const FeedbackInputs& in, const ControllerSpec& spec);
double control_buckmaster(const FeedbackInputs& in, const ControllerSpec& spec);

/// Closed-form value of dV/dt for the given kind once the boundary value v is
/// applied: phi plus the kind-specific control terms. For the Buckmaster
/// family this is the Young-inequality upper bound, which is what the
/// controller construction certifies.
double vdot_closed_form(ControllerKind kind, const FeedbackInputs& in,
                        const ControllerSpec& spec, double v);

using FeedbackMap = std::function<double(const FeedbackInputs&)>;

/// Dispatch to the law selected by spec.kind. The returned map is stateless.
FeedbackMap make_controller(const ControllerSpec& spec);

}  // namespace crdctl
