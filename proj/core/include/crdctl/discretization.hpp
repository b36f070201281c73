#pragma once
#include <Eigen/Dense>
#include <functional>

#include "crdctl/controllers.hpp"

namespace crdctl {

/// Uniform collocation grid on [0,1]: n_intervals = N gives N+1 nodes i/N.
struct Grid {
  int n_intervals = 0;
  Eigen::VectorXd nodes;

  int n_nodes() const { return n_intervals + 1; }
  double spacing() const { return 1.0 / n_intervals; }
};

enum class DiffBackend { FiniteDifference, Multiquadric };

/// Dense differentiation matrices and quadrature weights on a grid.
/// Both backends satisfy d1*const = 0 and d1*nodes = 1 (to roundoff for the
/// finite-difference stencils, to solver accuracy for the collocation route),
/// and quad_weights sum to 1.
struct DiffOps {
  Eigen::MatrixXd d1;
  Eigen::MatrixXd d2;
  Eigen::VectorXd quad_weights;
  DiffBackend backend = DiffBackend::FiniteDifference;
  double shape = 0.0;  // multiquadric shape parameter; unused for FD
};

/// Nodal values of the PDE state on a grid.
using GridState = Eigen::VectorXd;

enum class BoundarySide { Left, Right };

/// Throws ConfigError for n_intervals < 4.
Grid build_grid(int n_intervals);

/// Second-order finite differences: central interior stencils, one-sided
/// endpoint rows (3-point for d1, 4-point for d2), trapezoidal weights.
DiffOps build_fd_diff_ops(const Grid& grid);

/// Multiquadric collocation with kernel sqrt((x-x_j)^2 + shape^2) augmented
/// by an affine tail, so constants and linears differentiate exactly. The
/// second-derivative matrix is d1*d1: collocating the kernel's own second
/// derivative degenerates when shape is far below the node spacing (the
/// kernel tends to |x-x_j|, whose second derivative concentrates at nodes).
/// Throws NumericError for non-distinct nodes or an ill-conditioned system.
DiffOps build_rbf_diff_ops(const Grid& grid, double shape);

/// Trapezoidal quadrature of nodal values over [0,1].
double trapezoid(const Eigen::VectorXd& values, const Grid& grid);

/// Extract the feedback functionals from a discrete state:
/// V = trapezoid(u^2)/2, slope = (d1*u) at the actuated endpoint,
/// phi = trapezoid(u*R(u) - eps*(d1*u)^2).
/// Throws NumericError if the state is not finite.
FeedbackInputs feedback_inputs(const GridState& state, const DiffOps& ops,
                               const std::function<double(double)>& reaction,
                               double epsilon, BoundarySide side);

}  // namespace crdctl
