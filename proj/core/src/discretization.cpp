#include "crdctl/discretization.hpp"

#include <cmath>
#include <sstream>

#include "crdctl/errors.hpp"

namespace crdctl {

Grid build_grid(int n_intervals) {
  if (n_intervals < 4) {
    throw ConfigError("build_grid: need at least 4 intervals, got " +
                      std::to_string(n_intervals));
  }
  Grid g;
  g.n_intervals = n_intervals;
  g.nodes = Eigen::VectorXd::LinSpaced(n_intervals + 1, 0.0, 1.0);
  return g;
}

namespace {

Eigen::VectorXd trapezoid_weights(const Grid& grid) {
  const int n = grid.n_nodes();
  const double h = grid.spacing();
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, h);
  w(0) = 0.5 * h;
  w(n - 1) = 0.5 * h;
  return w;
}

void check_d1_identities(const DiffOps& ops, const Grid& grid) {
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(grid.n_nodes());
  const double const_err = (ops.d1 * ones).cwiseAbs().maxCoeff();
  const double lin_err = (ops.d1 * grid.nodes - ones).cwiseAbs().maxCoeff();
  if (const_err > 1e-6 || lin_err > 1e-6) {
    std::ostringstream msg;
    msg << "diff ops fail affine-exactness checks: |d1*1|=" << const_err
        << ", |d1*x-1|=" << lin_err;
    throw NumericError(msg.str());
  }
}

}  // namespace

DiffOps build_fd_diff_ops(const Grid& grid) {
  const int n = grid.n_nodes();
  const double h = grid.spacing();

  DiffOps ops;
  ops.backend = DiffBackend::FiniteDifference;
  ops.d1 = Eigen::MatrixXd::Zero(n, n);
  ops.d2 = Eigen::MatrixXd::Zero(n, n);
  ops.quad_weights = trapezoid_weights(grid);

  for (int i = 1; i + 1 < n; ++i) {
    ops.d1(i, i - 1) = -0.5 / h;
    ops.d1(i, i + 1) = 0.5 / h;
    ops.d2(i, i - 1) = 1.0 / (h * h);
    ops.d2(i, i) = -2.0 / (h * h);
    ops.d2(i, i + 1) = 1.0 / (h * h);
  }
  // One-sided second-order endpoint rows.
  ops.d1(0, 0) = -1.5 / h;
  ops.d1(0, 1) = 2.0 / h;
  ops.d1(0, 2) = -0.5 / h;
  ops.d1(n - 1, n - 1) = 1.5 / h;
  ops.d1(n - 1, n - 2) = -2.0 / h;
  ops.d1(n - 1, n - 3) = 0.5 / h;

  ops.d2(0, 0) = 2.0 / (h * h);
  ops.d2(0, 1) = -5.0 / (h * h);
  ops.d2(0, 2) = 4.0 / (h * h);
  ops.d2(0, 3) = -1.0 / (h * h);
  ops.d2(n - 1, n - 1) = 2.0 / (h * h);
  ops.d2(n - 1, n - 2) = -5.0 / (h * h);
  ops.d2(n - 1, n - 3) = 4.0 / (h * h);
  ops.d2(n - 1, n - 4) = -1.0 / (h * h);

  return ops;
}

DiffOps build_rbf_diff_ops(const Grid& grid, double shape) {
  if (!(shape > 0.0)) throw ConfigError("build_rbf_diff_ops: shape must be positive");
  const int n = grid.n_nodes();
  const Eigen::VectorXd& x = grid.nodes;
  for (int i = 1; i < n; ++i) {
    if (!(x(i) > x(i - 1))) {
      throw NumericError("build_rbf_diff_ops: nodes must be distinct and increasing");
    }
  }

  const double c2 = shape * shape;
  Eigen::MatrixXd kernel(n, n), kernel_dx(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double r = x(i) - x(j);
      const double root = std::sqrt(r * r + c2);
      kernel(i, j) = root;
      kernel_dx(i, j) = r / root;
    }
  }

  // Symmetric collocation augmented with {1, x}; the moment constraints make
  // the saddle system nonsingular even in the distance-kernel limit.
  const int m = n + 2;
  Eigen::MatrixXd saddle = Eigen::MatrixXd::Zero(m, m);
  saddle.topLeftCorner(n, n) = kernel;
  saddle.block(0, n, n, 1) = Eigen::VectorXd::Ones(n);
  saddle.block(0, n + 1, n, 1) = x;
  saddle.block(n, 0, 1, n) = Eigen::RowVectorXd::Ones(n);
  saddle.block(n + 1, 0, 1, n) = x.transpose();

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(saddle);
  const double rc = lu.rcond();
  if (!(rc > 1e-14)) {
    std::ostringstream msg;
    msg << "build_rbf_diff_ops: collocation system is numerically singular"
        << " (rcond=" << rc << ", shape=" << shape << ")";
    throw NumericError(msg.str());
  }

  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(m, n);
  rhs.topLeftCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd coeffs = lu.solve(rhs);

  DiffOps ops;
  ops.backend = DiffBackend::Multiquadric;
  ops.shape = shape;
  // d1 row i: kernel derivatives at x_i times the kernel coefficients, plus
  // the affine tail's unit slope.
  ops.d1 = kernel_dx * coeffs.topRows(n);
  ops.d1.rowwise() += coeffs.row(n + 1);
  ops.d2 = ops.d1 * ops.d1;
  ops.quad_weights = trapezoid_weights(grid);

  check_d1_identities(ops, grid);
  return ops;
}

double trapezoid(const Eigen::VectorXd& values, const Grid& grid) {
  if (values.size() != grid.n_nodes()) {
    throw std::invalid_argument("trapezoid: values length does not match grid");
  }
  const double h = grid.spacing();
  double inner = 0.0;
  for (int i = 1; i + 1 < values.size(); ++i) inner += values(i);
  return h * (0.5 * values(0) + inner + 0.5 * values(values.size() - 1));
}

FeedbackInputs feedback_inputs(const GridState& state, const DiffOps& ops,
                               const std::function<double(double)>& reaction,
                               double epsilon, BoundarySide side) {
  if (state.size() != ops.d1.rows()) {
    throw std::invalid_argument("feedback_inputs: state length does not match operators");
  }
  if (!state.allFinite()) {
    throw NumericError("feedback_inputs: state contains non-finite values");
  }

  const Eigen::VectorXd slope = ops.d1 * state;
  const Eigen::VectorXd& w = ops.quad_weights;

  double lyapunov = 0.0, phi = 0.0;
  for (int i = 0; i < state.size(); ++i) {
    const double u = state(i);
    lyapunov += 0.5 * w(i) * u * u;
    phi += w(i) * (u * reaction(u) - epsilon * slope(i) * slope(i));
  }

  FeedbackInputs in;
  in.lyapunov = lyapunov;
  in.phi = phi;
  in.boundary_slope = (side == BoundarySide::Left) ? slope(0) : slope(state.size() - 1);
  return in;
}

}  // namespace crdctl
