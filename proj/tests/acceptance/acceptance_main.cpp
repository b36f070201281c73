// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Usage: acceptance <crdctl-cli-path> <golden-data-dir>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "crdctl/experiment.hpp"
#include "crdctl/svg.hpp"

using namespace crdctl;
namespace fs = std::filesystem;
using std::numbers::pi;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what, const std::string& detail) {
  std::cout << (pass ? "PASS" : "FAIL") << "  criterion " << criterion << ": " << what;
  if (!detail.empty()) std::cout << "  [" << detail << "]";
  std::cout << "\n" << std::flush;
  if (!pass) ++g_failures;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

FeedbackInputs random_inputs(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> expo(-6.0, 6.0);
  std::uniform_real_distribution<double> slope(-1e3, 1e3);
  std::bernoulli_distribution sign(0.5), zero(0.01);
  FeedbackInputs in;
  in.lyapunov = zero(rng) ? 0.0 : std::pow(10.0, expo(rng));
  in.boundary_slope = slope(rng);
  in.phi = zero(rng) ? 0.0 : (sign(rng) ? 1.0 : -1.0) * std::pow(10.0, expo(rng));
  return in;
}

const ControllerKind kKinds[] = {
    ControllerKind::FlowPositive, ControllerKind::FlowNegative, ControllerKind::Counter,
    ControllerKind::Buckmaster, ControllerKind::CounterRight, ControllerKind::BuckmasterRight,
};

Eigen::VectorXd sample_profile(const Grid& grid, double amplitude) {
  Eigen::VectorXd u(grid.n_nodes());
  for (int i = 0; i < grid.n_nodes(); ++i) {
    u(i) = -amplitude * (std::cos(10.0 * pi * grid.nodes(i)) - 1.0);
  }
  return u;
}

SimConfig blowup_config(LoopMode loop) {
  SimConfig c;
  c.epsilon = 0.0002;
  c.convection = Convection::FlowNegative;
  c.reaction.terms = {{0.01, 3}};
  c.grid_n = 500;
  c.dt = 1e-4;
  c.t_final = 5.0;
  c.loop = loop;
  if (loop == LoopMode::Closed) {
    c.controller = ControllerSpec{ControllerKind::FlowNegative, {1.0, 1.0}, 0.0002, RootBranch::Plus};
  }
  return c;
}

// ---------------------------------------------------------------------------

void criterion_1_and_3() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  bool ineq_ok = true;
  bool disc_ok = true;
  double worst_margin = -1e300;
  double worst_disc = 1e300;
  std::string ineq_detail;

  for (const auto kind : kKinds) {
    const ControllerSpec spec{kind, {1.0, 1.0}, 0.0002, RootBranch::Plus};
    const FeedbackMap controller = make_controller(spec);
    for (int i = 0; i < 100000; ++i) {
      const FeedbackInputs in = random_inputs(rng);
      const double v = controller(in);
      const double alpha = alpha_eval(spec.alpha, in.lyapunov);
      const double tol = 1e-8 * (1.0 + std::abs(in.phi) + alpha);
      const double margin = vdot_closed_form(kind, in, spec, v) + alpha - tol;
      if (margin > worst_margin) worst_margin = margin;
      if (margin > 0.0) {
        ineq_ok = false;
        if (ineq_detail.empty()) {
          std::ostringstream d;
          d << to_string(kind) << " violated by " << margin;
          ineq_detail = d.str();
        }
      }
      // Criterion 3 piggybacks on the same sampled inputs.
      using CubicBuilder = DepressedCubic (*)(const FeedbackInputs&, const ControllerSpec&);
      for (CubicBuilder builder : {&build_cubic_flow_positive, &build_cubic_flow_negative}) {
        const DepressedCubic c = builder(in, spec);
        const double slack = c.discriminant() + c.fp_slack();
        if (slack < worst_disc) worst_disc = slack;
        if (slack < 0.0) disc_ok = false;
      }
    }
  }
  const double secs = elapsed_s(t0);
  {
    std::ostringstream d;
    d << "6x100000 samples, worst margin " << worst_margin << ", " << secs << " s";
    report(1, ineq_ok && secs < 10.0, "stabilization inequality vdot <= -alpha(V) for all six kinds",
           ineq_detail.empty() ? d.str() : ineq_detail);
  }
  {
    std::ostringstream d;
    d << "min(discriminant + slack) = " << worst_disc;
    report(3, disc_ok, "controller-built cubics keep a nonnegative discriminant", d.str());
  }
}

void criterion_2() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> expo(-6.0, 6.0);
  std::bernoulli_distribution sign(0.5);
  const auto draw = [&] {
    const double m = std::pow(10.0, expo(rng));
    return sign(rng) ? m : -m;
  };

  bool ok = true;
  std::string detail;
  double worst_ratio = 0.0;
  const auto check_residual = [&](const DepressedCubic& c) {
    const double v = cardano_real_root(c);
    const double bound =
        1e-10 * std::max({1.0, std::pow(std::abs(c.beta), 1.5), std::abs(c.q)});
    const double res = std::abs(c.eval(v));
    worst_ratio = std::max(worst_ratio, res / bound);
    if (res > bound) {
      ok = false;
      if (detail.empty()) {
        std::ostringstream d;
        d << "residual " << res << " > bound " << bound << " at beta=" << c.beta
          << " q=" << c.q;
        detail = d.str();
      }
    }
  };

  for (int i = 0; i < 100000; ++i) {
    DepressedCubic c{draw(), draw()};
    if (c.beta < 0.0) {
      const double qmin = 2.0 * std::pow(-c.beta, 1.5) / (3.0 * std::sqrt(3.0));
      if (std::abs(c.q) < qmin) c.q = std::copysign(qmin * 1.0000001, c.q);
    }
    check_residual(c);
  }
  std::uniform_real_distribution<double> texpo(-2.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const double t = std::pow(10.0, texpo(rng));
    check_residual({-3.0 * t * t, (sign(rng) ? 2.0 : -2.0) * t * t * t});
  }

  const double pinned = cardano_real_root({-3.0, 2.0});
  if (std::abs(pinned + 2.0) > 1e-12) {
    ok = false;
    detail = "pinned double-root case returned " + std::to_string(pinned);
  }
  if (detail.empty()) {
    std::ostringstream d;
    d << "100000 random + 1000 double roots, worst residual/bound = " << worst_ratio;
    detail = d.str();
  }
  report(2, ok, "Cardano residual bound incl. exact double roots", detail);
}

void criterion_4() {
  bool origin_ok = true;
  for (const auto kind : kKinds) {
    for (const auto branch : {RootBranch::Plus, RootBranch::Minus}) {
      const ControllerSpec spec{kind, {1.0, 1.0}, 0.0002, branch};
      if (make_controller(spec)({0.0, 0.0, 0.0}) != 0.0) origin_ok = false;
    }
  }

  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> vbox(0.0, 1e3), sbox(-1e2, 1e2), pbox(-1e3, 1e3);
  bool cont_ok = true;
  std::string detail;
  double worst = 0.0;
  for (const auto kind : kKinds) {
    const FeedbackMap map = make_controller(ControllerSpec{kind, {1.0, 1.0}, 0.1, RootBranch::Plus});
    for (int seg = 0; seg < 100; ++seg) {
      const FeedbackInputs a{vbox(rng), sbox(rng), pbox(rng)};
      const FeedbackInputs b{vbox(rng), sbox(rng), pbox(rng)};
      const auto at = [&](double s) {
        return map({a.lyapunov + s * (b.lyapunov - a.lyapunov),
                    a.boundary_slope + s * (b.boundary_slope - a.boundary_slope),
                    a.phi + s * (b.phi - a.phi)});
      };
      const auto max_jump = [&](int n) {
        double jump = 0.0, prev = at(0.0);
        for (int i = 1; i <= n; ++i) {
          const double cur = at(static_cast<double>(i) / n);
          jump = std::max(jump, std::abs(cur - prev));
          prev = cur;
        }
        return jump;
      };
      const double coarse = max_jump(100);
      const double fine = max_jump(1000);
      if (coarse > 0.0) worst = std::max(worst, fine / coarse);
      if (fine > 0.5 * coarse + 1e-13) {
        cont_ok = false;
        if (detail.empty()) {
          std::ostringstream d;
          d << to_string(kind) << " segment " << seg << ": fine " << fine << " vs coarse "
            << coarse;
          detail = d.str();
        }
      }
    }
  }
  if (detail.empty()) {
    std::ostringstream d;
    d << "origin exact for 6 kinds x 2 branches; worst fine/coarse jump ratio " << worst;
    detail = d.str();
  }
  report(4, origin_ok && cont_ok, "exact zero at the origin and jump decay under refinement",
         detail);
}

struct BlowupRuns {
  RunResult open;
  RunResult closed;
};

BlowupRuns criterion_5_and_6() {
  BlowupRuns runs;
  const Grid grid = build_grid(500);
  const DiffOps ops = build_rbf_diff_ops(grid, 1e-9);
  const Eigen::VectorXd u0 = sample_profile(grid, 300.0);

  {
    const auto t0 = std::chrono::steady_clock::now();
    runs.open = run(blowup_config(LoopMode::Open), ops, u0);
    const double secs = elapsed_s(t0);
    std::ostringstream d;
    d << "outcome " << (runs.open.outcome == Outcome::BlowUp ? "BlowUp" : "Completed");
    if (runs.open.outcome == Outcome::BlowUp) d << " at t = " << runs.open.blowup_time;
    d << ", " << secs << " s";
    report(5, runs.open.outcome == Outcome::BlowUp && runs.open.blowup_time <= 5.0 && secs <= 120.0,
           "open-loop blow-up experiment diverges within t <= 5", d.str());
  }
  {
    const SimConfig config = blowup_config(LoopMode::Closed);
    runs.closed = run(config, ops, u0);

    const double v0 = runs.closed.series.front().lyapunov;
    const bool v0_ok = std::abs(v0 - 67500.0) <= 1.0;
    const bool completed = runs.closed.outcome == Outcome::Completed;

    bool monotone = true;
    double worst_step = 0.0;
    for (std::size_t i = 1; i < runs.closed.series.size(); ++i) {
      const double prev = runs.closed.series[i - 1].lyapunov;
      const double cur = runs.closed.series[i].lyapunov;
      if (std::isfinite(prev) && std::isfinite(cur) && prev > 0.0) {
        worst_step = std::max(worst_step, cur / prev);
        if (cur > prev * (1.0 + 1e-3)) monotone = false;
      }
    }
    bool rate_ok = false;
    double rate = std::numeric_limits<double>::quiet_NaN();
    if (completed) {
      try {
        rate = decay_rate(runs.closed.series);
        rate_ok = rate <= -0.5;
      } catch (const std::exception&) {
        rate_ok = false;
      }
    }
    std::ostringstream d;
    d << "V(0) = " << v0 << (v0_ok ? " (in 67500 +- 1)" : " (OUT of 67500 +- 1)") << "; outcome "
      << (completed ? "Completed" : "BlowUp");
    if (!completed) d << " at t = " << runs.closed.blowup_time;
    d << "; worst per-step V ratio " << worst_step;
    if (completed) d << "; decay rate " << rate;
    d << "; first control v0 = " << runs.closed.series.front().control;
    report(6, v0_ok && completed && monotone && rate_ok,
           "closed-loop blow-up experiment completes with monotone decaying V", d.str());
  }
  return runs;
}

void criterion_7(const RunResult& closed) {
  const ControllerSpec spec{ControllerKind::FlowNegative, {1.0, 1.0}, 0.0002, RootBranch::Plus};
  const CertificateReport cert = check_certificate(closed, spec);
  std::ostringstream d;
  d << cert.checked << " recorded steps checked, " << cert.violations
    << " violations, worst margin " << cert.worst_margin;
  report(7, cert.checked > 0 && cert.violations == 0,
         "semi-discrete certificate holds at every recorded step of the closed-loop run", d.str());
}

void criterion_8() {
  bool ok_a = false, ok_b = false, ok_c = false;
  std::ostringstream detail;

  // (a) pure diffusion against the separated heat solution.
  {
    SimConfig c;
    c.epsilon = 0.0002;
    c.convection = Convection::None;
    c.grid_n = 100;
    c.dt = 1e-3;
    c.t_final = 1.0;
    const Grid grid = build_grid(c.grid_n);
    const DiffOps ops = build_fd_diff_ops(grid);
    Eigen::VectorXd u0(grid.n_nodes());
    for (int i = 0; i < grid.n_nodes(); ++i) u0(i) = std::sin(pi * grid.nodes(i));
    const RunResult r = run(c, ops, u0);
    const Eigen::VectorXd exact = std::exp(-c.epsilon * pi * pi) * u0;
    const double rel = (r.snapshots.back().state - exact).cwiseAbs().maxCoeff() /
                       exact.cwiseAbs().maxCoeff();
    ok_a = r.outcome == Outcome::Completed && rel <= 1e-3;
    detail << "diffusion rel err " << rel;
  }

  // (b) FD vs RBF(1e-9) closed loop on the amplitude-1 profile through t = 1
  // (N = 500, dt = 1e-5: the least-unstable feasible explicit configuration).
  {
    SimConfig c = blowup_config(LoopMode::Closed);
    c.grid_n = 500;
    c.dt = 1e-5;
    c.t_final = 1.0;
    const Grid grid = build_grid(c.grid_n);
    const Eigen::VectorXd u0 = sample_profile(grid, 1.0);
    const RunResult fd = run(c, build_fd_diff_ops(grid), u0);
    const RunResult rbf = run(c, build_rbf_diff_ops(grid, 1e-9), u0);
    if (fd.outcome != Outcome::Completed || rbf.outcome != Outcome::Completed) {
      detail << "; backend legs: fd "
             << (fd.outcome == Outcome::Completed
                     ? "completed"
                     : "blew up at t = " + std::to_string(fd.blowup_time))
             << ", rbf "
             << (rbf.outcome == Outcome::Completed
                     ? "completed"
                     : "blew up at t = " + std::to_string(rbf.blowup_time));
      ok_b = false;
    } else {
      double worst = 0.0;
      const std::size_t n = std::min(fd.series.size(), rbf.series.size());
      for (std::size_t i = 0; i < n; ++i) {
        if (fd.series[i].lyapunov > 0.0) {
          worst = std::max(worst, std::abs(fd.series[i].lyapunov - rbf.series[i].lyapunov) /
                                      fd.series[i].lyapunov);
        }
      }
      ok_b = worst <= 0.05;
      detail << "; backend V(t) worst rel gap " << worst;
    }
  }

  // (c) halving dt changes V(1) by < 1% on the closed-loop blow-up run.
  {
    const Grid grid = build_grid(500);
    const DiffOps ops = build_rbf_diff_ops(grid, 1e-9);
    const Eigen::VectorXd u0 = sample_profile(grid, 300.0);
    SimConfig c = blowup_config(LoopMode::Closed);
    c.t_final = 1.0;
    const RunResult r1 = run(c, ops, u0);
    c.dt = 5e-5;
    const RunResult r2 = run(c, ops, u0);
    if (r1.outcome != Outcome::Completed || r2.outcome != Outcome::Completed) {
      detail << "; dt study: V(1) unavailable (dt=1e-4 "
             << (r1.outcome == Outcome::Completed ? "completed" : "blew up") << ", dt=5e-5 "
             << (r2.outcome == Outcome::Completed ? "completed" : "blew up") << ")";
      ok_c = false;
    } else {
      const double v1 = r1.series.back().lyapunov;
      const double v2 = r2.series.back().lyapunov;
      const double rel = std::abs(v1 - v2) / std::abs(v1);
      ok_c = rel < 0.01;
      detail << "; dt halving rel change " << rel;
    }
  }

  report(8, ok_a && ok_b && ok_c,
         "numerical-scheme oracles (heat decay; backend agreement; dt refinement)", detail.str());
}

int run_cli(const std::string& cli, const std::string& args) {
  const std::string cmd = cli + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WEXITSTATUS(status);
}

void criterion_9(const std::string& cli, const fs::path& data_dir) {
  const fs::path work = fs::temp_directory_path() / "crdctl_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  bool ok = true;
  std::ostringstream detail;

  // Golden series for the zero-IC preset, byte for byte.
  const int zero_code = run_cli(cli, "run preset:zero_ic --out " + (work / "zero").string());
  if (zero_code != 0) {
    ok = false;
    detail << "zero_ic exit " << zero_code << " (want 0)";
  } else {
    std::ifstream got_f(work / "zero" / "series.csv", std::ios::binary);
    std::ifstream want_f(data_dir / "zero_ic_series.csv", std::ios::binary);
    std::ostringstream got, want;
    got << got_f.rdbuf();
    want << want_f.rdbuf();
    if (!want_f.good() && want.str().empty()) {
      ok = false;
      detail << "golden file missing in " << data_dir;
    } else if (got.str() != want.str()) {
      ok = false;
      detail << "series.csv differs from golden";
    } else {
      detail << "golden match";
    }
  }

  const int blow_code =
      run_cli(cli, "run preset:blowup_s3 --open-loop --out " + (work / "open").string());
  if (blow_code != 2) {
    ok = false;
    detail << "; open-loop blow-up exit " << blow_code << " (want 2)";
  }

  const fs::path bad = work / "bad.ini";
  std::ofstream(bad) << "[plant]\nepsilon = -3\nconvection = counter\n";
  const int bad_code = run_cli(cli, "run " + bad.string());
  if (bad_code != 3) {
    ok = false;
    detail << "; invalid config exit " << bad_code << " (want 3)";
  }

  const int version_code = run_cli(cli, "version");
  const int presets_code = run_cli(cli, "presets list");
  if (version_code != 0 || presets_code != 0) {
    ok = false;
    detail << "; version/presets exits " << version_code << "/" << presets_code;
  }
  report(9, ok, "CLI determinism (golden series.csv) and documented exit codes", detail.str());
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <crdctl-cli-path> <golden-data-dir>\n";
    return 64;
  }
  const std::string cli = argv[1];
  const fs::path data_dir = argv[2];

  std::cout << "crdctl acceptance suite\n";
  criterion_1_and_3();
  criterion_2();
  criterion_4();
  const BlowupRuns runs = criterion_5_and_6();
  criterion_7(runs.closed);
  criterion_8();
  criterion_9(cli, data_dir);

  std::cout << (g_failures == 0 ? "all criteria passed"
                                : std::to_string(g_failures) + " criterion(s) failed")
            << "\n";
  return g_failures;
}
