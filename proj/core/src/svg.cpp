#include "crdctl/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace crdctl {

namespace {

constexpr double kWidth = 820.0;
constexpr double kHeight = 520.0;
constexpr double kMarginLeft = 80.0;
constexpr double kMarginRight = 30.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 55.0;

std::string fmt(double x) {
  std::ostringstream out;
  out.precision(6);
  out << x;
  return out.str();
}

struct Axis {
  double lo = 0.0, hi = 1.0;
  double to_px(double v, double px_lo, double px_hi) const {
    const double f = (hi > lo) ? (v - lo) / (hi - lo) : 0.5;
    return px_lo + f * (px_hi - px_lo);
  }
};

void emit_frame(std::ostringstream& out, const Axis& x, const Axis& y, bool log_y,
                const LinePlotStyle& style) {
  out << "<rect x='" << kMarginLeft << "' y='" << kMarginTop << "' width='"
      << kWidth - kMarginLeft - kMarginRight << "' height='"
      << kHeight - kMarginTop - kMarginBottom
      << "' fill='none' stroke='#444' stroke-width='1'/>\n";
  const int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    const double fx = x.lo + (x.hi - x.lo) * i / ticks;
    const double px = x.to_px(fx, kMarginLeft, kWidth - kMarginRight);
    out << "<line x1='" << px << "' y1='" << kHeight - kMarginBottom << "' x2='" << px
        << "' y2='" << kHeight - kMarginBottom + 5 << "' stroke='#444'/>\n";
    out << "<text x='" << px << "' y='" << kHeight - kMarginBottom + 20
        << "' font-size='12' text-anchor='middle'>" << fmt(fx) << "</text>\n";

    const double fy = y.lo + (y.hi - y.lo) * i / ticks;
    const double py = y.to_px(fy, kHeight - kMarginBottom, kMarginTop);
    out << "<line x1='" << kMarginLeft - 5 << "' y1='" << py << "' x2='" << kMarginLeft
        << "' y2='" << py << "' stroke='#444'/>\n";
    out << "<text x='" << kMarginLeft - 8 << "' y='" << py + 4
        << "' font-size='12' text-anchor='end'>" << fmt(log_y ? std::pow(10.0, fy) : fy)
        << "</text>\n";
  }
  out << "<text x='" << kWidth / 2 << "' y='" << kHeight - 12
      << "' font-size='13' text-anchor='middle'>" << style.x_label << "</text>\n";
  out << "<text x='18' y='" << kHeight / 2
      << "' font-size='13' text-anchor='middle' transform='rotate(-90 18 " << kHeight / 2
      << ")'>" << style.y_label << (log_y ? " (log scale)" : "") << "</text>\n";
  out << "<text x='" << kWidth / 2 << "' y='24' font-size='15' text-anchor='middle'>"
      << style.title << "</text>\n";
}

}  // namespace

std::string svg_line_plot(const std::vector<double>& xs, const std::vector<double>& ys,
                          const LinePlotStyle& style) {
  if (xs.empty() || xs.size() != ys.size()) {
    throw std::invalid_argument("svg_line_plot: empty or mismatched data");
  }

  std::vector<double> py(ys.size());
  double floor_y = 0.0;
  if (style.log_y) {
    double max_pos = 0.0;
    for (double v : ys) {
      if (std::isfinite(v) && v > max_pos) max_pos = v;
    }
    floor_y = (max_pos > 0.0) ? max_pos * 1e-16 : 1e-16;
    for (std::size_t i = 0; i < ys.size(); ++i) {
      py[i] = std::log10(std::max(ys[i], floor_y));
    }
  } else {
    for (std::size_t i = 0; i < ys.size(); ++i) {
      py[i] = std::isfinite(ys[i]) ? ys[i] : 0.0;
    }
  }

  Axis ax, ay;
  ax.lo = *std::min_element(xs.begin(), xs.end());
  ax.hi = *std::max_element(xs.begin(), xs.end());
  ay.lo = *std::min_element(py.begin(), py.end());
  ay.hi = *std::max_element(py.begin(), py.end());
  if (ax.hi == ax.lo) { ax.lo -= 0.5; ax.hi += 0.5; }
  if (ay.hi == ay.lo) { ay.lo -= 0.5; ay.hi += 0.5; }

  std::ostringstream out;
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='"
      << kHeight << "' viewBox='0 0 " << kWidth << " " << kHeight << "'>\n";
  out << "<rect width='100%' height='100%' fill='white'/>\n";
  emit_frame(out, ax, ay, style.log_y, style);

  if (xs.size() == 1) {
    out << "<circle cx='" << ax.to_px(xs[0], kMarginLeft, kWidth - kMarginRight) << "' cy='"
        << ay.to_px(py[0], kHeight - kMarginBottom, kMarginTop)
        << "' r='4' fill='#1f6fb2'/>\n";
  } else {
    out << "<polyline fill='none' stroke='#1f6fb2' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      out << ax.to_px(xs[i], kMarginLeft, kWidth - kMarginRight) << ","
          << ay.to_px(py[i], kHeight - kMarginBottom, kMarginTop) << " ";
    }
    out << "'/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

namespace {

// Diverging blue-white-red ramp for f in [-1, 1].
std::string ramp_color(double f) {
  f = std::clamp(f, -1.0, 1.0);
  int r, g, b;
  if (f < 0.0) {
    r = static_cast<int>(255 * (1.0 + f));
    g = static_cast<int>(255 * (1.0 + f));
    b = 255;
  } else {
    r = 255;
    g = static_cast<int>(255 * (1.0 - f));
    b = static_cast<int>(255 * (1.0 - f));
  }
  std::ostringstream out;
  out << "rgb(" << r << "," << g << "," << b << ")";
  return out.str();
}

}  // namespace

std::string svg_heatmap(const std::vector<Snapshot>& snapshots, const Grid& grid,
                        const std::string& title) {
  if (snapshots.empty()) throw std::invalid_argument("svg_heatmap: no snapshots");

  const std::size_t nt = snapshots.size();
  const int nx = grid.n_nodes();
  // At most ~150 cells per axis keeps the file a reasonable size.
  const std::size_t t_stride = std::max<std::size_t>(1, (nt + 149) / 150);
  const int x_stride = std::max(1, (nx + 149) / 150);

  double max_abs = 0.0;
  for (const auto& snap : snapshots) {
    for (int i = 0; i < snap.state.size(); ++i) {
      const double a = std::abs(snap.state(i));
      if (std::isfinite(a) && a > max_abs) max_abs = a;
    }
  }
  if (max_abs == 0.0) max_abs = 1.0;

  const double t_lo = snapshots.front().t;
  const double t_hi = std::max(snapshots.back().t, t_lo + 1e-300);
  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;

  std::ostringstream out;
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='"
      << kHeight << "' viewBox='0 0 " << kWidth << " " << kHeight << "'>\n";
  out << "<rect width='100%' height='100%' fill='white'/>\n";
  out << "<text x='" << kWidth / 2 << "' y='24' font-size='15' text-anchor='middle'>"
      << title << " (range &#177;" << fmt(max_abs) << ")</text>\n";
  out << "<text x='" << kWidth / 2 << "' y='" << kHeight - 12
      << "' font-size='13' text-anchor='middle'>t</text>\n";
  out << "<text x='18' y='" << kHeight / 2
      << "' font-size='13' text-anchor='middle' transform='rotate(-90 18 " << kHeight / 2
      << ")'>x</text>\n";

  for (std::size_t k = 0; k < nt; k += t_stride) {
    const std::size_t k_next = std::min(k + t_stride, nt);
    const double t0 = (snapshots[k].t - t_lo) / (t_hi - t_lo);
    const double t1 = (k_next < nt ? snapshots[k_next].t - t_lo : t_hi - t_lo) / (t_hi - t_lo);
    const double cell_w = std::max((t1 - t0) * plot_w, 1.0);
    for (int i = 0; i < nx; i += x_stride) {
      const double x0 = static_cast<double>(i) / nx;
      const double x1 = static_cast<double>(std::min(i + x_stride, nx)) / nx;
      double v = snapshots[k].state(i);
      if (!std::isfinite(v)) v = std::copysign(max_abs, v);
      out << "<rect x='" << kMarginLeft + t0 * plot_w << "' y='"
          << kMarginTop + (1.0 - x1) * plot_h << "' width='" << cell_w << "' height='"
          << (x1 - x0) * plot_h << "' fill='" << ramp_color(v / max_abs) << "'/>\n";
    }
  }
  out << "<rect x='" << kMarginLeft << "' y='" << kMarginTop << "' width='" << plot_w
      << "' height='" << plot_h << "' fill='none' stroke='#444'/>\n";
  out << "<text x='" << kMarginLeft << "' y='" << kHeight - kMarginBottom + 20
      << "' font-size='12' text-anchor='middle'>" << fmt(t_lo) << "</text>\n";
  out << "<text x='" << kWidth - kMarginRight << "' y='" << kHeight - kMarginBottom + 20
      << "' font-size='12' text-anchor='middle'>" << fmt(snapshots.back().t) << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace crdctl
