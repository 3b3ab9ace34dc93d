#include "hpai/svg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <string>

#include "hpai/csv.hpp"

namespace hpai {
namespace {

constexpr double kPanelW = 320.0;
constexpr double kPanelH = 200.0;
constexpr double kMargin = 30.0;

struct Panel {
  double x0, y0;  // top-left of plotting area
  double t_min, t_max, v_min, v_max;

  double px(double t) const {
    return x0 + (t_max > t_min ? (t - t_min) / (t_max - t_min) : 0.0) * kPanelW;
  }
  double py(double v) const {
    return y0 + kPanelH - (v_max > v_min ? (v - v_min) / (v_max - v_min) : 0.0) * kPanelH;
  }
};

std::string num(double x) {
  // Two decimals are plenty for pixel coordinates.
  return format_double(std::round(x * 100.0) / 100.0);
}

void header(std::ostream& os, double w, double h) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w) << "\" height=\"" << num(h)
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

Panel panel_at(std::size_t index, double t_min, double t_max, double v_max) {
  const double col = static_cast<double>(index % 3);
  const double row = static_cast<double>(index / 3);
  return {kMargin + col * (kPanelW + 2 * kMargin), kMargin + row * (kPanelH + 2 * kMargin),
          t_min, t_max, 0.0, v_max > 0.0 ? v_max : 1.0};
}

void frame(std::ostream& os, const Panel& p, std::string_view title) {
  os << "<rect x=\"" << num(p.x0) << "\" y=\"" << num(p.y0) << "\" width=\"" << num(kPanelW)
     << "\" height=\"" << num(kPanelH) << "\" fill=\"none\" stroke=\"#888\"/>\n"
     << "<text x=\"" << num(p.x0) << "\" y=\"" << num(p.y0 - 6) << "\">" << title << " (max "
     << num(p.v_max) << ")</text>\n";
}

void polyline(std::ostream& os, const Panel& p, const std::vector<double>& t,
              const std::function<double(std::size_t)>& v, std::string_view colour) {
  os << "<polyline fill=\"none\" stroke=\"" << colour << "\" points=\"";
  for (std::size_t i = 0; i < t.size(); ++i) os << num(p.px(t[i])) << ',' << num(p.py(v(i))) << ' ';
  os << "\"/>\n";
}

}  // namespace

void write_trajectory_svg(std::ostream& os, const Trajectory& traj) {
  header(os, 3 * (kPanelW + 2 * kMargin), 2 * (kPanelH + 2 * kMargin));
  if (traj.size() > 0) {
    for (std::size_t c = 0; c < kCompartments; ++c) {
      double v_max = 0.0;
      for (const auto& x : traj.states) v_max = std::max(v_max, x[c]);
      const Panel p = panel_at(c, traj.times.front(), traj.times.back(), v_max);
      frame(os, p, kCompartmentNames[c]);
      polyline(os, p, traj.times, [&](std::size_t i) { return traj.states[i][c]; }, "#1f77b4");
    }
  }
  os << "</svg>\n";
}

void write_ensemble_svg(std::ostream& os, const EnsembleSummary& summary) {
  header(os, 3 * (kPanelW + 2 * kMargin), 2 * (kPanelH + 2 * kMargin));
  if (!summary.times.empty()) {
    for (std::size_t c = 0; c < kCompartments; ++c) {
      const auto& st = summary.stats[c];
      const double v_max = *std::max_element(st.q975.begin(), st.q975.end());
      const Panel p = panel_at(c, summary.times.front(), summary.times.back(), v_max);
      frame(os, p, kCompartmentNames[c]);
      polyline(os, p, summary.times, [&](std::size_t i) { return st.q025[i]; }, "#aec7e8");
      polyline(os, p, summary.times, [&](std::size_t i) { return st.q975[i]; }, "#aec7e8");
      polyline(os, p, summary.times, [&](std::size_t i) { return st.mean[i]; }, "#1f77b4");
    }
  }
  os << "</svg>\n";
}

void write_prcc_svg(std::ostream& os, const SensitivityReport& report) {
  constexpr double kBarH = 18.0;
  constexpr double kLabelW = 80.0;
  constexpr double kHalf = 200.0;
  const double height = 2 * kMargin + kBarH * static_cast<double>(report.entries.size());
  header(os, kLabelW + 2 * kHalf + 2 * kMargin, height);
  const double axis = kMargin + kLabelW + kHalf;
  os << "<line x1=\"" << num(axis) << "\" y1=\"" << num(kMargin) << "\" x2=\"" << num(axis)
     << "\" y2=\"" << num(height - kMargin) << "\" stroke=\"black\"/>\n";
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    const auto& e = report.entries[i];
    const double y = kMargin + kBarH * static_cast<double>(i);
    os << "<text x=\"" << num(kMargin) << "\" y=\"" << num(y + 13) << "\">" << e.name << "</text>\n";
    if (std::isnan(e.prcc)) continue;
    const double w = std::abs(e.prcc) * kHalf;
    const double x = e.prcc >= 0 ? axis : axis - w;
    os << "<rect x=\"" << num(x) << "\" y=\"" << num(y + 2) << "\" width=\"" << num(w)
       << "\" height=\"" << num(kBarH - 4) << "\" fill=\"" << (e.prcc >= 0 ? "#1f77b4" : "#ff7f0e")
       << "\"/>\n";
    if (e.significant) {
      const double cx = e.prcc >= 0 ? axis + w + 6 : axis - w - 6;
      os << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(y + kBarH / 2) << "\" r=\"3\" fill=\"red\"/>\n";
    }
  }
  os << "</svg>\n";
}

}  // namespace hpai
