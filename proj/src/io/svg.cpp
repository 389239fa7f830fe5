#include "homog/io/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "homog/error.hpp"

namespace homog::io {

namespace {

constexpr double kWidth = 640, kHeight = 440;
constexpr double kLeft = 70, kRight = 170, kTop = 40, kBottom = 50;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Frame {
  double x0, x1, y0, y1;  // data range (already transformed)

  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

void widen(double& lo, double& hi) {
  if (hi - lo < 1e-300) {
    const double pad = std::max(1.0, std::abs(lo)) * 0.5;
    lo -= pad;
    hi += pad;
  } else {
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
}

void header(std::ostringstream& os, const std::string& title) {
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth
     << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
     << escape(title) << "</text>\n";
}

void axes(std::ostringstream& os, const Frame& f, bool log_axes, const std::string& xl,
          const std::string& yl) {
  os << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\""
     << num(kWidth - kLeft - kRight) << "\" height=\"" << num(kHeight - kTop - kBottom)
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  auto ticks = [&](double lo, double hi, bool horizontal) {
    const int n = 5;
    for (int i = 0; i <= n; ++i) {
      const double v = lo + (hi - lo) * i / n;
      const double shown = log_axes ? std::pow(10.0, v) : v;
      if (horizontal) {
        os << "<text x=\"" << num(f.px(v)) << "\" y=\"" << num(kHeight - kBottom + 16)
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" << label(shown)
           << "</text>\n";
      } else {
        os << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(f.py(v) + 3)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << label(shown)
           << "</text>\n";
      }
    }
  };
  ticks(f.x0, f.x1, true);
  ticks(f.y0, f.y1, false);
  os << "<text x=\"" << num((kLeft + kWidth - kRight) / 2) << "\" y=\"" << num(kHeight - 12)
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << escape(xl)
     << "</text>\n"
     << "<text x=\"16\" y=\"" << num((kTop + kHeight - kBottom) / 2)
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 "
     << num((kTop + kHeight - kBottom) / 2) << ")\">" << escape(yl) << "</text>\n";
}

void legend(std::ostringstream& os, std::size_t i, const std::string& name) {
  const double y = kTop + 14 + 18 * static_cast<double>(i);
  const double x = kWidth - kRight + 12;
  os << "<line x1=\"" << num(x) << "\" y1=\"" << num(y) << "\" x2=\"" << num(x + 20) << "\" y2=\""
     << num(y) << "\" stroke=\"" << kPalette[i % 6] << "\" stroke-width=\"2\"/>\n"
     << "<text x=\"" << num(x + 26) << "\" y=\"" << num(y + 4)
     << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(name) << "</text>\n";
}

}  // namespace

std::string render_convergence_svg(const ConvergenceReport& report) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  std::size_t plotted = 0;
  for (const auto& s : report.series)
    for (const auto& p : s.points)
      if (p.eps > 0.0 && p.error > 0.0) {
        x0 = std::min(x0, std::log10(p.eps));
        x1 = std::max(x1, std::log10(p.eps));
        y0 = std::min(y0, std::log10(p.error));
        y1 = std::max(y1, std::log10(p.error));
        ++plotted;
      }
  if (report.series.empty() || plotted == 0)
    throw PreconditionError("convergence plot needs at least one series with positive errors");
  widen(x0, x1);
  widen(y0, y1);
  const Frame f{x0, x1, y0, y1};

  std::ostringstream os;
  header(os, "sup error against eps");
  axes(os, f, true, "eps", "sup error");
  for (std::size_t i = 0; i < report.series.size(); ++i) {
    const auto& s = report.series[i];
    const char* colour = kPalette[i % 6];
    os << "<g id=\"series-" << escape(s.variant.name()) << "\">\n";
    for (const auto& p : s.points) {
      if (!(p.eps > 0.0 && p.error > 0.0)) continue;
      os << "<circle cx=\"" << num(f.px(std::log10(p.eps))) << "\" cy=\""
         << num(f.py(std::log10(p.error))) << "\" r=\"3.5\" fill=\"" << colour << "\"/>\n";
    }
    std::string name = s.variant.name();
    if (s.status == FitStatus::Fitted) {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (const auto& p : s.points)
        if (p.error > kExactErrorThreshold) {
          lo = std::min(lo, std::log(p.eps));
          hi = std::max(hi, std::log(p.eps));
        }
      auto yfit = [&](double le) { return (s.fit.rate * le + s.fit.intercept) / std::log(10.0); };
      const double l10 = std::log(10.0);
      os << "<line class=\"fit\" x1=\"" << num(f.px(lo / l10)) << "\" y1=\"" << num(f.py(yfit(lo)))
         << "\" x2=\"" << num(f.px(hi / l10)) << "\" y2=\"" << num(f.py(yfit(hi))) << "\" stroke=\""
         << colour << "\" stroke-width=\"1.5\" stroke-dasharray=\"5 3\"/>\n";
      name += " (rate " + label(s.fit.rate) + ")";
    }
    os << "</g>\n";
    legend(os, i, name);
  }
  os << "</svg>\n";
  return os.str();
}

std::string render_lines_svg(const std::string& title, const std::vector<Polyline>& lines) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  std::size_t plotted = 0;
  for (const auto& l : lines) {
    if (l.x.size() != l.y.size()) throw PreconditionError("polyline x and y differ in length");
    for (std::size_t i = 0; i < l.x.size(); ++i) {
      x0 = std::min(x0, l.x[i]);
      x1 = std::max(x1, l.x[i]);
      y0 = std::min(y0, l.y[i]);
      y1 = std::max(y1, l.y[i]);
      ++plotted;
    }
  }
  if (lines.empty() || plotted == 0) throw PreconditionError("line plot needs at least one point");
  widen(y0, y1);
  if (x1 - x0 < 1e-300) widen(x0, x1);
  const Frame f{x0, x1, y0, y1};

  std::ostringstream os;
  header(os, title);
  axes(os, f, false, "x", "value");
  for (std::size_t i = 0; i < lines.size(); ++i) {
    os << "<polyline fill=\"none\" stroke=\"" << kPalette[i % 6] << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < lines[i].x.size(); ++k) {
      if (k) os << ' ';
      os << num(f.px(lines[i].x[k])) << ',' << num(f.py(lines[i].y[k]));
    }
    os << "\"/>\n";
    legend(os, i, lines[i].name);
  }
  os << "</svg>\n";
  return os.str();
}

void write_svg(const std::string& svg, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path.string() + ": cannot open for writing");
  out << svg;
  out.close();
  if (!out) throw Error(path.string() + ": write failed");
}

}  // namespace homog::io
