#include "maxent/cli/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "maxent/errors.hpp"

namespace maxent::cli {

namespace {

constexpr double kPanelWidth = 360.0;
constexpr double kPanelHeight = 260.0;
constexpr double kMargin = 40.0;
constexpr int kColumns = 2;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
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

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string header(double width, double height) {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
     << num(height) << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return os.str();
}

}  // namespace

std::string mixture_svg(const RunReport& report) {
  const std::size_t panels = std::max<std::size_t>(report.solution.size(), 1);
  const std::size_t cols = std::min<std::size_t>(panels, kColumns);
  const std::size_t rows = (panels + cols - 1) / cols;
  const double width = static_cast<double>(cols) * kPanelWidth;
  const double height = static_cast<double>(rows) * kPanelHeight;
  std::ostringstream os;
  os << header(width, height);

  for (std::size_t p = 0; p < report.solution.size(); ++p) {
    const auto& cat = report.solution[p];
    const double ox = static_cast<double>(p % cols) * kPanelWidth + kMargin;
    const double oy = static_cast<double>(p / cols) * kPanelHeight + kMargin / 2;
    const double w = kPanelWidth - 1.5 * kMargin;
    const double h = kPanelHeight - 1.5 * kMargin;
    auto x = [&](double pi) { return ox + pi * w; };
    auto y = [&](double r) { return oy + (1.0 - r) * h; };

    os << "<g class=\"panel\">\n";
    os << "<text x=\"" << num(ox) << "\" y=\"" << num(oy - 4) << "\" font-size=\"11\">"
       << escape(cat.label) << "</text>\n";
    os << "<line class=\"axis\" x1=\"" << num(x(0)) << "\" y1=\"" << num(y(0)) << "\" x2=\""
       << num(x(0)) << "\" y2=\"" << num(y(1)) << "\" stroke=\"black\"/>\n";
    os << "<line class=\"axis\" x1=\"" << num(x(1)) << "\" y1=\"" << num(y(0)) << "\" x2=\""
       << num(x(1)) << "\" y2=\"" << num(y(1)) << "\" stroke=\"black\"/>\n";
    os << "<line class=\"axis\" x1=\"" << num(x(0)) << "\" y1=\"" << num(y(0)) << "\" x2=\""
       << num(x(1)) << "\" y2=\"" << num(y(0)) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << num(x(0) - 30) << "\" y=\"" << num(y(0.5)) << "\" font-size=\"10\">r0</text>\n";
    os << "<text x=\"" << num(x(1) + 4) << "\" y=\"" << num(y(0.5)) << "\" font-size=\"10\">r1</text>\n";
    os << "<text x=\"" << num(x(0.5)) << "\" y=\"" << num(y(0) + 14) << "\" font-size=\"10\">pi</text>\n";

    // Largest cluster overall has radius 18 px.
    double heaviest = 0.0;
    for (const auto& c : cat.clusters) heaviest = std::max(heaviest, c.mass);
    for (std::size_t i = 0; i < cat.clusters.size(); ++i) {
      const auto& c = cat.clusters[i];
      const char* color = kPalette[i % std::size(kPalette)];
      const double risk = (1.0 - c.triple.pi) * c.triple.r0 + c.triple.pi * c.triple.r1;
      const double radius = heaviest > 0.0 ? 18.0 * std::sqrt(c.mass / heaviest) : 0.0;
      os << "<line class=\"effect\" x1=\"" << num(x(0)) << "\" y1=\"" << num(y(c.triple.r0))
         << "\" x2=\"" << num(x(1)) << "\" y2=\"" << num(y(c.triple.r1)) << "\" stroke=\"" << color
         << "\"/>\n";
      os << "<circle class=\"cluster\" cx=\"" << num(x(c.triple.pi)) << "\" cy=\"" << num(y(risk))
         << "\" r=\"" << num(radius) << "\" fill=\"" << color << "\" fill-opacity=\"0.6\">"
         << "<title>mass " << num(c.mass) << "</title></circle>\n";
    }
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string convergence_svg(const ConvergenceSeries& series) {
  const double width = 480.0, height = 300.0;
  const double w = width - 2 * kMargin, h = height - 2 * kMargin;
  std::ostringstream os;
  os << header(width, height);

  int m_lo = 0, m_hi = 1;
  double e_lo = series.reference_entropy, e_hi = series.reference_entropy;
  bool any = false;
  for (const auto& p : series.points) {
    if (p.status != "optimal") continue;
    if (!any) {
      m_lo = m_hi = p.m;
      any = true;
    }
    m_lo = std::min(m_lo, p.m);
    m_hi = std::max(m_hi, p.m);
    e_lo = std::min(e_lo, p.entropy);
    e_hi = std::max(e_hi, p.entropy);
  }
  if (m_hi == m_lo) m_hi = m_lo + 1;
  const double pad = std::max(1e-6, 0.1 * (e_hi - e_lo));
  e_lo -= pad;
  e_hi += pad;
  auto x = [&](double m) { return kMargin + (m - m_lo) / (m_hi - m_lo) * w; };
  auto y = [&](double e) { return kMargin + (e_hi - e) / (e_hi - e_lo) * h; };

  os << "<line class=\"axis\" x1=\"" << num(kMargin) << "\" y1=\"" << num(kMargin + h) << "\" x2=\""
     << num(kMargin + w) << "\" y2=\"" << num(kMargin + h) << "\" stroke=\"black\"/>\n";
  os << "<line class=\"axis\" x1=\"" << num(kMargin) << "\" y1=\"" << num(kMargin) << "\" x2=\""
     << num(kMargin) << "\" y2=\"" << num(kMargin + h) << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << num(kMargin + w / 2) << "\" y=\"" << num(height - 8) << "\" font-size=\"11\">m</text>\n";
  os << "<text x=\"4\" y=\"" << num(kMargin - 10) << "\" font-size=\"11\">entropy (nats)</text>\n";
  if (any) {
    os << "<line class=\"reference\" x1=\"" << num(kMargin) << "\" y1=\""
       << num(y(series.reference_entropy)) << "\" x2=\"" << num(kMargin + w) << "\" y2=\""
       << num(y(series.reference_entropy)) << "\" stroke=\"#d62728\"/>\n";
  }
  for (const auto& p : series.points) {
    if (p.status != "optimal") continue;
    os << "<circle class=\"point\" cx=\"" << num(x(p.m)) << "\" cy=\"" << num(y(p.entropy))
       << "\" r=\"3\" fill=\"#1f77b4\"><title>m=" << p.m << "</title></circle>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void emit_plot(const RunReport& report, const std::filesystem::path& path) {
  write_text_file(path, mixture_svg(report));
}

void emit_plot(const ConvergenceSeries& series, const std::filesystem::path& path) {
  write_text_file(path, convergence_svg(series));
}

}  // namespace maxent::cli
