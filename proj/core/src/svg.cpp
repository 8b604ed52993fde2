#include "plateau/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "plateau/report_io.hpp"

namespace plateau {

namespace {

constexpr double kW = 640, kH = 420, kL = 70, kR = 20, kT = 40, kB = 55;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

std::string header(double w, double h) {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt6(w) << "\" height=\"" << fmt6(h)
     << "\" viewBox=\"0 0 " << fmt6(w) << ' ' << fmt6(h) << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return os.str();
}

}  // namespace

std::string line_plot_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                          const std::vector<PlotSeries>& series, const double* reference) {
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series) {
    for (double x : s.x) x0 = std::min(x0, x), x1 = std::max(x1, x);
    for (double y : s.y)
      if (std::isfinite(y)) y0 = std::min(y0, y), y1 = std::max(y1, y);
  }
  if (reference) y0 = std::min(y0, *reference), y1 = std::max(y1, *reference);
  if (!std::isfinite(x0)) x0 = 0, x1 = 1;
  if (!std::isfinite(y0)) y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-12) x1 = x0 + 1;
  const double pad = std::max(0.05 * (y1 - y0), 1e-3 * std::max(1.0, std::abs(y1)));
  y0 -= pad, y1 += pad;
  auto X = [&](double x) { return kL + (x - x0) / (x1 - x0) * (kW - kL - kR); };
  auto Y = [&](double y) { return kH - kB - (y - y0) / (y1 - y0) * (kH - kT - kB); };

  std::ostringstream os;
  os << header(kW, kH);
  os << "<text x=\"" << fmt6(kW / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
     << "</text>\n";
  os << "<rect x=\"" << fmt6(kL) << "\" y=\"" << fmt6(kT) << "\" width=\"" << fmt6(kW - kL - kR) << "\" height=\""
     << fmt6(kH - kT - kB) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4, yv = y0 + (y1 - y0) * i / 4;
    os << "<text x=\"" << fmt6(X(xv)) << "\" y=\"" << fmt6(kH - kB + 16) << "\" text-anchor=\"middle\">" << fmt6(xv)
       << "</text>\n";
    os << "<text x=\"" << fmt6(kL - 6) << "\" y=\"" << fmt6(Y(yv) + 4) << "\" text-anchor=\"end\">" << fmt6(yv)
       << "</text>\n";
    os << "<line x1=\"" << fmt6(kL) << "\" x2=\"" << fmt6(kW - kR) << "\" y1=\"" << fmt6(Y(yv)) << "\" y2=\""
       << fmt6(Y(yv)) << "\" stroke=\"#ddd\"/>\n";
  }
  os << "<text x=\"" << fmt6(kW / 2) << "\" y=\"" << fmt6(kH - 12) << "\" text-anchor=\"middle\">" << escape(x_label)
     << "</text>\n";
  os << "<text transform=\"translate(16 " << fmt6(kH / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
     << escape(y_label) << "</text>\n";
  if (reference)
    os << "<line x1=\"" << fmt6(kL) << "\" x2=\"" << fmt6(kW - kR) << "\" y1=\"" << fmt6(Y(*reference)) << "\" y2=\""
       << fmt6(Y(*reference)) << "\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kColors[k % 5];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
      os << (i ? " " : "") << fmt6(X(s.x[i])) << ',' << fmt6(Y(s.y[i]));
    os << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
      os << "<circle cx=\"" << fmt6(X(s.x[i])) << "\" cy=\"" << fmt6(Y(s.y[i])) << "\" r=\"3\" fill=\"" << color
         << "\"/>\n";
    os << "<text x=\"" << fmt6(kL + 10) << "\" y=\"" << fmt6(kT + 16 + 16 * k) << "\" fill=\"" << color << "\">"
       << escape(s.name) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string mesh_values_svg(const std::string& title, const DiscMesh& mesh, const std::vector<int>& vertices,
                            const std::vector<double>& values, double scale) {
  const double size = 520, margin = 30, top = 40;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& v : mesh.vertices)
    x0 = std::min(x0, v.x()), x1 = std::max(x1, v.x()), y0 = std::min(y0, v.y()), y1 = std::max(y1, v.y());
  const double span = std::max({x1 - x0, y1 - y0, 1e-12});
  auto X = [&](double x) { return margin + (x - x0) / span * size; };
  auto Y = [&](double y) { return top + (y1 - y) / span * size; };
  std::vector<double> value(mesh.vertex_count(), 0.0);
  for (std::size_t i = 0; i < vertices.size() && i < values.size(); ++i) value[vertices[i]] = values[i];
  auto color = [&](double v) {
    const double t = std::clamp(v / std::max(scale, 1e-300), -1.0, 1.0);
    const int fade = static_cast<int>(std::lround(255 * (1 - std::abs(t))));
    std::ostringstream c;
    c << "rgb(" << (t >= 0 ? 255 : fade) << ',' << fade << ',' << (t <= 0 ? 255 : fade) << ')';
    return c.str();
  };
  std::ostringstream os;
  os << header(size + 2 * margin, size + top + margin);
  os << "<text x=\"" << fmt6(margin + size / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
     << escape(title) << "</text>\n";
  for (const auto& t : mesh.triangles) {
    const double v = (value[t[0]] + value[t[1]] + value[t[2]]) / 3.0;
    os << "<polygon points=\"";
    for (int k = 0; k < 3; ++k)
      os << (k ? " " : "") << fmt6(X(mesh.vertices[t[k]].x())) << ',' << fmt6(Y(mesh.vertices[t[k]].y()));
    os << "\" fill=\"" << color(v) << "\" stroke=\"#888\" stroke-width=\"0.3\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace plateau
