#include "polyshell/output.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

namespace polyshell::output {

std::string real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_vertices_csv(std::ostream& os, const DeformedConfig& cfg) {
  os << "index,x_ref,y_ref,x_def,y_def,in_contact\n";
  const auto ref = cfg.polygon().vertices();
  for (std::size_t i = 0; i < cfg.deformed.size(); ++i) {
    const int label = static_cast<int>(i) + 1;
    os << label << ',' << real(ref[i].x) << ',' << real(ref[i].y) << ','
       << real(cfg.deformed[i].x) << ',' << real(cfg.deformed[i].y) << ','
       << (cfg.contact_set.contains(label) ? 1 : 0) << '\n';
  }
}

void write_sweep_csv(std::ostream& os, std::span<const SweepRecord> records,
                     std::span<const double> f_values) {
  os << "f,height,height_drop,contacts\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const double f = i < f_values.size() ? f_values[i] : records[i].f;
    os << real(f) << ',' << real(records[i].height) << ',' << real(records[i].height_drop) << ','
       << records[i].contacts << '\n';
  }
}

void write_table1_csv(std::ostream& os, std::span<const RelaxationRow> rows) {
  os << "contacts,f_used,R_over_R0,rms\n";
  for (const auto& r : rows) {
    os << r.contacts << ',';
    if (r.reached)
      os << real(r.f_used) << ',' << real(r.radius_ratio) << ',' << real(r.rms);
    else
      os << ",,";
    os << '\n';
  }
}

void write_converge_csv(std::ostream& os, std::span<const ConvergenceRow> rows) {
  os << "n,apex_height,discrepancy\n";
  for (const auto& r : rows)
    os << r.n << ',' << real(r.apex_height) << ',' << real(r.discrepancy) << '\n';
}

void write_svg(std::ostream& os, std::span<const SvgLayer> layers) {
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin;
  double ymin = 0.0;
  double ymax = -xmin;
  auto grow = [&](const Vec2& p) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  };
  for (const auto& l : layers) {
    if (l.is_circle) {
      grow(l.center - Vec2{l.radius, l.radius});
      grow(l.center + Vec2{l.radius, l.radius});
    }
    for (const auto& p : l.polygon)
      grow(p);
  }
  if (!(xmax > xmin)) {
    xmin = -1.0;
    xmax = 1.0;
  }
  if (!(ymax > ymin))
    ymax = ymin + 1.0;
  const double pad = 0.05 * std::max(xmax - xmin, ymax - ymin);
  xmin -= pad;
  xmax += pad;
  ymin -= pad;
  ymax += pad;

  const double width = 600.0;
  const double scale = width / (xmax - xmin);
  const double height = (ymax - ymin) * scale;
  auto sx = [&](double x) { return real((x - xmin) * scale); };
  auto sy = [&](double y) { return real((ymax - y) * scale); };
  auto dash = [](SvgLayer::Style s) -> std::string {
    switch (s) {
    case SvgLayer::Style::dashed: return " stroke-dasharray=\"8,5\"";
    case SvgLayer::Style::dotted: return " stroke-dasharray=\"2,4\"";
    case SvgLayer::Style::solid: break;
    }
    return "";
  };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << real(width) << "\" height=\""
     << real(height) << "\" viewBox=\"0 0 " << real(width) << ' ' << real(height) << "\">\n";
  os << "  <line x1=\"" << sx(xmin) << "\" y1=\"" << sy(0.0) << "\" x2=\"" << sx(xmax)
     << "\" y2=\"" << sy(0.0) << "\" stroke=\"gray\" stroke-width=\"2\"/>\n";
  for (const auto& l : layers) {
    const std::string stroke = " fill=\"none\" stroke=\"" + l.color + "\" stroke-width=\"1.5\"" +
                               dash(l.style);
    if (l.is_circle) {
      os << "  <circle cx=\"" << sx(l.center.x) << "\" cy=\"" << sy(l.center.y) << "\" r=\""
         << real(l.radius * scale) << '"' << stroke << "/>\n";
      continue;
    }
    os << "  <polygon points=\"";
    for (std::size_t i = 0; i < l.polygon.size(); ++i)
      os << (i ? " " : "") << sx(l.polygon[i].x) << ',' << sy(l.polygon[i].y);
    os << '"' << stroke << "/>\n";
    for (const auto& p : l.polygon)
      os << "  <circle cx=\"" << sx(p.x) << "\" cy=\"" << sy(p.y) << "\" r=\"2.5\" fill=\""
         << l.color << "\"/>\n";
  }
  os << "</svg>\n";
}

} // namespace polyshell::output
