#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "polyshell/analysis.hpp"
#include "polyshell/contact.hpp"

namespace polyshell::output {

/// 17 significant digits, shortest "%g" form.
std::string real(double v);

// CSV writers: ',' separator, '\n' line endings, header row first.
void write_vertices_csv(std::ostream& os, const DeformedConfig& cfg);
void write_sweep_csv(std::ostream& os, std::span<const SweepRecord> records,
                     std::span<const double> f_values);
void write_table1_csv(std::ostream& os, std::span<const RelaxationRow> rows);
void write_converge_csv(std::ostream& os, std::span<const ConvergenceRow> rows);

struct SvgLayer {
  enum class Style { solid, dashed, dotted };
  std::vector<Vec2> polygon;  ///< closed polygon; empty when `circle` is set
  bool is_circle = false;
  Vec2 center;
  double radius = 0.0;
  Style style = Style::solid;
  std::string color = "black";
};

/// Static rendering with the surface line y = 0 drawn underneath.
void write_svg(std::ostream& os, std::span<const SvgLayer> layers);

} // namespace polyshell::output
