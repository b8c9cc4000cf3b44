#pragma once

// Minimal deterministic SVG line / scatter plots of ResultTable columns.

#include <string>
#include <vector>

#include "accordion/table.hpp"

namespace accordion {

struct PlotSpec {
  std::string x;
  std::vector<std::string> y;
  bool scatter = false;
  std::string title;
  int width = 720;
  int height = 440;
};

// Throws ValidationError for columns missing from the table. Non-finite
// values are skipped. Same input, same bytes.
std::string render_svg(const ResultTable& table, const PlotSpec& spec);

void emit_plot(const ResultTable& table, const PlotSpec& spec, const std::string& path);

}  // namespace accordion
