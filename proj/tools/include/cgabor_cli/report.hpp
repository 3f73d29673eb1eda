#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cgabor/types.hpp"

namespace cgabor::cli {

// Shortest text with 17 significant digits ("%.17g"); non-finite values print as nan/inf/-inf.
std::string fmt17(double v);

// RFC-4180 table: CRLF line ends, fields quoted only when needed.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(std::vector<std::string> fields);
  size_t rows() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

void write_text(const std::filesystem::path& path, const std::string& text);

struct HeatmapLabels {
  std::string title;
  std::string column_axis;  // e.g. "direction angle" or "Fibonacci index"
  std::string row_axis;     // e.g. "probe"
};

// Linear color map over all values, min and max annotated. polar draws each row as an
// annulus split into one sector per column (columns span a full turn); otherwise a grid.
// Byte-identical output for identical input.
std::string render_svg_heatmap(const std::vector<std::vector<double>>& rows, const HeatmapLabels& labels,
                               bool polar);

struct TorusMarker {
  Vec point;   // chart coordinates in [0, 2 pi)^2
  Vec normal;  // unit; drawn as a tick through the point
  bool flagged = false;
};

// Square picture of [0, 2 pi)^2 with an optional background raster (row 0 at theta2 = 0).
std::string render_svg_torus(const std::vector<TorusMarker>& markers,
                             const std::vector<std::vector<double>>& background, const std::string& title);

}  // namespace cgabor::cli
