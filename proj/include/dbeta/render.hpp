#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace dbeta::render {

namespace fs = std::filesystem;

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  /// Draw as a right-continuous staircase (ECDFs).
  bool step = false;
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  /// Written verbatim into a leading XML comment.
  std::string provenance;
};

inline constexpr int kWidth = 640;
inline constexpr int kHeight = 420;

/// Fixed-canvas line chart; one polyline per series with one vertex per
/// point (two per point for staircases). Throws on an empty series.
std::string line_chart(const Plot& plot);

/// Renders every recognised CSV in `in` to `<stem>.svg` under `out`:
/// x,F as ECDF, x,rho[,FV] as density, index,median,q90,q99 as a rigidity
/// profile. All inputs are validated before anything is written.
std::vector<fs::path> render_directory(const fs::path& in, const fs::path& out);

}  // namespace dbeta::render
