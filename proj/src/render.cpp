#include "dbeta/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "dbeta/io.hpp"

namespace dbeta::render {
namespace {

constexpr double kLeft = 70.0, kRight = 20.0, kTop = 40.0, kBottom = 50.0;
const char* const kColours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string comment_safe(std::string s) {
  for (std::size_t p; (p = s.find("--")) != std::string::npos;) s.replace(p, 2, "- -");
  return s;
}

struct Range {
  double lo = INFINITY, hi = -INFINITY;
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!(lo <= hi)) lo = 0.0, hi = 1.0;
    if (hi == lo) lo -= 0.5, hi += 0.5;
  }
};

}  // namespace

std::string line_chart(const Plot& plot) {
  if (plot.series.empty()) throw std::invalid_argument("line_chart: no series");
  Range xr, yr;
  for (const auto& s : plot.series) {
    if (s.x.empty() || s.x.size() != s.y.size()) throw std::invalid_argument("line_chart: empty or ragged series '" + s.label + "'");
    for (double v : s.x) xr.add(v);
    for (double v : s.y) yr.add(v);
    if (s.step) yr.add(0.0);
  }
  xr.pad();
  yr.pad();
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto X = [&](double v) { return kLeft + (v - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto Y = [&](double v) { return kTop + ph - (v - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::string o;
  o += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o += "<!-- " + comment_safe(plot.provenance) + " -->\n";
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kWidth) + "\" height=\"" +
       std::to_string(kHeight) + "\" viewBox=\"0 0 " + std::to_string(kWidth) + " " + std::to_string(kHeight) + "\">\n";
  o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o += "<text x=\"" + fmt(kWidth / 2.0) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
       escape(plot.title) + "</text>\n";
  o += "<rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kTop) + "\" width=\"" + fmt(pw) + "\" height=\"" + fmt(ph) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = xr.lo + (xr.hi - xr.lo) * t / 4.0, yv = yr.lo + (yr.hi - yr.lo) * t / 4.0;
    o += "<text x=\"" + fmt(X(xv)) + "\" y=\"" + fmt(kTop + ph + 16) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + tick(xv) + "</text>\n";
    o += "<text x=\"" + fmt(kLeft - 6) + "\" y=\"" + fmt(Y(yv) + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + tick(yv) + "</text>\n";
  }
  o += "<text x=\"" + fmt(kLeft + pw / 2) + "\" y=\"" + fmt(kHeight - 12.0) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + escape(plot.x_label) + "</text>\n";
  o += "<text x=\"16\" y=\"" + fmt(kTop + ph / 2) + "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 " +
       fmt(kTop + ph / 2) + ")\">" + escape(plot.y_label) + "</text>\n";

  for (std::size_t k = 0; k < plot.series.size(); ++k) {
    const auto& s = plot.series[k];
    const char* colour = kColours[k % std::size(kColours)];
    std::string pts;
    auto add = [&](double x, double y) {
      if (!pts.empty()) pts += ' ';
      pts += fmt(X(x)) + "," + fmt(Y(y));
    };
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (s.step) add(s.x[i], i ? s.y[i - 1] : 0.0);
      add(s.x[i], s.y[i]);
    }
    o += "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    o += "<text x=\"" + fmt(kLeft + 10) + "\" y=\"" + fmt(kTop + 16 + 14.0 * k) + "\" fill=\"" + colour +
         "\" font-family=\"sans-serif\" font-size=\"12\">" + escape(s.label) + "</text>\n";
  }
  o += "</svg>\n";
  return o;
}

std::vector<fs::path> render_directory(const fs::path& in, const fs::path& out) {
  if (!fs::is_directory(in)) throw std::runtime_error("artifact directory not found: " + in.string());
  std::vector<fs::path> csvs;
  for (const auto& e : fs::directory_iterator(in)) {
    if (e.is_regular_file() && e.path().extension() == ".csv") csvs.push_back(e.path());
  }
  std::sort(csvs.begin(), csvs.end());

  std::map<fs::path, std::string> figures;
  for (const auto& path : csvs) {
    const io::CsvTable t = io::read_csv(path);
    const auto& h = t.header;
    auto has = [&](const char* c) { return std::find(h.begin(), h.end(), c) != h.end(); };
    Plot p;
    const std::string stem = path.stem().string();
    p.provenance = "data: " + path.filename().string() + ", " + std::to_string(t.rows.size()) + " rows";
    if (h.size() == 2 && has("x") && has("F")) {
      p.title = stem + ": ECDF";
      p.x_label = "x";
      p.y_label = "F(x)";
      p.series.push_back({stem, t.numeric_column("x"), t.numeric_column("F"), true});
    } else if (has("x") && has("rho")) {
      p.title = stem + ": density";
      p.x_label = "x";
      p.y_label = "rho";
      p.series.push_back({stem, t.numeric_column("x"), t.numeric_column("rho"), false});
    } else if (has("index") && has("median") && has("q90") && has("q99")) {
      p.title = stem + ": rigidity profile";
      p.x_label = "i";
      p.y_label = "D_i";
      const auto i = t.numeric_column("index");
      p.series.push_back({"median", i, t.numeric_column("median"), false});
      p.series.push_back({"q90", i, t.numeric_column("q90"), false});
      p.series.push_back({"q99", i, t.numeric_column("q99"), false});
    } else {
      continue;
    }
    if (t.rows.empty()) throw std::runtime_error("no data rows in " + path.string());
    figures[out / (stem + ".svg")] = line_chart(p);
  }
  if (figures.empty()) throw std::runtime_error("no renderable CSV in " + in.string());

  std::vector<fs::path> written;
  for (const auto& [path, svg] : figures) {
    io::write_file(path, svg);
    written.push_back(path);
  }
  return written;
}

}  // namespace dbeta::render
