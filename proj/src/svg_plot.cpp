#include "raidkit/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "raidkit/error.hpp"

namespace raidkit {
namespace {

constexpr double kWidth = 480.0;
constexpr double kHeight = 360.0;
constexpr const char* kColors[] = {"#1f4e9c", "#c0392b", "#27864a", "#8e44ad"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s(buf);
  if (s == "-0.000") s = "0.000";
  return s;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char ch : text) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string header(double w, double h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
         "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\" font-family=\"sans-serif\" font-size=\"12\">\n"
         "<rect x=\"0\" y=\"0\" width=\"" + num(w) + "\" height=\"" + num(h) + "\" fill=\"white\"/>\n";
}

std::string text(double x, double y, const std::string& s, const char* anchor = "middle",
                 const std::string& extra = "") {
  return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" text-anchor=\"" + anchor + "\"" + extra +
         ">" + escape(s) + "</text>\n";
}

std::string line(double x1, double y1, double x2, double y2, const char* stroke, double width = 1.0) {
  return "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" + num(y2) +
         "\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) + "\"/>\n";
}

std::string marker(std::size_t series, double x, double y) {
  const char* color = kColors[series % 4];
  switch (series % 4) {
    case 0:
      return "<circle cx=\"" + num(x) + "\" cy=\"" + num(y) + "\" r=\"3.5\" fill=\"" + color + "\"/>\n";
    case 1:
      return "<rect x=\"" + num(x - 3.0) + "\" y=\"" + num(y - 3.0) +
             "\" width=\"6.000\" height=\"6.000\" fill=\"" + color + "\"/>\n";
    case 2:
      return "<path d=\"M " + num(x) + " " + num(y - 4.0) + " L " + num(x + 4.0) + " " + num(y + 3.0) +
             " L " + num(x - 4.0) + " " + num(y + 3.0) + " Z\" fill=\"" + color + "\"/>\n";
    default:
      return "<circle cx=\"" + num(x) + "\" cy=\"" + num(y) + "\" r=\"3.5\" fill=\"none\" stroke=\"" +
             color + "\"/>\n";
  }
}

void write_file(const std::filesystem::path& path, const std::string& svg) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << svg;
}

}  // namespace

std::string render_svplot(const std::vector<Series>& spectra, const std::string& title) {
  if (spectra.empty()) throw ContractViolation("emit_svplot: no spectra given");
  std::size_t longest = 0;
  bool floored = false;
  double lo = INFINITY;
  double hi = -INFINITY;
  for (const auto& s : spectra) {
    if (s.values.empty()) throw ContractViolation("emit_svplot: spectrum '" + s.name + "' is empty");
    longest = std::max(longest, s.values.size());
    for (double v : s.values) {
      if (!std::isfinite(v)) throw ContractViolation("emit_svplot: non-finite value in '" + s.name + "'");
      if (v <= kLogFloor) floored = true;
      const double e = std::log10(std::max(v, kLogFloor));
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
  }
  double ymin = std::floor(lo);
  double ymax = std::ceil(hi);
  if (ymax - ymin < 2.0) {
    ymin -= 1.0;
    ymax += 1.0;
  }
  const int decades = static_cast<int>(ymax - ymin);
  const int tick_step = decades <= 10 ? 1 : (decades <= 20 ? 2 : 4);

  const double left = 64.0, right = kWidth - 16.0, top = 36.0, bottom = kHeight - 48.0;
  const double xspan = static_cast<double>(longest);
  auto px = [&](std::size_t i) { return left + (right - left) * (static_cast<double>(i) + 0.5) / xspan; };
  auto py = [&](double e) { return bottom - (bottom - top) * (e - ymin) / (ymax - ymin); };

  std::string svg = header(kWidth, kHeight);
  if (!title.empty()) svg += text(kWidth / 2, 20.0, title, "middle", " font-size=\"14\"");
  svg += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(right - left) +
         "\" height=\"" + num(bottom - top) + "\" fill=\"none\" stroke=\"black\"/>\n";
  const int first_tick = static_cast<int>(std::ceil(ymin / tick_step)) * tick_step;
  for (int t = first_tick; t <= static_cast<int>(ymax); t += tick_step) {
    const double y = py(t);
    svg += line(left - 4.0, y, left, y, "black");
    svg += line(left, y, right, y, "#dddddd", 0.5);
    svg += text(left - 6.0, y + 4.0, std::to_string(t), "end");
  }
  const std::size_t xstep = longest <= 20 ? 1 : (longest <= 100 ? 10 : (longest <= 500 ? 50 : 100));
  for (std::size_t i = 1; i <= longest; i += (i == 1 && xstep > 1) ? xstep - 1 : xstep) {
    const double x = px(i - 1);
    svg += line(x, bottom, x, bottom + 4.0, "black");
    svg += text(x, bottom + 16.0, std::to_string(i));
  }
  svg += text((left + right) / 2, kHeight - 12.0, "index");
  svg += text(16.0, (top + bottom) / 2, "log10(singular value)", "middle",
              " transform=\"rotate(-90 16.000 " + num((top + bottom) / 2) + ")\"");

  for (std::size_t s = 0; s < spectra.size(); ++s) {
    svg += "<g class=\"series\" data-name=\"" + escape(spectra[s].name) + "\">\n";
    for (std::size_t i = 0; i < spectra[s].values.size(); ++i) {
      svg += marker(s, px(i), py(std::log10(std::max(spectra[s].values[i], kLogFloor))));
    }
    svg += "</g>\n";
  }

  double ly = top + 14.0;
  for (std::size_t s = 0; s < spectra.size(); ++s, ly += 16.0) {
    svg += marker(s, right - 150.0, ly - 4.0);
    svg += text(right - 140.0, ly, spectra[s].name, "start");
  }
  if (floored) svg += text(right - 8.0, ly, "values at or below 1e-17 drawn at 1e-17", "end", " font-size=\"10\"");
  svg += "</svg>\n";
  return svg;
}

void emit_svplot(const std::vector<Series>& spectra, const std::filesystem::path& path,
                 const std::string& title) {
  write_file(path, render_svplot(spectra, title));
}

std::string render_biplot(const DenseMatrix& scores, const DenseMatrix& loadings,
                          const std::string& title) {
  if (scores.cols() != 2 || loadings.cols() != 2) {
    throw ContractViolation("emit_biplot: scores " + shape_string(scores) + " and loadings " +
                            shape_string(loadings) + " must both have 2 columns");
  }
  if (!scores.all_finite() || !loadings.all_finite()) {
    throw ContractViolation("emit_biplot: non-finite coordinates");
  }
  double extent = std::max(scores.max_abs(), loadings.max_abs());
  if (extent == 0.0) extent = 1.0;
  extent *= 1.05;

  const double size = 360.0;
  const double left = 48.0, top = 36.0;
  const double cx = left + size / 2, cy = top + size / 2;
  auto px = [&](double x) { return cx + (size / 2) * x / extent; };
  auto py = [&](double y) { return cy - (size / 2) * y / extent; };

  std::string svg = header(left + size + 24.0, top + size + 40.0);
  if (!title.empty()) svg += text(left + size / 2, 20.0, title, "middle", " font-size=\"14\"");
  svg += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(size) + "\" height=\"" +
         num(size) + "\" fill=\"none\" stroke=\"black\"/>\n";
  svg += line(left, cy, left + size, cy, "#bbbbbb", 0.5);
  svg += line(cx, top, cx, top + size, "#bbbbbb", 0.5);
  char label[64];
  std::snprintf(label, sizeof label, "%.3g", extent);
  svg += text(left + size, top + size + 16.0, label, "end");
  std::snprintf(label, sizeof label, "%.3g", -extent);
  svg += text(left, top + size + 16.0, label, "start");

  svg += "<g class=\"loadings\" stroke=\"gray\" stroke-width=\"1.000\">\n";
  for (std::size_t i = 0; i < loadings.rows(); ++i) {
    svg += "<line x1=\"" + num(cx) + "\" y1=\"" + num(cy) + "\" x2=\"" + num(px(loadings(i, 0))) +
           "\" y2=\"" + num(py(loadings(i, 1))) + "\"/>\n";
  }
  svg += "</g>\n<g class=\"scores\" fill=\"black\">\n";
  for (std::size_t i = 0; i < scores.rows(); ++i) {
    svg += "<circle cx=\"" + num(px(scores(i, 0))) + "\" cy=\"" + num(py(scores(i, 1))) + "\" r=\"2.5\"/>\n";
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

void emit_biplot(const DenseMatrix& scores, const DenseMatrix& loadings,
                 const std::filesystem::path& path, const std::string& title) {
  write_file(path, render_biplot(scores, loadings, title));
}

}  // namespace raidkit
