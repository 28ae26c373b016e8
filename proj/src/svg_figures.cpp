#include "chronomap/svg_figures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "chronomap/csv.hpp"
#include "chronomap/data_model.hpp"

namespace chronomap {

namespace {

std::string fmt(double v) { return csv::format_double(v, 2); }

void open_svg(std::ostringstream& out, int width, int height, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
}

void save_svg(const std::string& path, const std::ostringstream& out) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write file: " + path);
  file << out.str() << "</svg>\n";
}

/// A filled step profile of `values` in [0,1] inside the given box, with
/// day separators every 96 slots.
void draw_week_panel(std::ostringstream& out, const std::vector<double>& values, double left,
                     double top, double width, double height, const std::string& label) {
  out << "<g class=\"panel\">\n";
  out << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(width)
      << "\" height=\"" << fmt(height) << "\" fill=\"none\" stroke=\"#888\"/>\n";
  const double bottom = top + height;
  const std::size_t n = values.size();
  std::ostringstream path;
  path << "M" << fmt(left) << " " << fmt(bottom);
  for (std::size_t s = 0; s < n; ++s) {
    const double v = std::clamp(values[s], 0.0, 1.0);
    const double x0 = left + width * static_cast<double>(s) / static_cast<double>(n);
    const double x1 = left + width * static_cast<double>(s + 1) / static_cast<double>(n);
    const double y = bottom - height * v;
    path << " L" << fmt(x0) << " " << fmt(y) << " L" << fmt(x1) << " " << fmt(y);
  }
  path << " L" << fmt(left + width) << " " << fmt(bottom) << " Z";
  out << "<path d=\"" << path.str() << "\" fill=\"#4477aa\" stroke=\"none\"/>\n";
  for (int d = 1; d < kDaysPerWeek; ++d) {
    const double x = left + width * static_cast<double>(d) / static_cast<double>(kDaysPerWeek);
    out << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(top) << "\" x2=\"" << fmt(x)
        << "\" y2=\"" << fmt(bottom) << "\" stroke=\"#bbb\" stroke-dasharray=\"2,2\"/>\n";
  }
  out << "<text x=\"" << fmt(left - 8) << "\" y=\"" << fmt(top + height / 2 + 4)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << label
      << "</text>\n";
  out << "</g>\n";
}

void draw_day_labels(std::ostringstream& out, double left, double width, double y) {
  for (int d = 0; d < kDaysPerWeek; ++d) {
    const double x = left + width * (static_cast<double>(d) + 0.5) / static_cast<double>(kDaysPerWeek);
    out << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << day_name(d) << "</text>\n";
  }
}

}  // namespace

void write_codevector_figure(const std::string& path, const SomModel& model,
                             const std::vector<long>& class_sizes) {
  const int width = 960;
  const double left = 110.0, right = 20.0, top = 56.0;
  const double panel_h = 42.0, gap = 8.0;
  const double plot_w = width - left - right;
  const int height = static_cast<int>(top + model.units * (panel_h + gap) + 28.0);

  std::ostringstream out;
  open_svg(out, width, height, "Work-week code vectors along the string");
  draw_day_labels(out, left, plot_w, top - 10.0);
  for (int u = 0; u < model.units; ++u) {
    std::string label = "unit " + std::to_string(u);
    if (static_cast<std::size_t>(u) < class_sizes.size()) {
      label += " (n=" + std::to_string(class_sizes[static_cast<std::size_t>(u)]) + ")";
    }
    draw_week_panel(out, model.code_vectors[static_cast<std::size_t>(u)], left,
                    top + u * (panel_h + gap), plot_w, panel_h, label);
  }
  save_svg(path, out);
}

void write_embedding_figure(const std::string& path, const MdsEmbedding& embedding) {
  const int width = 640, height = 640;
  const double margin = 60.0;
  const std::size_t n = embedding.coords.size();
  if (n == 0) throw std::invalid_argument("empty embedding");

  double min_x = embedding.coords[0][0], max_x = min_x;
  double min_y = embedding.coords[0].size() > 1 ? embedding.coords[0][1] : 0.0, max_y = min_y;
  for (const auto& c : embedding.coords) {
    const double y = c.size() > 1 ? c[1] : 0.0;
    min_x = std::min(min_x, c[0]);
    max_x = std::max(max_x, c[0]);
    min_y = std::min(min_y, y);
    max_y = std::max(max_y, y);
  }
  // One scale for both axes, so plotted distances stay comparable.
  const double span = std::max({max_x - min_x, max_y - min_y, 1e-9});
  const double scale = (width - 2.0 * margin) / span;
  const double cx = (min_x + max_x) / 2.0, cy = (min_y + max_y) / 2.0;
  auto px = [&](double x) { return width / 2.0 + (x - cx) * scale; };
  auto py = [&](double y) { return height / 2.0 - (y - cy) * scale; };

  std::ostringstream out;
  open_svg(out, width, height, "String recovered from code-vector distances");
  std::ostringstream line;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = embedding.coords[i].size() > 1 ? embedding.coords[i][1] : 0.0;
    line << (i ? " " : "") << fmt(px(embedding.coords[i][0])) << "," << fmt(py(y));
  }
  out << "<polyline points=\"" << line.str()
      << "\" fill=\"none\" stroke=\"#999\" stroke-width=\"1.5\"/>\n";
  for (std::size_t i = 0; i < n; ++i) {
    const double y = embedding.coords[i].size() > 1 ? embedding.coords[i][1] : 0.0;
    out << "<circle cx=\"" << fmt(px(embedding.coords[i][0])) << "\" cy=\"" << fmt(py(y))
        << "\" r=\"7\" fill=\"#4477aa\"/>\n";
    out << "<text x=\"" << fmt(px(embedding.coords[i][0])) << "\" y=\""
        << fmt(py(y) - 11.0)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << i
        << "</text>\n";
  }
  if (embedding.eigenvalues.size() >= 2) {
    out << "<text x=\"" << margin << "\" y=\"" << height - 20
        << "\" font-family=\"sans-serif\" font-size=\"11\">eigenvalues: "
        << csv::format_double(embedding.eigenvalues[0], 3) << ", "
        << csv::format_double(embedding.eigenvalues[1], 3) << "</text>\n";
  }
  save_svg(path, out);
}

void write_curves_figure(const std::string& path, const ActivityCurve& curves) {
  const int width = 960;
  const double left = 110.0, right = 20.0, top = 56.0;
  const double panel_h = 56.0, gap = 10.0;
  const double plot_w = width - left - right;
  const int panels = static_cast<int>(curves.classes.size());
  const int height = static_cast<int>(top + panels * (panel_h + gap) + 28.0);

  std::ostringstream out;
  open_svg(out, width, height, "Average share at work, by superclass");
  draw_day_labels(out, left, plot_w, top - 10.0);
  for (int c = 0; c < panels; ++c) {
    std::string label = curves.classes[static_cast<std::size_t>(c)];
    if (static_cast<std::size_t>(c) < curves.class_sizes.size()) {
      label += " (n=" + std::to_string(curves.class_sizes[static_cast<std::size_t>(c)]) + ")";
    }
    draw_week_panel(out, curves.curves[static_cast<std::size_t>(c)], left,
                    top + c * (panel_h + gap), plot_w, panel_h, label);
  }
  save_svg(path, out);
}

}  // namespace chronomap
