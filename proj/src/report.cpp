#include "mss/report.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace mss {

const char* kToolVersion = "0.1.0";

namespace {

void ensure_parent(const std::string& path) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
}

std::ofstream open_or_throw(const std::string& path) {
  ensure_parent(path);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

std::string fmt(double v, const char* spec = "%.17g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

void write_report(const Json& config, const Json& results, const std::string& command,
                  const std::string& path) {
  Json doc;
  doc["version"] = kToolVersion;
  doc["command"] = command;
  doc["config"] = config;
  doc["results"] = results;
  std::time_t now = std::time(nullptr);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  doc["timestamp"] = stamp;
  open_or_throw(path) << doc.dump(1) << '\n';
}

void write_csv(const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows, const std::string& path) {
  if (header.empty()) throw std::invalid_argument("write_csv: empty header");
  std::ofstream out = open_or_throw(path);
  for (size_t j = 0; j < header.size(); ++j)
    out << header[j] << (j + 1 < header.size() ? ',' : '\n');
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw std::invalid_argument("write_csv: row width does not match the header");
    for (size_t j = 0; j < row.size(); ++j)
      out << fmt(row[j]) << (j + 1 < row.size() ? ',' : '\n');
  }
}

void write_svg_plot(const std::vector<PlotSeries>& series, const std::string& title,
                    const std::string& path, bool log_y) {
  if (series.empty()) throw std::invalid_argument("write_svg_plot: no series");
  const double width = 640, height = 420;
  const double left = 70, right = 615, top = 45, bottom = 370;

  auto usable = [log_y](double y) { return std::isfinite(y) && (!log_y || y > 0.0); };
  double x_min = HUGE_VAL, x_max = -HUGE_VAL, y_min = HUGE_VAL, y_max = -HUGE_VAL;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size())
      throw std::invalid_argument("write_svg_plot: series sizes disagree");
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !usable(s.y[i])) continue;
      double y = log_y ? std::log10(s.y[i]) : s.y[i];
      x_min = std::min(x_min, s.x[i]);
      x_max = std::max(x_max, s.x[i]);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  }
  if (!(x_min < x_max)) x_max = x_min + 1.0;
  if (!(y_min < y_max)) y_max = y_min + 1.0;
  double pad = 0.05 * (y_max - y_min);
  y_min -= pad;
  y_max += pad;

  auto px = [&](double x) { return left + (right - left) * (x - x_min) / (x_max - x_min); };
  auto py = [&](double y) {
    double t = log_y ? std::log10(y) : y;
    return bottom - (bottom - top) * (t - y_min) / (y_max - y_min);
  };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                  "#8c564b"};
  std::ofstream out = open_or_throw(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
      << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n"
      << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"monospace\" font-size=\"15\">" << title << "</text>\n";

  // frame and five ticks per axis
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << right - left
      << "\" height=\"" << bottom - top << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    double xv = x_min + k * (x_max - x_min) / 4.0;
    double yv = y_min + k * (y_max - y_min) / 4.0;
    double gx = px(xv), gy = bottom - (bottom - top) * k / 4.0;
    out << "<line x1=\"" << fmt(gx, "%.2f") << "\" y1=\"" << top << "\" x2=\"" << fmt(gx, "%.2f")
        << "\" y2=\"" << bottom << "\" stroke=\"#ddd\"/>\n"
        << "<line x1=\"" << left << "\" y1=\"" << fmt(gy, "%.2f") << "\" x2=\"" << right
        << "\" y2=\"" << fmt(gy, "%.2f") << "\" stroke=\"#ddd\"/>\n"
        << "<text x=\"" << fmt(gx, "%.2f") << "\" y=\"" << bottom + 18
        << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\">"
        << fmt(xv, "%.4g") << "</text>\n"
        << "<text x=\"" << left - 8 << "\" y=\"" << fmt(gy + 4, "%.2f")
        << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\">"
        << fmt(log_y ? std::pow(10.0, yv) : yv, "%.4g") << "</text>\n";
  }

  for (size_t s = 0; s < series.size(); ++s) {
    const char* color = palette[s % 6];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\" points=\"";
    for (size_t i = 0; i < series[s].x.size(); ++i) {
      if (!std::isfinite(series[s].x[i]) || !usable(series[s].y[i])) continue;
      out << fmt(px(series[s].x[i]), "%.2f") << ',' << fmt(py(series[s].y[i]), "%.2f") << ' ';
    }
    out << "\"/>\n";
    double ly = top + 16 + 16.0 * s;
    out << "<line x1=\"" << left + 10 << "\" y1=\"" << fmt(ly - 4, "%.2f") << "\" x2=\""
        << left + 34 << "\" y2=\"" << fmt(ly - 4, "%.2f") << "\" stroke=\"" << color
        << "\" stroke-width=\"1.6\"/>\n"
        << "<text x=\"" << left + 40 << "\" y=\"" << fmt(ly, "%.2f")
        << "\" font-family=\"monospace\" font-size=\"12\">" << series[s].label << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace mss
