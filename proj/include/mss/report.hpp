#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace mss {

using Json = nlohmann::ordered_json;

// writes {version, command, config, results, timestamp}; everything except the
// timestamp is a deterministic function of the config
void write_report(const Json& config, const Json& results, const std::string& command,
                  const std::string& path);

void write_csv(const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows, const std::string& path);

// minimal hand-rolled SVG line chart; series share the x grid
struct PlotSeries {
  std::string label;
  std::vector<double> x, y;
};
void write_svg_plot(const std::vector<PlotSeries>& series, const std::string& title,
                    const std::string& path, bool log_y = false);

extern const char* kToolVersion;

}  // namespace mss
