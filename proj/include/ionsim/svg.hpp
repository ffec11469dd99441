#pragma once

#include <string>
#include <vector>

namespace ionsim::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool line = true;
  bool markers = true;
  bool dashed = false;
};

struct ChartOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  int width = 640;
  int height = 440;
};

std::string render_chart(const std::vector<Series>& series, const ChartOptions& opt);
void write_chart(const std::string& path, const std::vector<Series>& series,
                 const ChartOptions& opt);

}  // namespace ionsim::svg
