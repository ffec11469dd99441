#pragma once

#include <string>
#include <vector>

namespace ionsim::csv {

// Shortest representation that round-trips the exact double value.
std::string format_double(double v);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_string() const;  // comma separated, LF line endings
  void write(const std::string& path) const;
};

Table read(const std::string& path);
std::vector<std::string> split_row(const std::string& line);

}  // namespace ionsim::csv
