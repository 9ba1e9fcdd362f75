#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace ptwa {

/// Self-contained SVG line chart writer: multiple named series against a
/// shared x axis, automatic ranges, ticks, and a legend. Pure function of the
/// data, so regenerating from the CSVs is byte-identical.
class LineChart {
  public:
    LineChart(std::string title, std::string x_label, std::string y_label);

    void add_series(std::string name, std::vector<double> x, std::vector<double> y);
    void write(const std::filesystem::path& path) const;

  private:
    struct Series {
        std::string name;
        std::vector<double> x, y;
    };
    std::string title_, x_label_, y_label_;
    std::vector<Series> series_;
};

}  // namespace ptwa
