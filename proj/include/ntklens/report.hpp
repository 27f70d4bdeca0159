#pragma once

#include <string>
#include <vector>

namespace ntklens {

// One polyline on a chart. x and y must have equal length.
struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct ChartSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false; // decade ticks, data must be positive
    bool log_y = false;
    int width = 760;
    int height = 440;
};

// Self-contained SVG: axes, ticks, legend, and the raw data embedded in a
// <metadata> block as CSV so the numbers survive without the CSV file.
std::string line_chart_svg(const ChartSpec &spec, const std::vector<Series> &series);

// Grouped bars, one group per label, one bar per series name. Values may be
// negative; bars hang from the zero line.
struct BarGroup {
    std::string label;
    std::vector<double> values; // one per bar name
};

std::string bar_chart_svg(const ChartSpec &spec, const std::vector<std::string> &bar_names,
                          const std::vector<BarGroup> &groups);

// Median of a copy; empty input throws.
double median(std::vector<double> values);

// Write via temp file + rename so readers never see a partial file.
void write_text_file(const std::string &path, const std::string &content);

std::string csv_escape(const std::string &field);

} // namespace ntklens
