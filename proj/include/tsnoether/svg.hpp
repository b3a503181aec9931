#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tsn {

struct ChartSeries {
    std::string name;
    std::vector<double> t;
    std::vector<double> y;
};

/// Standalone SVG line chart: linear axes autoscaled with 5% margins, one
/// polyline per series, a legend, and 1-2-5 tick labels printed as exact
/// decimals. Returns the document text; no external assets, no file IO.
std::string render_line_chart(std::span<const ChartSeries> series, std::string_view title = {});

} // namespace tsn
