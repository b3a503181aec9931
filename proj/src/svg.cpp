#include "tsnoether/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>

#include "tsnoether/errors.hpp"

namespace tsn {

namespace {

constexpr int kWidth = 960;
constexpr int kHeight = 560;
constexpr int kLeft = 76;
constexpr int kRight = 28;
constexpr int kTop = 48;
constexpr int kBottom = 52;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b"};

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

std::string xml_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

/// Axis step m * 10^e with m in {1, 2, 5}, aiming for about six intervals.
void nice_step(double span, long long& mantissa, int& exp10) {
    const double raw = span / 6.0;
    exp10 = static_cast<int>(std::floor(std::log10(raw)));
    const double norm = raw / std::pow(10.0, exp10);
    if (norm < 1.5) {
        mantissa = 1;
    } else if (norm < 3.5) {
        mantissa = 2;
    } else if (norm < 7.5) {
        mantissa = 5;
    } else {
        mantissa = 1;
        ++exp10;
    }
}

/// Exact decimal text for digits * 10^exp10, avoiding float formatting noise
/// in tick labels (3 * 0.2 is not 0.6 in binary).
std::string decimal_label(long long digits, int exp10) {
    if (digits == 0) return "0";
    std::string s = std::to_string(digits < 0 ? -digits : digits);
    if (exp10 >= 0) {
        s.append(static_cast<std::size_t>(exp10), '0');
    } else {
        const std::size_t places = static_cast<std::size_t>(-exp10);
        if (s.size() <= places) {
            s.insert(0, places - s.size() + 1, '0');
        }
        s.insert(s.size() - places, ".");
    }
    if (digits < 0) s.insert(0, "-");
    return s;
}

struct Tick {
    double value = 0.0;
    std::string label;
};

std::vector<Tick> make_ticks(const Range& r) {
    long long m = 1;
    int e = 0;
    nice_step(r.hi - r.lo, m, e);
    const double step = static_cast<double>(m) * std::pow(10.0, e);
    const long long k_lo = static_cast<long long>(std::ceil(r.lo / step - 1e-9));
    const long long k_hi = static_cast<long long>(std::floor(r.hi / step + 1e-9));
    std::vector<Tick> ticks;
    for (long long k = k_lo; k <= k_hi; ++k) {
        const std::string label = decimal_label(m * k, e);
        ticks.push_back({std::strtod(label.c_str(), nullptr), label});
    }
    return ticks;
}

Range padded(double lo, double hi) {
    if (!(hi > lo)) {
        // Constant data: open a symmetric band so the line sits mid-height.
        const double pad = std::max(1.0, std::abs(lo)) * 0.05;
        return {lo - pad, hi + pad};
    }
    const double pad = (hi - lo) * 0.05;
    return {lo - pad, hi + pad};
}

} // namespace

std::string render_line_chart(std::span<const ChartSeries> series, std::string_view title) {
    if (series.empty()) {
        throw EmptySeries("a chart needs at least one series");
    }
    double tmin = 0, tmax = 0, ymin = 0, ymax = 0;
    bool first = true;
    for (const ChartSeries& s : series) {
        if (s.t.empty()) {
            throw EmptySeries("series '" + s.name + "' has no points");
        }
        if (s.t.size() != s.y.size()) {
            throw DimensionMismatch("series '" + s.name + "' has mismatched t/y lengths");
        }
        for (std::size_t i = 0; i < s.t.size(); ++i) {
            if (first) {
                tmin = tmax = s.t[i];
                ymin = ymax = s.y[i];
                first = false;
            }
            tmin = std::min(tmin, s.t[i]);
            tmax = std::max(tmax, s.t[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    }
    const Range xr = padded(tmin, tmax);
    const Range yr = padded(ymin, ymax);

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto px = [&](double t) { return kLeft + (t - xr.lo) / (xr.hi - xr.lo) * plot_w; };
    auto py = [&](double y) { return kHeight - kBottom - (y - yr.lo) / (yr.hi - yr.lo) * plot_h; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
       << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    os << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    os << "<g font-family=\"Menlo, Consolas, monospace\" font-size=\"12\" fill=\"#333\">\n";

    if (!title.empty()) {
        os << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
           << xml_escape(title) << "</text>\n";
    }

    // Grid and ticks.
    for (const Tick& tk : make_ticks(xr)) {
        const double x = px(tk.value);
        os << "<line x1=\"" << coord(x) << "\" y1=\"" << kTop << "\" x2=\"" << coord(x)
           << "\" y2=\"" << kHeight - kBottom << "\" stroke=\"#e5e5e5\"/>\n";
        os << "<text x=\"" << coord(x) << "\" y=\"" << kHeight - kBottom + 18
           << "\" text-anchor=\"middle\">" << tk.label << "</text>\n";
    }
    for (const Tick& tk : make_ticks(yr)) {
        const double y = py(tk.value);
        os << "<line x1=\"" << kLeft << "\" y1=\"" << coord(y) << "\" x2=\"" << kWidth - kRight
           << "\" y2=\"" << coord(y) << "\" stroke=\"#e5e5e5\"/>\n";
        os << "<text x=\"" << kLeft - 8 << "\" y=\"" << coord(y + 4)
           << "\" text-anchor=\"end\">" << tk.label << "</text>\n";
    }

    // Axes on top of the grid.
    os << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\""
       << kWidth - kRight << "\" y2=\"" << kHeight - kBottom << "\" stroke=\"#333\"/>\n";
    os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
       << kHeight - kBottom << "\" stroke=\"#333\"/>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const ChartSeries& s = series[si];
        const char* color = kPalette[si % (sizeof kPalette / sizeof kPalette[0])];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.t.size(); ++i) {
            if (i) os << ' ';
            os << coord(px(s.t[i])) << ',' << coord(py(s.y[i]));
        }
        os << "\"/>\n";
        // Legend entry, stacked top-right inside the plot.
        const int ly = kTop + 16 + static_cast<int>(si) * 18;
        os << "<line x1=\"" << kWidth - kRight - 150 << "\" y1=\"" << ly - 4 << "\" x2=\""
           << kWidth - kRight - 122 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color
           << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << kWidth - kRight - 114 << "\" y=\"" << ly << "\">"
           << xml_escape(s.name) << "</text>\n";
    }

    os << "</g>\n</svg>\n";
    return os.str();
}

} // namespace tsn
