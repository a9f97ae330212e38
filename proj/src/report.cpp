#include "pairing/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "pairing/textio.hpp"

namespace pairing::report {

namespace {

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    return quoted + "\"";
}

} // namespace

std::string Table::render() const {
    std::vector<std::size_t> widths(headers.size(), 0);
    for (std::size_t c = 0; c < headers.size(); ++c) widths[c] = headers[c].size();
    for (const auto& row : rows)
        for (std::size_t c = 0; c < row.size() && c < widths.size(); ++c)
            widths[c] = std::max(widths[c], row[c].size());

    std::string out;
    if (!title.empty()) out += title + "\n";
    std::string rule;
    for (std::size_t c = 0; c < headers.size(); ++c)
        rule += std::string(widths[c] + 2, '-') + (c + 1 < headers.size() ? "+" : "");
    out += rule + "\n";
    auto emit_row = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < headers.size(); ++c) {
            const std::string& cell = c < cells.size() ? cells[c] : std::string();
            out += " " + pad(cell, widths[c]) + " ";
            if (c + 1 < headers.size()) out += "|";
        }
        out += "\n";
    };
    emit_row(headers);
    out += rule + "\n";
    for (const auto& row : rows) emit_row(row);
    out += rule + "\n";
    return out;
}

std::string Table::to_csv() const {
    std::string out;
    for (std::size_t c = 0; c < headers.size(); ++c)
        out += csv_cell(headers[c]) + (c + 1 < headers.size() ? "," : "");
    out += "\n";
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            out += csv_cell(row[c]) + (c + 1 < row.size() ? "," : "");
        out += "\n";
    }
    return out;
}

std::string percent2(double fraction) { return fixed2(fraction * 100.0); }

std::string fixed2(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", value);
    return buf;
}

std::string seconds_and_hours(double seconds) {
    return format_double(seconds) + " s (" + fixed2(seconds / 3600.0) + " h)";
}

std::string svg_bar_chart(const std::string& title, const std::vector<std::string>& categories,
                          const std::vector<BarSeries>& series) {
    constexpr int width = 720, height = 400;
    constexpr int margin_left = 60, margin_right = 20, margin_top = 40, margin_bottom = 60;
    const int plot_w = width - margin_left - margin_right;
    const int plot_h = height - margin_top - margin_bottom;
    static const char* palette[] = {"#4878a8", "#e49444", "#6a9f58", "#d1605e",
                                    "#a87c9f", "#85b6b2"};

    double max_v = 0.0;
    for (const auto& s : series)
        for (double v : s.values) max_v = std::max(max_v, v);
    if (max_v <= 0.0) max_v = 1.0;

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
           "\" height=\"" + std::to_string(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + std::to_string(width / 2) +
           "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
           title + "</text>\n";

    // y gridlines and labels
    for (int g = 0; g <= 4; ++g) {
        const double frac = g / 4.0;
        const int y = margin_top + static_cast<int>(plot_h * (1.0 - frac));
        svg += "<line x1=\"" + std::to_string(margin_left) + "\" y1=\"" + std::to_string(y) +
               "\" x2=\"" + std::to_string(width - margin_right) + "\" y2=\"" + std::to_string(y) +
               "\" stroke=\"#dddddd\"/>\n";
        svg += "<text x=\"" + std::to_string(margin_left - 6) + "\" y=\"" + std::to_string(y + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
               format_double(std::round(max_v * frac * 100.0) / 100.0) + "</text>\n";
    }

    const std::size_t n_cat = categories.size();
    const std::size_t n_ser = series.size();
    const double group_w = n_cat > 0 ? static_cast<double>(plot_w) / n_cat : plot_w;
    const double bar_w = n_ser > 0 ? group_w * 0.8 / n_ser : group_w;

    for (std::size_t c = 0; c < n_cat; ++c) {
        for (std::size_t s = 0; s < n_ser; ++s) {
            const double v = c < series[s].values.size() ? series[s].values[c] : 0.0;
            const double h = plot_h * (v / max_v);
            const double x = margin_left + group_w * c + group_w * 0.1 + bar_w * s;
            const double y = margin_top + plot_h - h;
            svg += "<rect x=\"" + fixed2(x) + "\" y=\"" + fixed2(y) + "\" width=\"" +
                   fixed2(bar_w * 0.92) + "\" height=\"" + fixed2(h) + "\" fill=\"" +
                   palette[s % 6] + "\"/>\n";
        }
        svg += "<text x=\"" + fixed2(margin_left + group_w * (c + 0.5)) + "\" y=\"" +
               std::to_string(margin_top + plot_h + 18) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
               categories[c] + "</text>\n";
    }

    for (std::size_t s = 0; s < n_ser; ++s) {
        const int lx = margin_left + static_cast<int>(s) * 130;
        const int ly = height - 18;
        svg += "<rect x=\"" + std::to_string(lx) + "\" y=\"" + std::to_string(ly - 10) +
               "\" width=\"12\" height=\"12\" fill=\"" + palette[s % 6] + "\"/>\n";
        svg += "<text x=\"" + std::to_string(lx + 18) + "\" y=\"" + std::to_string(ly) +
               "\" font-family=\"sans-serif\" font-size=\"12\">" + series[s].name + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace pairing::report
