#pragma once

// Output rendering: fixed-width text tables, CSV, and static SVG bar charts.

#include <string>
#include <vector>

namespace pairing::report {

struct Table {
    std::string title;
    std::vector<std::string> headers;
    std::vector<std::vector<std::string>> rows;

    std::string render() const; // fixed-width text
    std::string to_csv() const;
};

// Fraction -> percent with two decimals, matching the study's table style.
std::string percent2(double fraction);
std::string fixed2(double value);
std::string seconds_and_hours(double seconds); // "26465 s (7.35 h)"

struct BarSeries {
    std::string name;
    std::vector<double> values; // one per category
};

std::string svg_bar_chart(const std::string& title, const std::vector<std::string>& categories,
                          const std::vector<BarSeries>& series);

} // namespace pairing::report
