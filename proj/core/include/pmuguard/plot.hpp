#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pmuguard::plot {

struct Series {
    std::string name;
    std::vector<double> values;  // one per x
};

// Minimal SVG line chart: shared x axis, one polyline per series, legend.
void write_svg(std::ostream& out, const std::string& title, const std::string& y_label,
               const std::vector<double>& x, const std::vector<Series>& series);

}  // namespace pmuguard::plot
