#include "pmuguard/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>

#include "pmuguard/text.hpp"

namespace pmuguard::plot {

namespace {

constexpr double kWidth = 720, kHeight = 360;
constexpr double kLeft = 60, kRight = 130, kTop = 30, kBottom = 40;
constexpr std::array<const char*, 8> kColors = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                                "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string escape(const std::string& s) {
    std::string out;
    for (const char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

void write_svg(std::ostream& out, const std::string& title, const std::string& y_label,
               const std::vector<double>& x, const std::vector<Series>& series) {
    double x0 = x.empty() ? 0.0 : x.front(), x1 = x.empty() ? 1.0 : x.back();
    double y0 = 0.0, y1 = 1.0;
    for (const auto& s : series) {
        for (const double v : s.values) {
            y0 = std::min(y0, v);
            y1 = std::max(y1, v);
        }
    }
    if (x1 <= x0) x1 = x0 + 1.0;
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double v) { return kLeft + (v - x0) / (x1 - x0) * pw; };
    auto py = [&](double v) { return kTop + (1.0 - (v - y0) / (y1 - y0)) * ph; };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kLeft << "\" y=\"18\" font-size=\"13\">" << escape(title) << "</text>\n";
    out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = x0 + (x1 - x0) * i / 4.0, yv = y0 + (y1 - y0) * i / 4.0;
        out << "<text x=\"" << px(xv) << "\" y=\"" << kHeight - kBottom + 15 << "\" text-anchor=\"middle\">"
            << text::format_sig9(std::round(xv * 100.0) / 100.0) << "</text>\n";
        out << "<text x=\"" << kLeft - 5 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">"
            << text::format_sig9(std::round(yv * 100.0) / 100.0) << "</text>\n";
    }
    out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 5 << "\" text-anchor=\"middle\">time [s]</text>\n";
    out << "<text x=\"14\" y=\"" << kTop + ph / 2 << "\" transform=\"rotate(-90 14 " << kTop + ph / 2
        << ")\" text-anchor=\"middle\">" << escape(y_label) << "</text>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kColors[s % kColors.size()];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
        const std::size_t n = std::min(x.size(), series[s].values.size());
        for (std::size_t k = 0; k < n; ++k) {
            out << (k ? " " : "") << text::format_sig9(px(x[k])) << ',' << text::format_sig9(py(series[s].values[k]));
        }
        out << "\"/>\n";
        const double ly = kTop + 14.0 * static_cast<double>(s + 1);
        out << "<line x1=\"" << kWidth - kRight + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << kWidth - kRight + 30
            << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << kWidth - kRight + 35 << "\" y=\"" << ly << "\">" << escape(series[s].name)
            << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace pmuguard::plot
