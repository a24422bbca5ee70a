#include "frozenrb/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace frozenrb {

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string tick_label(double v, bool log_axis) {
    char buf[48];
    if (log_axis)
        std::snprintf(buf, sizeof(buf), "1e%d", static_cast<int>(std::lround(v)));
    else
        std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

void write_svg_line_plot(const std::string& path, const std::string& title,
                         const std::string& xlabel, const std::string& ylabel,
                         const std::vector<PlotSeries>& series, bool log_y) {
    const double W = 720, H = 480;
    const double ml = 80, mr = 30, mt = 50, mb = 60;  // margins
    const double pw = W - ml - mr, ph = H - mt - mb;

    double xmin = std::numeric_limits<double>::max(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series)
        for (auto [x, y] : s.points) {
            if (log_y && !(y > 0.0))
                continue;
            const double yy = log_y ? std::log10(y) : y;
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, yy);
            ymax = std::max(ymax, yy);
        }
    if (!(xmin <= xmax) || !(ymin <= ymax))
        throw std::invalid_argument("write_svg_line_plot: no plottable points");
    if (xmax == xmin) { xmin -= 0.5; xmax += 0.5; }
    if (ymax == ymin) { ymin -= 0.5; ymax += 0.5; }
    if (log_y) {
        ymin = std::floor(ymin);
        ymax = std::ceil(ymax);
        if (ymax == ymin) ymax += 1.0;
    }

    auto X = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto Y = [&](double y) {
        const double yy = log_y ? std::log10(y) : y;
        return mt + ph - (yy - ymin) / (ymax - ymin) * ph;
    };

    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("write_svg_line_plot: cannot open " + path);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << " " << H << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << W / 2 << "\" y=\"28\" text-anchor=\"middle\" font-size=\"16\" "
          "font-family=\"sans-serif\">" << title << "</text>\n";

    // y ticks
    const int ny = log_y ? static_cast<int>(ymax - ymin) : 5;
    for (int k = 0; k <= ny; ++k) {
        const double yy = ymin + (ymax - ymin) * k / ny;
        const double py = mt + ph - (yy - ymin) / (ymax - ymin) * ph;
        os << "<line x1=\"" << ml << "\" y1=\"" << fmt(py) << "\" x2=\"" << ml + pw << "\" y2=\""
           << fmt(py) << "\" stroke=\"#dddddd\"/>\n"
           << "<text x=\"" << ml - 8 << "\" y=\"" << fmt(py + 4)
           << "\" text-anchor=\"end\" font-size=\"12\" font-family=\"sans-serif\">"
           << tick_label(yy, log_y) << "</text>\n";
    }
    // x ticks: one per distinct x of the first series
    std::vector<double> xticks;
    if (!series.empty())
        for (auto [x, y] : series[0].points) xticks.push_back(x);
    if (xticks.empty()) xticks = {xmin, xmax};
    for (double x : xticks) {
        os << "<line x1=\"" << fmt(X(x)) << "\" y1=\"" << mt + ph << "\" x2=\"" << fmt(X(x))
           << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"black\"/>\n"
           << "<text x=\"" << fmt(X(x)) << "\" y=\"" << mt + ph + 20
           << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">"
           << tick_label(x, false) << "</text>\n";
    }

    os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n"
       << "<text x=\"" << ml + pw / 2 << "\" y=\"" << H - 16
       << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" << xlabel
       << "</text>\n"
       << "<text x=\"20\" y=\"" << mt + ph / 2
       << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
          "transform=\"rotate(-90 20 " << mt + ph / 2 << ")\">" << ylabel << "</text>\n";

    for (const auto& s : series) {
        os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" points=\"";
        for (auto [x, y] : s.points) {
            if (log_y && !(y > 0.0))
                continue;
            os << fmt(X(x)) << "," << fmt(Y(y)) << " ";
        }
        os << "\"/>\n";
        for (auto [x, y] : s.points) {
            if (log_y && !(y > 0.0))
                continue;
            os << "<circle cx=\"" << fmt(X(x)) << "\" cy=\"" << fmt(Y(y)) << "\" r=\"3.5\" fill=\""
               << s.color << "\"/>\n";
        }
    }

    // legend
    double ly = mt + 14;
    for (const auto& s : series) {
        os << "<line x1=\"" << ml + pw - 150 << "\" y1=\"" << fmt(ly) << "\" x2=\"" << ml + pw - 120
           << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n"
           << "<text x=\"" << ml + pw - 112 << "\" y=\"" << fmt(ly + 4)
           << "\" font-size=\"12\" font-family=\"sans-serif\">" << s.name << "</text>\n";
        ly += 18;
    }
    os << "</svg>\n";
}

}  // namespace frozenrb
