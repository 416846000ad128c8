#include "report/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace rfs::report {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

SvgPlot::SvgPlot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void SvgPlot::set_range(double x_lo, double x_hi, double y_lo, double y_hi) {
    x_lo_ = x_lo;
    x_hi_ = x_hi;
    y_lo_ = y_lo;
    y_hi_ = y_hi;
    range_set_ = true;
}

void SvgPlot::add_line(const std::vector<double>& x, const std::vector<double>& y,
                       const std::string& color, const std::string& label) {
    lines_.push_back({x, y, color, label});
    if (!range_set_ && !x.empty()) {
        const auto [xmin, xmax] = std::minmax_element(x.begin(), x.end());
        const auto [ymin, ymax] = std::minmax_element(y.begin(), y.end());
        if (lines_.size() == 1) {
            x_lo_ = *xmin;
            x_hi_ = *xmax;
            y_lo_ = *ymin;
            y_hi_ = *ymax;
        } else {
            x_lo_ = std::min(x_lo_, *xmin);
            x_hi_ = std::max(x_hi_, *xmax);
            y_lo_ = std::min(y_lo_, *ymin);
            y_hi_ = std::max(y_hi_, *ymax);
        }
    }
}

void SvgPlot::add_heatmap(const std::vector<double>& x_axis, const std::vector<double>& y_axis,
                          const std::vector<double>& values) {
    heatmaps_.push_back({x_axis, y_axis, values});
    if (!range_set_) {
        x_lo_ = x_axis.front();
        x_hi_ = x_axis.back();
        y_lo_ = y_axis.front();
        y_hi_ = y_axis.back();
        range_set_ = true;
    }
}

double SvgPlot::map_x(double x) const {
    return kLeft + (x - x_lo_) / (x_hi_ - x_lo_) * (kWidth - kLeft - kRight);
}

double SvgPlot::map_y(double y) const {
    return kHeight - kBottom - (y - y_lo_) / (y_hi_ - y_lo_) * (kHeight - kTop - kBottom);
}

std::string SvgPlot::render() const {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
       << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
       << title_ << "</text>\n";

    for (const auto& hm : heatmaps_) {
        double peak = 0.0;
        for (double v : hm.values) peak = std::max(peak, std::abs(v));
        if (peak == 0.0) peak = 1.0;
        const std::size_t nx = hm.x_axis.size(), ny = hm.y_axis.size();
        const double cw = (map_x(hm.x_axis[1]) - map_x(hm.x_axis[0]));
        const double ch = (map_y(hm.y_axis[0]) - map_y(hm.y_axis[1]));
        for (std::size_t i = 0; i < nx; ++i) {
            for (std::size_t j = 0; j < ny; ++j) {
                const double v = hm.values[i * ny + j] / peak;
                // blue (negative) .. white (0) .. red (positive)
                const int r = static_cast<int>(255 * std::min(1.0, 1.0 + std::min(v, 0.0)));
                const int b = static_cast<int>(255 * std::min(1.0, 1.0 - std::max(v, 0.0)));
                const int g = static_cast<int>(255 * (1.0 - std::abs(v)));
                if (std::abs(v) < 1e-3) continue;  // keep files small
                os << "<rect x=\"" << num(map_x(hm.x_axis[i]) - cw / 2) << "\" y=\""
                   << num(map_y(hm.y_axis[j]) - ch / 2) << "\" width=\"" << num(cw)
                   << "\" height=\"" << num(ch) << "\" fill=\"rgb(" << r << ',' << g << ','
                   << b << ")\"/>\n";
            }
        }
    }

    // plot box and ticks
    os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\""
       << kWidth - kLeft - kRight << "\" height=\"" << kHeight - kTop - kBottom
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double fx = x_lo_ + (x_hi_ - x_lo_) * t / 4.0;
        const double fy = y_lo_ + (y_hi_ - y_lo_) * t / 4.0;
        os << "<text x=\"" << num(map_x(fx)) << "\" y=\"" << kHeight - kBottom + 18
           << "\" text-anchor=\"middle\" font-size=\"11\">" << num(fx) << "</text>\n";
        os << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(map_y(fy) + 4)
           << "\" text-anchor=\"end\" font-size=\"11\">" << num(fy) << "</text>\n";
    }
    os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
       << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label_ << "</text>\n";
    os << "<text x=\"16\" y=\"" << kHeight / 2
       << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
       << kHeight / 2 << ")\">" << y_label_ << "</text>\n";

    double legend_y = kTop + 16;
    for (const auto& line : lines_) {
        os << "<polyline fill=\"none\" stroke=\"" << line.color
           << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < line.x.size(); ++k) {
            const double px = map_x(line.x[k]);
            const double py = map_y(std::clamp(line.y[k], y_lo_, y_hi_));
            os << num(px) << ',' << num(py) << ' ';
        }
        os << "\"/>\n";
        if (!line.label.empty()) {
            os << "<text x=\"" << kWidth - kRight - 8 << "\" y=\"" << legend_y
               << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << line.color << "\">"
               << line.label << "</text>\n";
            legend_y += 14;
        }
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace rfs::report
