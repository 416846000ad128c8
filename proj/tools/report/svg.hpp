#pragma once

#include <string>
#include <vector>

namespace rfs::report {

// Static line/heatmap renderer for figure data files. Deliberately small:
// a fixed plot box, linear axes with a handful of ticks, polylines and
// heatmap cells. Not an interactive plotting surface.
class SvgPlot {
public:
    SvgPlot(std::string title, std::string x_label, std::string y_label);

    void set_range(double x_lo, double x_hi, double y_lo, double y_hi);
    void add_line(const std::vector<double>& x, const std::vector<double>& y,
                  const std::string& color, const std::string& label = "");
    void add_heatmap(const std::vector<double>& x_axis, const std::vector<double>& y_axis,
                     const std::vector<double>& values /* row-major, x outer */);
    std::string render() const;

private:
    struct Line {
        std::vector<double> x, y;
        std::string color, label;
    };
    struct Heatmap {
        std::vector<double> x_axis, y_axis, values;
    };

    double map_x(double x) const;
    double map_y(double y) const;

    std::string title_, x_label_, y_label_;
    double x_lo_ = 0.0, x_hi_ = 1.0, y_lo_ = 0.0, y_hi_ = 1.0;
    bool range_set_ = false;
    std::vector<Line> lines_;
    std::vector<Heatmap> heatmaps_;

    static constexpr double kWidth = 640, kHeight = 480;
    static constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
};

}  // namespace rfs::report
