#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace hybridsom {

// Top-two principal axes of a point cloud.
struct Projection {
    std::vector<double> mean;
    std::array<std::vector<double>, 2> axes;
    std::array<double, 2> variances{};

    std::array<double, 2> operator()(std::span<const double> x) const;
};

// PCA via the covariance eigendecomposition. Each axis is sign-fixed so its
// largest-magnitude loading is positive. Throws Error when the data spans
// fewer than two effective dimensions.
Projection fit_pca(std::span<const std::vector<double>> rows);

// Projection onto two raw feature coordinates.
Projection coordinate_projection(std::size_t n, std::size_t first, std::size_t second);

struct ScatterPoint {
    double x = 0.0;
    double y = 0.0;
    // Index into ScatterPlot::groups; -1 for unassigned points.
    int group = -1;
};

struct ScatterPlot {
    std::string title;
    std::string x_label = "PC1";
    std::string y_label = "PC2";
    std::vector<std::string> groups;
    std::vector<ScatterPoint> points;
    std::vector<ScatterPoint> prototypes;
};

inline constexpr std::array<const char*, 8> kPalette = {
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
};

// SVG 1.1 document on a fixed 800x600 viewBox with a legend block. Output is
// a pure function of the plot contents.
std::string render_svg(const ScatterPlot& plot);

}  // namespace hybridsom
