#include "hybridsom/plot.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "hybridsom/errors.hpp"
#include "hybridsom/geometry.hpp"

namespace hybridsom {

std::array<double, 2> Projection::operator()(std::span<const double> x) const {
    require_same_dimension(mean.size(), x.size());
    std::array<double, 2> out{0.0, 0.0};
    for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t i = 0; i < x.size(); ++i) out[a] += (x[i] - mean[i]) * axes[a][i];
    }
    return out;
}

Projection fit_pca(std::span<const std::vector<double>> rows) {
    if (rows.empty()) throw EmptyInput("PCA of an empty point set");
    const std::size_t n = rows.front().size();
    const std::size_t count = rows.size();
    if (n < 2) {
        throw Error("data has fewer than 2 dimensions; use --dims x,y to plot raw features");
    }
    Eigen::MatrixXd data(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < count; ++r) {
        require_same_dimension(n, rows[r].size());
        for (std::size_t i = 0; i < n; ++i) data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = rows[r][i];
    }
    const Eigen::VectorXd mean = data.colwise().mean();
    const Eigen::MatrixXd centered = data.rowwise() - mean.transpose();
    const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(count);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) throw Error("PCA eigendecomposition failed");

    // Eigenvalues come in ascending order.
    const Eigen::VectorXd& values = solver.eigenvalues();
    const double top = values(static_cast<Eigen::Index>(n - 1));
    const double second = values(static_cast<Eigen::Index>(n - 2));
    if (!(top > 1e-12) || !(second > 1e-12 * std::max(1.0, top))) {
        throw Error("data spans fewer than 2 effective dimensions; use --dims x,y to plot raw features");
    }

    Projection p;
    p.mean.assign(mean.data(), mean.data() + n);
    for (std::size_t a = 0; a < 2; ++a) {
        const Eigen::Index col = static_cast<Eigen::Index>(n - 1 - a);
        Eigen::VectorXd axis = solver.eigenvectors().col(col);
        Eigen::Index arg = 0;
        axis.cwiseAbs().maxCoeff(&arg);
        if (axis(arg) < 0.0) axis = -axis;
        p.axes[a].assign(axis.data(), axis.data() + n);
        p.variances[a] = values(col);
    }
    return p;
}

Projection coordinate_projection(std::size_t n, std::size_t first, std::size_t second) {
    if (first >= n || second >= n) throw std::out_of_range("plot dimension index out of range");
    Projection p;
    p.mean.assign(n, 0.0);
    p.axes[0].assign(n, 0.0);
    p.axes[1].assign(n, 0.0);
    p.axes[0][first] = 1.0;
    p.axes[1][second] = 1.0;
    return p;
}

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kLeft = 60.0;
constexpr double kRight = 180.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 60.0;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(ch);
        }
    }
    return out;
}

const char* color_of(int group) {
    if (group < 0) return "#7f7f7f";
    return kPalette[static_cast<std::size_t>(group) % kPalette.size()];
}

}  // namespace

std::string render_svg(const ScatterPlot& plot) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    const auto extend = [&](const ScatterPoint& p) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    };
    for (const auto& p : plot.points) extend(p);
    for (const auto& p : plot.prototypes) extend(p);
    if (!std::isfinite(xmin)) xmin = ymin = -1.0, xmax = ymax = 1.0;
    if (xmax - xmin < 1e-12) xmin -= 1.0, xmax += 1.0;
    if (ymax - ymin < 1e-12) ymin -= 1.0, ymax += 1.0;
    const double padx = 0.05 * (xmax - xmin), pady = 0.05 * (ymax - ymin);
    xmin -= padx, xmax += padx, ymin -= pady, ymax += pady;

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    const auto sx = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * plot_w; };
    const auto sy = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * plot_h; };

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"600\" "
           "viewBox=\"0 0 800 600\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"#ffffff\"/>\n";
    if (!plot.title.empty()) {
        out << "<text x=\"" << fmt(kLeft + plot_w / 2) << "\" y=\"30\" text-anchor=\"middle\" "
            << "font-family=\"sans-serif\" font-size=\"16\">" << escape(plot.title) << "</text>\n";
    }
    out << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\"" << fmt(plot_w)
        << "\" height=\"" << fmt(plot_h) << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n";

    for (int t = 0; t <= 4; ++t) {
        const double fx = xmin + (xmax - xmin) * t / 4.0;
        const double fy = ymin + (ymax - ymin) * t / 4.0;
        out << "<text x=\"" << fmt(sx(fx)) << "\" y=\"" << fmt(kTop + plot_h + 18)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(fx) << "</text>\n";
        out << "<text x=\"" << fmt(kLeft - 6) << "\" y=\"" << fmt(sy(fy) + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(fy) << "</text>\n";
    }
    out << "<text x=\"" << fmt(kLeft + plot_w / 2) << "\" y=\"" << fmt(kHeight - 15)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << escape(plot.x_label)
        << "</text>\n";
    out << "<text x=\"18\" y=\"" << fmt(kTop + plot_h / 2) << "\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 " << fmt(kTop + plot_h / 2)
        << ")\">" << escape(plot.y_label) << "</text>\n";

    out << "<g id=\"samples\">\n";
    for (const auto& p : plot.points) {
        out << "<circle cx=\"" << fmt(sx(p.x)) << "\" cy=\"" << fmt(sy(p.y)) << "\" r=\"3\" fill=\""
            << color_of(p.group) << "\" fill-opacity=\"0.75\"/>\n";
    }
    out << "</g>\n<g id=\"prototypes\">\n";
    for (const auto& p : plot.prototypes) {
        out << "<circle cx=\"" << fmt(sx(p.x)) << "\" cy=\"" << fmt(sy(p.y)) << "\" r=\"9\" fill=\""
            << color_of(p.group) << "\" stroke=\"#000000\" stroke-width=\"2.5\"/>\n";
    }
    out << "</g>\n<g id=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
    double ly = kTop + 10;
    const double lx = kWidth - kRight + 20;
    for (std::size_t g = 0; g < plot.groups.size(); ++g) {
        out << "<circle cx=\"" << fmt(lx) << "\" cy=\"" << fmt(ly) << "\" r=\"5\" fill=\""
            << color_of(static_cast<int>(g)) << "\"/>\n";
        out << "<text x=\"" << fmt(lx + 12) << "\" y=\"" << fmt(ly + 4) << "\">" << escape(plot.groups[g])
            << "</text>\n";
        ly += 20;
    }
    if (!plot.prototypes.empty()) {
        out << "<circle cx=\"" << fmt(lx) << "\" cy=\"" << fmt(ly) << "\" r=\"7\" fill=\"#ffffff\" "
            << "stroke=\"#000000\" stroke-width=\"2.5\"/>\n";
        out << "<text x=\"" << fmt(lx + 12) << "\" y=\"" << fmt(ly + 4) << "\">prototype</text>\n";
    }
    out << "</g>\n</svg>\n";
    return out.str();
}

}  // namespace hybridsom
