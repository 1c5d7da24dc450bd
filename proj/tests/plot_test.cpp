#include <gtest/gtest.h>

#include <cmath>
#include <regex>

#include "hybridsom/data.hpp"
#include "hybridsom/errors.hpp"
#include "hybridsom/plot.hpp"
#include "support.hpp"

namespace hybridsom {
namespace {

// Minimal well-formedness check: every opened element is closed in order.
bool balanced_xml(const std::string& doc) {
    std::vector<std::string> stack;
    std::size_t pos = 0;
    while ((pos = doc.find('<', pos)) != std::string::npos) {
        const std::size_t end = doc.find('>', pos);
        if (end == std::string::npos) return false;
        const std::string tag = doc.substr(pos + 1, end - pos - 1);
        pos = end + 1;
        if (tag.empty() || tag[0] == '?' || tag[0] == '!') continue;
        if (tag.back() == '/') continue;
        if (tag[0] == '/') {
            if (stack.empty() || stack.back() != tag.substr(1)) return false;
            stack.pop_back();
            continue;
        }
        stack.push_back(tag.substr(0, tag.find_first_of(" \t\n")));
    }
    return stack.empty();
}

std::size_t count(const std::string& s, const std::string& needle) {
    std::size_t n = 0;
    for (std::size_t p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
    return n;
}

TEST(Pca, RecoversDominantAxesWithSignConvention) {
    Rng rng(1);
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < 500; ++i) rows.push_back({-5.0 * rng.normal(), 2.0 * rng.normal(), 0.1 * rng.normal()});
    const Projection p = fit_pca(rows);
    EXPECT_NEAR(std::abs(p.axes[0][0]), 1.0, 1e-2);
    EXPECT_GT(p.axes[0][0], 0.0);
    EXPECT_NEAR(std::abs(p.axes[1][1]), 1.0, 1e-2);
    EXPECT_GT(p.axes[1][1], 0.0);
    EXPECT_GT(p.variances[0], p.variances[1]);
}

TEST(Pca, DegenerateDataSuggestsRawDims) {
    const std::vector<std::vector<double>> line{{1.0, 2.0}, {2.0, 4.0}, {3.0, 6.0}};
    try {
        fit_pca(line);
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("--dims"), std::string::npos);
    }
    EXPECT_THROW(fit_pca(std::vector<std::vector<double>>{{1.0}, {2.0}}), Error);
}

TEST(Pca, ZeroOverlapClustersStaySeparated) {
    SyntheticSpec spec;
    spec.overlap = 0.0;
    spec.per_class = 30;
    Dataset ds = gen_synthetic(spec);
    // Spread each cluster a little so within-class spread is non-zero.
    Rng rng(3);
    for (auto& row : ds.features) {
        for (auto& v : row) v += 0.01 * rng.normal();
    }
    const Projection p = fit_pca(ds.features);
    std::vector<std::array<double, 2>> xy;
    for (const auto& row : ds.features) xy.push_back(p(row));
    std::array<double, 2> m0{}, m1{};
    std::size_t n0 = 0, n1 = 0;
    for (std::size_t r = 0; r < xy.size(); ++r) {
        auto& m = *ds.truth[r] == 0 ? m0 : m1;
        (*ds.truth[r] == 0 ? n0 : n1) += 1;
        m[0] += xy[r][0];
        m[1] += xy[r][1];
    }
    for (auto& v : m0) v /= n0;
    for (auto& v : m1) v /= n1;
    const double between = std::hypot(m0[0] - m1[0], m0[1] - m1[1]);
    double within = 0.0;
    for (std::size_t r = 0; r < xy.size(); ++r) {
        const auto& m = *ds.truth[r] == 0 ? m0 : m1;
        within = std::max(within, std::hypot(xy[r][0] - m[0], xy[r][1] - m[1]));
    }
    EXPECT_GT(between, within);
}

TEST(Pca, CoordinateProjectionPicksColumns) {
    const Projection p = coordinate_projection(4, 2, 0);
    const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
    EXPECT_EQ(p(x)[0], 3.0);
    EXPECT_EQ(p(x)[1], 1.0);
}

ScatterPlot sample_plot() {
    ScatterPlot plot;
    plot.title = "A & B <test>";
    plot.groups = {"class 0", "class 1"};
    for (int i = 0; i < 10; ++i) plot.points.push_back({0.1 * i, i % 2 ? 1.0 : -1.0, i % 2});
    plot.points.push_back({0.5, 0.0, -1});
    plot.prototypes = {{0.4, -1.0, 0}, {0.5, 1.0, 1}};
    return plot;
}

TEST(RenderSvg, WellFormedWithGroupsAndPrototypes) {
    const std::string svg = render_svg(sample_plot());
    EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
    EXPECT_NE(svg.find("viewBox=\"0 0 800 600\""), std::string::npos);
    EXPECT_TRUE(balanced_xml(svg));
    EXPECT_NE(svg.find("&amp;"), std::string::npos);
    EXPECT_EQ(svg.find("<test>"), std::string::npos);
    EXPECT_NE(svg.find("id=\"prototypes\""), std::string::npos);
    const auto proto_start = svg.find("id=\"prototypes\"");
    const auto proto_end = svg.find("</g>", proto_start);
    EXPECT_EQ(count(svg.substr(proto_start, proto_end - proto_start), "<circle"), 2u);
    EXPECT_NE(svg.find(kPalette[0]), std::string::npos);
    EXPECT_NE(svg.find(kPalette[1]), std::string::npos);
}

TEST(RenderSvg, Deterministic) {
    EXPECT_EQ(render_svg(sample_plot()), render_svg(sample_plot()));
}

TEST(RenderSvg, EmptyPlotStillRenders) {
    ScatterPlot plot;
    EXPECT_TRUE(balanced_xml(render_svg(plot)));
}

}  // namespace
}  // namespace hybridsom
