#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "hybridsom/data.hpp"
#include "hybridsom/errors.hpp"
#include "support.hpp"

namespace hybridsom {
namespace {

Dataset parse(const std::string& text, const CsvSchema& schema = {}) {
    std::istringstream in(text);
    return parse_csv(in, schema);
}

TEST(ParseCsv, FortyByTwelveWithLabels) {
    std::ostringstream text;
    for (int c = 1; c <= 12; ++c) text << "p" << c << ',';
    text << "label\n";
    for (int r = 0; r < 40; ++r) {
        for (int c = 1; c <= 12; ++c) text << (r * 0.5 + c) << ',';
        text << (r % 3 == 0 ? std::string() : std::to_string(r % 2)) << '\n';
    }
    const Dataset ds = parse(text.str());
    EXPECT_EQ(ds.rows(), 40u);
    EXPECT_EQ(ds.dim(), 12u);
    EXPECT_EQ(ds.feature_names.front(), "p1");
    EXPECT_EQ(ds.labeled_count(), 26u);
    EXPECT_NEAR(ds.label_coverage(), 26.0 / 40.0, 1e-15);
    EXPECT_FALSE(ds.has_truth());
    EXPECT_EQ(ds.features[3][0], 2.5);
}

TEST(ParseCsv, SingleRowWithoutLabels) {
    const Dataset ds = parse("a,b\n1,2\n");
    EXPECT_EQ(ds.rows(), 1u);
    EXPECT_FALSE(ds.labels[0].has_value());
    EXPECT_EQ(ds.label_coverage(), 0.0);
}

TEST(ParseCsv, NonNumericCellIsLocated) {
    try {
        parse("a,b\n1,2\n3,abc\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("abc"), std::string::npos);
        EXPECT_NE(msg.find('b'), std::string::npos);
        EXPECT_EQ(e.row(), 2u);
        EXPECT_EQ(e.column(), 2u);
    }
}

TEST(ParseCsv, RejectsNonFiniteRaggedAndBadLabels) {
    EXPECT_THROW(parse("a,b\n1,nan\n"), ParseError);
    EXPECT_THROW(parse("a,b\n1,inf\n"), ParseError);
    EXPECT_THROW(parse("a,b\n1\n"), ParseError);
    EXPECT_THROW(parse("a,label\n1,x\n"), ParseError);
    EXPECT_THROW(parse("a,label\n1,1.5\n"), ParseError);
    EXPECT_THROW(parse(""), ParseError);
    EXPECT_THROW(parse("a,b\n"), ParseError);
}

TEST(ParseCsv, QuotesBomAndTruth) {
    const Dataset ds = parse("\xEF\xBB\xBF\"x 1\",y,label,truth\n 1.5 ,\"2\",,1\n3,4,0,0\n");
    EXPECT_EQ(ds.feature_names, (std::vector<std::string>{"x 1", "y"}));
    EXPECT_EQ(ds.features[0][0], 1.5);
    EXPECT_TRUE(ds.has_truth());
    EXPECT_EQ(ds.truth[0], 1);
    EXPECT_FALSE(ds.labels[0].has_value());
    EXPECT_EQ(ds.scoring_labels()[1], 0);
}

TEST(ParseCsv, RequiredColumns) {
    CsvSchema schema;
    schema.label_required = true;
    EXPECT_THROW(parse("a,b\n1,2\n", schema), ParseError);
    schema.label_column = "cls";
    EXPECT_EQ(parse("a,cls\n1,2\n", schema).labels[0], 2);
}

TEST(WriteCsv, RoundTripsExactly) {
    SyntheticSpec spec;
    spec.per_class = 10;
    spec.label_fraction = 0.5;
    const Dataset ds = gen_synthetic(spec);
    std::stringstream buf;
    write_csv(buf, ds);
    const Dataset back = parse_csv(buf);
    EXPECT_EQ(back.features, ds.features);
    EXPECT_EQ(back.labels, ds.labels);
    EXPECT_EQ(back.truth, ds.truth);
    EXPECT_EQ(back.feature_names, ds.feature_names);
}

TEST(LoadCsv, MissingFileAndStrictLabelColumn) {
    EXPECT_ANY_THROW(load_csv("/nonexistent/file.csv"));
    const auto dir = testing::scratch_dir("load_csv");
    const std::string path = (dir / "d.csv").string();
    std::ofstream(path) << "a,b,label\n1,2,0\n";
    EXPECT_EQ(load_csv(path, std::optional<std::string>{"label"}).labels[0], 0);
    EXPECT_THROW(load_csv(path, std::optional<std::string>{"cls"}), ParseError);
    EXPECT_FALSE(load_csv(path, std::nullopt).labels[0].has_value());
}

TEST(Preprocess, IdentityStatsProjectOntoSphere) {
    Dataset ds;
    ds.features = {{3.0, 4.0}};
    ds.labels = {std::nullopt};
    ds.feature_names = {"a", "b"};
    const Standardization stats = Standardization::identity(2);
    const Preprocessed p = preprocess(ds, &stats, true);
    EXPECT_DOUBLE_EQ(p.samples[0][0], 0.6);
    EXPECT_DOUBLE_EQ(p.samples[0][1], 0.8);
}

TEST(Preprocess, StatsAreReusableAndConstantFeaturesFlagged) {
    Dataset ds;
    ds.features = {{1.0, 5.0, 2.0}, {3.0, 5.0, 1.0}, {5.0, 5.0, 0.0}};
    ds.labels.assign(3, std::nullopt);
    ds.feature_names = {"a", "b", "c"};
    const Preprocessed p = preprocess(ds);
    EXPECT_DOUBLE_EQ(p.stats.mean[0], 3.0);
    EXPECT_DOUBLE_EQ(p.stats.stddev[0], std::sqrt(8.0 / 3.0));
    EXPECT_EQ(p.stats.stddev[1], 1.0);
    EXPECT_FALSE(p.warnings.empty());
    for (const auto& s : p.samples) EXPECT_NEAR(testing::reference_norm(s.components()), 1.0, 1e-9);

    Dataset check = ds;
    check.features = {{2.0, 5.0, 2.0}};
    check.labels = {std::nullopt};
    const Preprocessed a = preprocess(check, &p.stats);
    const Preprocessed b = preprocess(check, &p.stats);
    EXPECT_EQ(a.samples, b.samples);
    EXPECT_EQ(a.stats, p.stats);

    std::stringstream buf;
    write_standardization(buf, p.stats);
    EXPECT_EQ(read_standardization(buf), p.stats);
}

TEST(Preprocess, MeanRowGetsJitter) {
    Dataset ds;
    ds.features = {{1.0, 2.0}, {3.0, 4.0}, {2.0, 3.0}};
    ds.labels.assign(3, std::nullopt);
    ds.feature_names = {"a", "b"};
    const Preprocessed p = preprocess(ds);
    EXPECT_EQ(p.samples[2][0], 1.0);
    EXPECT_EQ(p.samples[2][1], 0.0);
    EXPECT_FALSE(p.warnings.empty());
}

Dataset labeled_rows(std::size_t n_a, std::size_t n_b, std::size_t unlabeled) {
    Dataset ds;
    ds.feature_names = {"f"};
    const auto add = [&](std::optional<ClassId> l, std::size_t count) {
        for (std::size_t i = 0; i < count; ++i) {
            ds.features.push_back({static_cast<double>(ds.features.size())});
            ds.labels.push_back(l);
        }
    };
    add(0, n_a);
    add(1, n_b);
    add(std::nullopt, unlabeled);
    return ds;
}

TEST(Split, FortyRowsQuarterCheck) {
    const Split s = split(labeled_rows(20, 20, 0), 0.25, 1);
    EXPECT_EQ(s.train.rows(), 30u);
    EXPECT_EQ(s.check.rows(), 10u);
    const Split t = split(labeled_rows(20, 20, 0), 0.25, 1);
    EXPECT_EQ(s.check_rows, t.check_rows);
    EXPECT_THROW(split(labeled_rows(2, 2, 0), 0.0, 1), std::invalid_argument);
    EXPECT_THROW(split(labeled_rows(2, 2, 0), 1.0, 1), std::invalid_argument);
}

TEST(Split, PartitionAndStratificationOverSeeds) {
    const Dataset ds = labeled_rows(37, 23, 17);
    std::map<std::optional<ClassId>, std::size_t> total;
    for (const auto& l : ds.labels) ++total[l];
    const double frac = 0.3;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const Split s = split(ds, frac, seed);
        std::set<std::size_t> all(s.train_rows.begin(), s.train_rows.end());
        for (std::size_t r : s.check_rows) EXPECT_TRUE(all.insert(r).second);
        EXPECT_EQ(all.size(), ds.rows());
        EXPECT_EQ(s.check.rows(), static_cast<std::size_t>(std::lround(ds.rows() * frac)));
        std::map<std::optional<ClassId>, std::size_t> in_check;
        for (const auto& l : s.check.labels) ++in_check[l];
        for (const auto& [l, n] : total) {
            EXPECT_LE(std::abs(static_cast<double>(in_check[l]) - n * frac), 1.0);
        }
        EXPECT_TRUE(s.warnings.empty());
    }
}

TEST(Split, TinyClassFallsBackWithWarning) {
    const Split s = split(labeled_rows(1, 9, 0), 0.3, 4);
    EXPECT_FALSE(s.warnings.empty());
    EXPECT_EQ(s.train.rows() + s.check.rows(), 10u);
}

TEST(GenSynthetic, ZeroOverlapSamplesSitOnCenters) {
    SyntheticSpec spec;
    spec.classes = 3;
    spec.per_class = 20;
    spec.dim = 5;
    spec.overlap = 0.0;
    const Dataset ds = gen_synthetic(spec);
    std::map<ClassId, std::vector<double>> center;
    for (std::size_t r = 0; r < ds.rows(); ++r) {
        const ClassId c = *ds.truth[r];
        if (!center.count(c)) center[c] = ds.features[r];
        EXPECT_EQ(ds.features[r], center[c]);
    }
    ASSERT_EQ(center.size(), 3u);
    for (const auto& [a, ca] : center) {
        for (const auto& [b, cb] : center) {
            if (a < b) EXPECT_LE(testing::reference_dot(ca, cb), std::cos(kCenterSpacingDegrees * M_PI / 180.0) + 1e-9);
        }
    }
}

TEST(GenSynthetic, LabelFractionAndDeterminism) {
    SyntheticSpec spec;
    spec.per_class = 25;
    spec.label_fraction = 0.0;
    EXPECT_EQ(gen_synthetic(spec).labeled_count(), 0u);
    spec.label_fraction = 0.6;
    const Dataset a = gen_synthetic(spec);
    EXPECT_EQ(a.labeled_count(), 30u);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        if (a.labels[r]) EXPECT_EQ(a.labels[r], a.truth[r]);
    }
    EXPECT_EQ(gen_synthetic(spec).features, a.features);
    spec.seed = 2;
    EXPECT_NE(gen_synthetic(spec).features, a.features);
}

TEST(GenSynthetic, InfeasibleSpacing) {
    SyntheticSpec spec;
    spec.classes = 5;
    spec.dim = 1;
    EXPECT_THROW(gen_synthetic(spec), SpacingInfeasible);
}

// Oracle: classify each sample by the nearest true class center.
TEST(GenSynthetic, LowOverlapIsNearestCenterSeparable) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        SyntheticSpec spec;
        spec.overlap = 0.1;
        spec.seed = seed;
        const Dataset ds = gen_synthetic(spec);
        std::map<ClassId, std::vector<double>> mean;
        for (std::size_t r = 0; r < ds.rows(); ++r) {
            auto& m = mean[*ds.truth[r]];
            m.resize(ds.dim(), 0.0);
            for (std::size_t d = 0; d < ds.dim(); ++d) m[d] += ds.features[r][d];
        }
        std::size_t errors = 0;
        for (std::size_t r = 0; r < ds.rows(); ++r) {
            ClassId best = -1;
            double best_cos = -2.0;
            for (const auto& [c, m] : mean) {
                const double cos = testing::reference_dot(m, ds.features[r]) / testing::reference_norm(m);
                if (cos > best_cos) {
                    best_cos = cos;
                    best = c;
                }
            }
            errors += best != *ds.truth[r];
        }
        EXPECT_EQ(errors, 0u) << "seed " << seed;
    }
}

}  // namespace
}  // namespace hybridsom
