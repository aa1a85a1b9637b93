#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "ivlab/error.hpp"
#include "ivlab/feature_factory.hpp"
#include "ivlab/log.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace ivlab;

namespace {

std::size_t count_for(const SourceMask& mask) {
    std::size_t n = 0;
    for (const auto& name : original_series_names()) n += mask.contains(source_of_series(name));
    for (const auto& spec : generated_feature_specs()) n += mask.contains(spec.source());
    return n;
}

}  // namespace

TEST(FeatureSpecs, SeventyGeneratedFeatures) {
    const auto specs = generated_feature_specs();
    ASSERT_EQ(specs.size(), 70u);
    std::set<std::string> names;
    std::size_t group1 = 0, rsi = 0, range = 0;
    for (const auto& s : specs) {
        names.insert(s.column_name());
        if (s.technique == Technique::rsi || s.technique == Technique::rsi_move) {
            ++rsi;
        } else if (s.technique == Technique::williams_r || s.technique == Technique::stochastic_k) {
            ++range;
        } else {
            ++group1;
        }
    }
    EXPECT_EQ(names.size(), 70u);
    EXPECT_EQ(group1, 60u);
    EXPECT_EQ(rsi, 8u);
    EXPECT_EQ(range, 2u);
    EXPECT_EQ(specs.front().column_name(), "MA_3_ivol");
    EXPECT_EQ(specs.back().column_name(), "StochasticK_14_close");
}

TEST(FeatureSpecs, WarmupIsFifteenRows) { EXPECT_EQ(warmup_rows(), 15); }

TEST(FeatureSpecs, ScenarioColumnCounts) {
    EXPECT_EQ(count_for(SourceMask::all()), 78u);
    EXPECT_EQ(count_for({Source::market, Source::option}), 32u);
    EXPECT_EQ(count_for({Source::news, Source::wikipedia}), 46u);
    EXPECT_EQ(count_for({Source::market, Source::option, Source::wikipedia}), 55u);
    EXPECT_EQ(count_for({Source::market, Source::option, Source::news}), 55u);
}

TEST(FeatureSpecs, SourceTags) {
    EXPECT_EQ(source_of_column("close"), Source::market);
    EXPECT_EQ(source_of_column("ivol"), Source::option);
    EXPECT_EQ(source_of_column("RSI_Move_14_news"), Source::news);
    EXPECT_EQ(source_of_column("MA_10_wiki"), Source::wikipedia);
    EXPECT_EQ(source_of_column("WilliamsR_14_close"), Source::market);
}

TEST(SourceMaskParse, NamesAndErrors) {
    EXPECT_EQ(SourceMask::parse("market,option,news,wikipedia"), SourceMask::all());
    EXPECT_EQ(SourceMask::parse("news"), SourceMask({Source::news}));
    EXPECT_EQ(SourceMask::all().to_string(), "market,option,news,wikipedia");
    EXPECT_THROW(SourceMask::parse("twitter"), Error);
}

TEST(Target, NextDayIvolUp) {
    const std::vector<double> ivol{20, 21, 21, 19, 25};
    EXPECT_EQ(make_target(ivol), (std::vector<int>{1, 0, 0, 1}));
}

class FeatureMatrixTest : public ::testing::Test {
protected:
    void SetUp() override {
        series = synth::panel_originals(synth::synthetic_panel(120, 17, false));
        matrix = build_feature_matrix(series);
    }
    OriginalSeries series;
    FeatureMatrix matrix;
};

TEST_F(FeatureMatrixTest, ShapeAndOrder) {
    EXPECT_EQ(matrix.cols(), 78u);
    EXPECT_EQ(matrix.rows(), 120u - 15u - 1u);
    EXPECT_EQ(matrix.dates.front(), series.dates[15]);
    EXPECT_EQ(matrix.dates.back(), series.dates[118]);
    EXPECT_EQ(matrix.columns[0].name, "open");
    EXPECT_EQ(matrix.columns[7].name, "wiki");
    EXPECT_EQ(matrix.columns[8].name, "MA_3_ivol");
}

TEST_F(FeatureMatrixTest, TargetAlignedWithNextDay) {
    for (std::size_t r = 0; r < matrix.rows(); ++r) {
        const std::size_t t = r + 15;
        EXPECT_EQ(matrix.target[r], series.ivol[t + 1] > series.ivol[t] ? 1 : 0);
    }
}

TEST_F(FeatureMatrixTest, ColumnsMatchOracles) {
    for (const auto& col : matrix.columns) {
        if (col.name == "RSI_14_close") {
            const auto o = oracle::rsi(series.close, 14);
            for (std::size_t r = 0; r < matrix.rows(); ++r) EXPECT_NEAR(col.values[r], o[r + 15], 1e-9);
        }
        if (col.name == "EMA_10_news") {
            const auto o = oracle::ema(series.news, 10);
            for (std::size_t r = 0; r < matrix.rows(); ++r) EXPECT_NEAR(col.values[r], o[r + 15], 1e-9);
        }
    }
}

TEST_F(FeatureMatrixTest, MaskedCountsAndSources) {
    const auto m = build_feature_matrix(series, {Source::news, Source::wikipedia});
    EXPECT_EQ(m.cols(), 46u);
    for (const auto& c : m.columns) EXPECT_TRUE(c.source == Source::news || c.source == Source::wikipedia) << c.name;
    EXPECT_EQ(matrix.masked({Source::market, Source::option}).cols(), 32u);
}

TEST_F(FeatureMatrixTest, FutureValuesDoNotLeakIntoEarlierRows) {
    auto changed = series;
    for (std::size_t t = 80; t < changed.size(); ++t) {
        changed.close[t] *= 1.3;
        changed.high[t] *= 1.3;
        changed.low[t] *= 1.3;
        changed.open[t] *= 1.3;
        changed.news[t] += 50;
    }
    const auto m2 = build_feature_matrix(changed);
    for (std::size_t j = 0; j < matrix.cols(); ++j) {
        for (std::size_t r = 0; r + 15 < 80; ++r) EXPECT_EQ(matrix.columns[j].values[r], m2.columns[j].values[r]);
    }
}

TEST_F(FeatureMatrixTest, CsvRoundTripIsExact) {
    const auto text = format_features(matrix);
    const auto back = parse_features(text, "features.csv");
    ASSERT_EQ(back.cols(), matrix.cols());
    ASSERT_EQ(back.rows(), matrix.rows());
    EXPECT_EQ(back.dates, matrix.dates);
    EXPECT_EQ(back.target, matrix.target);
    for (std::size_t j = 0; j < matrix.cols(); ++j) {
        EXPECT_EQ(back.columns[j].name, matrix.columns[j].name);
        EXPECT_EQ(back.columns[j].values, matrix.columns[j].values);
        EXPECT_EQ(back.columns[j].source, matrix.columns[j].source);
    }
}

TEST_F(FeatureMatrixTest, TooFewDaysIsComputationError) {
    auto shortened = series;
    for (auto* v : {&shortened.open, &shortened.high, &shortened.low, &shortened.close, &shortened.volume,
                    &shortened.ivol, &shortened.news, &shortened.wiki}) {
        v->resize(16);
    }
    shortened.dates.resize(16);
    try {
        build_feature_matrix(shortened);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::computation);
    }
}

TEST_F(FeatureMatrixTest, UndefinedIndicatorRowsAreExcluded) {
    auto zeroed = series;
    zeroed.news[40] = 0.0;  // ROC_5_news undefined at t = 45, ROC_Move_5_news at 45 and 46
    const auto prev = log::set_sink([](const std::string&) {});
    const auto m = build_feature_matrix(zeroed);
    log::set_sink(prev);
    EXPECT_EQ(m.rows(), matrix.rows() - 2);
    EXPECT_EQ(std::count(m.dates.begin(), m.dates.end(), series.dates[45]), 0);
    EXPECT_EQ(std::count(m.dates.begin(), m.dates.end(), series.dates[46]), 0);
}

TEST(FeatureCsv, SchemaErrors) {
    EXPECT_THROW(parse_features("date,close\n2016-01-04,1\n", "f"), Error);
    EXPECT_THROW(parse_features("date,close,target\n2016-01-04,1,2\n", "f"), Error);
    EXPECT_THROW(parse_features("date,bogus,target\n2016-01-04,1,1\n", "f"), Error);
}
