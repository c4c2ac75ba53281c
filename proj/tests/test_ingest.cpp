#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "icdkm/ingest.hpp"

using namespace icdkm;

namespace {

Dataset parse(const std::string& text, const CsvSchema& schema = {}) {
    std::istringstream in(text);
    return parse_csv(in, schema, "test.csv");
}

bool has_warning_containing(const ValidationReport& r, const std::string& needle) {
    for (const auto& w : r.warnings) {
        if (w.find(needle) != std::string::npos) return true;
    }
    return false;
}

}  // namespace

TEST(ParseCsv, ThreeRowsNoLabels) {
    const auto data = parse("1,2,3\n4,5,6\n7,8,9\n");
    EXPECT_EQ(data.size(), 3u);
    EXPECT_EQ(data.dims(), 3u);
    EXPECT_FALSE(data.has_labels());
    EXPECT_EQ(data.features(2, 1), 8.0);
}

TEST(ParseCsv, MissingTokenDropsRow) {
    CsvSchema schema;
    schema.label_column = ColumnRef{std::size_t{2}};
    const auto data = parse("1,2,a\n3,?,b\n5,6,a\n", schema);
    EXPECT_EQ(data.size(), 2u);
    EXPECT_EQ(data.features(1, 0), 5.0);
    EXPECT_EQ(*data.labels, (std::vector<std::size_t>{0, 0}));
}

TEST(ParseCsv, HeaderAndNamedLabel) {
    CsvSchema schema;
    schema.label_column = ColumnRef{std::string("label")};
    const auto data = parse("x0,x1,label\n0.5,1.5,cat\n2,3,dog\n4,5,cat\n", schema);
    EXPECT_EQ(data.feature_names, (std::vector<std::string>{"x0", "x1"}));
    EXPECT_EQ(data.class_names, (std::vector<std::string>{"cat", "dog"}));
    EXPECT_EQ(*data.labels, (std::vector<std::size_t>{0, 1, 0}));
}

TEST(ParseCsv, LabelFactorizationRoundTrip) {
    CsvSchema schema;
    schema.label_column = ColumnRef{std::size_t{0}};
    const std::vector<std::string> raw{"z", "a", "z", "m", "a"};
    std::string text;
    for (std::size_t i = 0; i < raw.size(); ++i) text += raw[i] + "," + std::to_string(i) + "\n";
    const auto data = parse(text, schema);
    EXPECT_EQ(data.class_names, (std::vector<std::string>{"z", "a", "m"}));
    for (std::size_t i = 0; i < raw.size(); ++i) EXPECT_EQ(data.class_names[(*data.labels)[i]], raw[i]);
}

TEST(ParseCsv, ErrorPositions) {
    try {
        parse("1,2\n3,x\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.row(), 2u);
        EXPECT_EQ(e.column(), 2u);
    }
    try {
        parse("1,2\n3\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.row(), 2u);
    }
    EXPECT_THROW(parse(""), ParseError);
    EXPECT_THROW(parse("\n\n"), ParseError);
}

TEST(ParseCsv, IdColumnsDiscarded) {
    CsvSchema schema;
    schema.id_columns = {0};
    schema.label_column = ColumnRef{std::size_t{3}};
    const auto data = parse("1001,1,2,2\n1002,3,4,4\n", schema);
    EXPECT_EQ(data.dims(), 2u);
    EXPECT_EQ(data.features(1, 0), 3.0);
}

TEST(LoadCsv, MissingFile) {
    EXPECT_THROW(load_csv("/nonexistent/path.csv", CsvSchema{}), std::runtime_error);
}

TEST(Builtin, Iris) {
    const auto iris = load_builtin(BuiltinDataset::Iris);
    EXPECT_EQ(iris.size(), 150u);
    EXPECT_EQ(iris.dims(), 4u);
    EXPECT_EQ(iris.class_sizes(), (std::vector<std::size_t>{50, 50, 50}));
    EXPECT_EQ(iris.features(0, 0), 5.1);
    const auto report = validate_expected(iris, BuiltinDataset::Iris);
    EXPECT_TRUE(report.ok());
    EXPECT_FALSE(report.checks.empty());
}

TEST(Builtin, WineShapeAndClassSizes) {
    const auto wine = load_builtin(BuiltinDataset::Wine);
    EXPECT_EQ(wine.size(), 178u);
    EXPECT_EQ(wine.dims(), 13u);
    EXPECT_EQ(wine.num_classes(), 3u);
    // The distributed file has 71 samples in the second class.
    EXPECT_EQ(wine.class_sizes(), (std::vector<std::size_t>{59, 71, 48}));
    const auto report = validate_expected(wine, BuiltinDataset::Wine);
    EXPECT_FALSE(report.ok());
    EXPECT_EQ(report.warnings.size(), 1u);
    EXPECT_TRUE(has_warning_containing(report, "size: 71 (expected 78)"));
}

TEST(Builtin, BreastCancerDropsMissingRows) {
    const auto bc = load_builtin(BuiltinDataset::BreastCancer);
    EXPECT_EQ(bc.size(), 683u);
    EXPECT_EQ(bc.dims(), 9u);
    EXPECT_EQ(bc.num_classes(), 2u);
    EXPECT_EQ(bc.class_sizes(), (std::vector<std::size_t>{444, 239}));
    const auto report = validate_expected(bc, BuiltinDataset::BreastCancer);
    EXPECT_TRUE(has_warning_containing(report, "rows: 683 (expected 569)"));
}

TEST(Builtin, Names) {
    for (auto which : {BuiltinDataset::Iris, BuiltinDataset::Wine, BuiltinDataset::BreastCancer}) {
        EXPECT_EQ(builtin_from_name(to_string(which)), which);
    }
    EXPECT_FALSE(builtin_from_name("mnist").has_value());
}

TEST(MinMaxNormalize, Examples) {
    Dataset d;
    d.features = Matrix{{0.0, 0.0, 3.0}, {5.0, 0.5, 3.0}, {10.0, 1.0, 3.0}};
    const auto n = min_max_normalize(d);
    EXPECT_EQ(n.features(0, 0), 0.0);
    EXPECT_EQ(n.features(1, 0), 0.5);
    EXPECT_EQ(n.features(2, 0), 1.0);
    EXPECT_EQ(n.features(1, 1), 0.5);
    EXPECT_EQ(n.features(1, 2), 0.0);
    EXPECT_EQ(min_max_normalize(n).features, n.features);
}

TEST(MinMaxNormalize, WineColumnsSpanUnitInterval) {
    const auto wine = min_max_normalize(load_builtin(BuiltinDataset::Wine));
    for (std::size_t c = 0; c < wine.dims(); ++c) {
        double lo = wine.features(0, c), hi = wine.features(0, c);
        for (std::size_t i = 0; i < wine.size(); ++i) {
            lo = std::min(lo, wine.features(i, c));
            hi = std::max(hi, wine.features(i, c));
        }
        EXPECT_EQ(lo, 0.0);
        EXPECT_EQ(hi, 1.0);
    }
    EXPECT_EQ(wine.labels, load_builtin(BuiltinDataset::Wine).labels);
}

TEST(ParseCsv, DeterministicAndOrderPreserving) {
    const std::string text = "3,1\n?,2\n1,3\n2,4\n";
    const auto a = parse(text), b = parse(text);
    EXPECT_EQ(a.features, b.features);
    EXPECT_EQ(a.features, (Matrix{{3.0, 1.0}, {1.0, 3.0}, {2.0, 4.0}}));
}
