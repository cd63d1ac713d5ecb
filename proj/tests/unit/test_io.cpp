#include "zonosvm/io.hpp"

#include "doctest.h"

#include <sstream>
#include <string>

using namespace zonosvm;

namespace {

LabeledDataset from_string(const std::string& text, DatasetFormat format) {
    std::istringstream in(text);
    return parse_dataset(in, format);
}

std::string to_string(const LabeledDataset& ds, DatasetFormat format) {
    std::ostringstream out;
    write_dataset(out, ds, format);
    return out.str();
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("csv parsing handles labels, comments, blanks and CR") {
    LabeledDataset ds = from_string("# header comment\n+1,2,0\n\n1,3,1\r\n-1,0,0\n-1,-1,1\n",
                                    DatasetFormat::csv);
    CHECK(ds.size() == 4);
    CHECK(ds.dim() == 2);
    CHECK(ds.label(0) == 1);
    CHECK(ds.label(1) == 1);  // bare "1" is a positive label
    CHECK(ds.label(2) == -1);
    CHECK(ds.point(3)[0] == -1.0);
    CHECK(ds.point(1)[1] == 1.0);
}

TEST_CASE("csv parse errors carry the 1-based line number") {
    CHECK_THROWS_WITH_AS(from_string("+1,1\n-1,oops\n", DatasetFormat::csv),
                         doctest::Contains("line 2"), ParseError);
    CHECK_THROWS_WITH_AS(from_string("# c\n+1,1\n-1\n", DatasetFormat::csv),
                         doctest::Contains("line 3"), ParseError);
    CHECK_THROWS_AS(from_string("+1,1,2\n-1,3\n", DatasetFormat::csv), ParseError);  // ragged row
    CHECK_THROWS_AS(from_string("+2,1\n-1,3\n", DatasetFormat::csv), ParseError);    // bad label
    CHECK_THROWS_AS(from_string("+1,1e\n-1,3\n", DatasetFormat::csv), ParseError);   // bad number
    CHECK_THROWS_AS(from_string("+1,1 2\n-1,3 4\n", DatasetFormat::csv), ParseError);
}

TEST_CASE("single-class data is a validation error, not a parse error") {
    CHECK_THROWS_AS(from_string("+1,1\n+1,2\n", DatasetFormat::csv), ValidationError);
}

TEST_CASE("svmlight parsing fills unlisted coordinates with zero") {
    LabeledDataset ds =
        from_string("+1 1:2.5 3:1\n-1 2:-1\n# tail comment\n", DatasetFormat::svmlight);
    CHECK(ds.size() == 2);
    CHECK(ds.dim() == 3);  // max index seen
    CHECK(ds.point(0)[0] == 2.5);
    CHECK(ds.point(0)[1] == 0.0);
    CHECK(ds.point(0)[2] == 1.0);
    CHECK(ds.point(1)[0] == 0.0);
    CHECK(ds.point(1)[1] == -1.0);
    CHECK(ds.point(1)[2] == 0.0);
}

TEST_CASE("svmlight rejects malformed rows") {
    CHECK_THROWS_AS(from_string("+1 0:1\n-1 1:1\n", DatasetFormat::svmlight), ParseError);
    CHECK_THROWS_AS(from_string("+1 2:1 1:3\n-1 1:1\n", DatasetFormat::svmlight),
                    ParseError);  // indices must increase
    CHECK_THROWS_AS(from_string("+1 1:1 1:2\n-1 1:1\n", DatasetFormat::svmlight), ParseError);
    CHECK_THROWS_AS(from_string("+1 1\n-1 1:1\n", DatasetFormat::svmlight), ParseError);
    CHECK_THROWS_AS(from_string("+1 a:1\n-1 1:1\n", DatasetFormat::svmlight), ParseError);
}

TEST_CASE("csv round-trips exactly, including awkward doubles") {
    Mat pts(3, 2);
    pts << 0.1, -1.0 / 3.0, 1e-17, 12345.6789, -0.0, 2.5;
    LabeledDataset ds(pts, {+1, -1, +1});
    LabeledDataset back = from_string(to_string(ds, DatasetFormat::csv), DatasetFormat::csv);
    CHECK(back.points() == ds.points());
    CHECK(back.labels() == ds.labels());
}

TEST_CASE("svmlight round-trips and writes the last coordinate even when zero") {
    Mat pts(2, 3);
    pts << 1.25, 0.0, 0.0, 0.0, -3.0, 0.0;
    LabeledDataset ds(pts, {+1, -1});
    std::string text = to_string(ds, DatasetFormat::svmlight);
    CHECK(text.find("3:0") != std::string::npos);  // dimension survives the trip
    CHECK(text.find("2:0 ") == std::string::npos);  // interior zeros are omitted
    LabeledDataset back = from_string(text, DatasetFormat::svmlight);
    CHECK(back.points() == ds.points());
    CHECK(back.labels() == ds.labels());
}

TEST_CASE("format names parse") {
    CHECK(parse_format_name("csv") == DatasetFormat::csv);
    CHECK(parse_format_name("svmlight") == DatasetFormat::svmlight);
    CHECK_THROWS_AS(parse_format_name("arff"), ValidationError);
}

TEST_CASE("load_dataset reports unreadable paths") {
    CHECK_THROWS_AS(load_dataset("/nonexistent/zonosvm.csv", DatasetFormat::csv),
                    ValidationError);
}

}  // TEST_SUITE
