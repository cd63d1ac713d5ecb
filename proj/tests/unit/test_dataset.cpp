#include "zonosvm/dataset.hpp"

#include "doctest.h"

#include <limits>
#include <vector>

using namespace zonosvm;

namespace {

LabeledDataset four_points() {
    Mat pts(4, 2);
    pts << 2, 0, 3, 1, 0, 0, -1, 1;
    return LabeledDataset(pts, {+1, +1, -1, -1});
}

}  // namespace

TEST_SUITE("dataset") {

TEST_CASE("basic accessors and class partition") {
    LabeledDataset ds = four_points();
    CHECK(ds.size() == 4);
    CHECK(ds.dim() == 2);
    CHECK(ds.label(0) == 1);
    CHECK(ds.label(3) == -1);
    CHECK(ds.point(1) == (Vec(2) << 3, 1).finished());
    CHECK(ds.positives() == std::vector<Index>{0, 1});
    CHECK(ds.negatives() == std::vector<Index>{2, 3});
    CHECK(ds.class_points(+1).rows() == 2);
    CHECK(ds.class_points(-1)(1, 0) == -1.0);
    CHECK(ds.class_indices(-1) == std::vector<Index>{2, 3});
}

TEST_CASE("points of one class keep ascending dataset order") {
    Mat pts(5, 1);
    pts << 10, 20, 30, 40, 50;
    LabeledDataset ds(pts, {-1, +1, -1, +1, -1});
    CHECK(ds.positives() == std::vector<Index>{1, 3});
    CHECK(ds.class_points(+1)(0, 0) == 20.0);
    CHECK(ds.class_points(+1)(1, 0) == 40.0);
    CHECK(ds.class_points(-1)(2, 0) == 50.0);
}

TEST_CASE("construction rejects malformed input") {
    Mat pts(2, 2);
    pts << 0, 0, 1, 1;
    CHECK_THROWS_AS(LabeledDataset(pts, {+1}), ValidationError);         // label count
    CHECK_THROWS_AS(LabeledDataset(pts, {+1, +2}), ValidationError);     // label value
    CHECK_THROWS_AS(LabeledDataset(pts, {+1, +1}), ValidationError);     // single class
    CHECK_THROWS_AS(LabeledDataset(Mat(1, 2), {+1}), ValidationError);   // too few rows
    CHECK_THROWS_AS(LabeledDataset(Mat(2, 0), {+1, -1}), ValidationError);  // no columns

    Mat bad = pts;
    bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(LabeledDataset(bad, {+1, -1}), ValidationError);
    bad(0, 1) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(LabeledDataset(bad, {+1, -1}), ValidationError);
}

TEST_CASE("duplicate points stay distinct indices") {
    Mat pts(3, 1);
    pts << 1, 1, 2;
    LabeledDataset ds(pts, {+1, +1, -1});
    CHECK(ds.positives() == std::vector<Index>{0, 1});
    CHECK(ds.point(0) == ds.point(1));
}

TEST_CASE("lift appends a unit coordinate") {
    LabeledDataset ds = four_points();
    auto [plus, minus] = lift_dataset(ds);
    REQUIRE(plus.size() == 2);
    REQUIRE(minus.size() == 2);
    CHECK(plus[0].v.size() == 3);
    CHECK(plus[0].v[0] == 2.0);
    CHECK(plus[0].v[2] == 1.0);
    CHECK(minus[1].v[0] == -1.0);
    CHECK(minus[1].v[2] == 1.0);

    auto [mp, mm] = lift_dataset_matrices(ds);
    CHECK(mp.rows() == 2);
    CHECK(mp.cols() == 3);
    CHECK(mp.col(2) == Vec::Ones(2));
    CHECK(mm.col(2) == Vec::Ones(2));
    CHECK(mp(1, 0) == 3.0);
    CHECK(mm(0, 0) == 0.0);
}

}  // TEST_SUITE
