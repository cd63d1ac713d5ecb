#include "doctest.h"

#include "zonosvm/dataset.hpp"
#include "zonosvm/nearest_point.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace zonosvm;

namespace {

Mat rows2(std::initializer_list<std::pair<double, double>> pts) {
    Mat m(static_cast<Eigen::Index>(pts.size()), 2);
    Eigen::Index i = 0;
    for (const auto& p : pts) {
        m(i, 0) = p.first;
        m(i, 1) = p.second;
        ++i;
    }
    return m;
}

Vec vec2(double x, double y) { return (Vec(2) << x, y).finished(); }

// Reduced hull of the four dataset-A corner points: class difference body.
LmoHandle dataset_a_difference() {
    Mat plus = rows2({{2, 0}, {3, 1}});
    Mat minus = rows2({{0, 0}, {-1, 1}});
    return difference_lmo(ReducedHull(plus, 1.0), ReducedHull(minus, 1.0));
}

}  // namespace

TEST_SUITE("nearest_point") {

TEST_CASE("segment projection lands on the nearest endpoint region") {
    // Segment from (0,0) to (2,0); target (1,5) projects straight down to (1,0).
    LmoHandle seg = segment_lmo(vec2(0, 0), vec2(2, 0));
    NearestPointResult r = nearest_point(seg, vec2(1, 5), 1e-12);
    CHECK(r.point[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.point[1] == 0.0);
    CHECK(r.squared_distance == doctest::Approx(25.0).epsilon(1e-12));
    // Witness weights reproduce the point: (1-t, t) with t = 1/2.
    CHECK(r.weights.size() == 2);
    CHECK(r.weights.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.weights[1] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("target inside the body is hit exactly and the gap collapses to zero") {
    // The iterates on this instance land exactly on the target after two
    // steps: (2,0) -> (1.5,0) -> (1,0). The solver must cope with a zero
    // gradient instead of handing a zero direction to the oracle.
    LmoHandle seg = segment_lmo(vec2(0, 0), vec2(2, 0));
    NearestPointResult r;
    REQUIRE_NOTHROW(r = nearest_point(seg, vec2(1, 0), 1e-15));
    CHECK(r.point[0] == 1.0);
    CHECK(r.point[1] == 0.0);
    CHECK(r.squared_distance == 0.0);
    CHECK(r.duality_gap == 0.0);
}

TEST_CASE("nearest point of the class-difference body from the origin") {
    // Distance from the origin to the difference body is the max-margin
    // separation width; the witness point is (2,0).
    NearestPointResult r = nearest_point(dataset_a_difference(), Vec::Zero(2), 1e-12);
    CHECK(r.point[0] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(r.point[1] == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(r.squared_distance == doctest::Approx(4.0).epsilon(1e-10));
    // Weights: plus-hull weights then minus-hull weights, each a simplex.
    CHECK(r.weights.size() == 4);
    CHECK(r.weights.head(2).sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.weights.tail(2).sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("iteration cap raises a nonconvergence error carrying the best iterate") {
    // Target picked so the initial atom is not the optimum: the first step's
    // measured gap stays large and the single-iteration budget trips.
    NearestPointOptions opts;
    opts.max_iterations = 1;
    try {
        nearest_point(dataset_a_difference(), vec2(0, 0.5), 1e-14, opts);
        FAIL("expected NearestPointNonconvergence");
    } catch (const NearestPointNonconvergence& e) {
        CHECK(e.best.iterations == 1);
        CHECK(e.best.point.size() == 2);
        CHECK(e.best.squared_distance >= 4.25 - 1e-9);  // cannot beat the optimum
        CHECK(std::isfinite(e.best.duality_gap));
    }
}

TEST_CASE("iteration callback observes monotone squared distances") {
    std::vector<double> dists;
    NearestPointOptions opts;
    opts.on_iteration = [&](long, double sq, double) { dists.push_back(sq); };
    nearest_point(dataset_a_difference(), Vec::Zero(2), 1e-12, opts);
    REQUIRE(dists.size() >= 1);
    for (size_t i = 1; i < dists.size(); ++i) {
        CHECK(dists[i] <= dists[i - 1] + 1e-15);
    }
}

TEST_CASE("pairwise iteration exposes state and recombines exactly") {
    PairwiseFrankWolfe fw(dataset_a_difference(), Vec::Zero(2));
    for (int i = 0; i < 50 && fw.duality_gap() > 1e-12; ++i) fw.step();
    CHECK(fw.squared_distance() == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(fw.iterations() >= 1);
    CHECK(fw.scale() > 0.0);
    LmoResult rec = fw.recombine();
    CHECK((rec.point - fw.point()).norm() <= 1e-12);
    CHECK(rec.weights.size() == 4);
}

TEST_CASE("retargeting keeps the atoms and still converges") {
    PairwiseFrankWolfe fw(dataset_a_difference(), Vec::Zero(2));
    for (int i = 0; i < 50 && fw.duality_gap() > 1e-12; ++i) fw.step();
    fw.set_target(vec2(10, 0));  // far outside: nearest point is (4, 0) corner
    for (int i = 0; i < 200 && fw.duality_gap() > 1e-12; ++i) fw.step();
    CHECK(fw.point()[0] == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(fw.squared_distance() == doctest::Approx(36.0).epsilon(1e-9));
}

TEST_CASE("separation oracle reports a valid cut for an outside query") {
    SeparationOracleFn oracle = make_separation_oracle(dataset_a_difference(), 1e-9);
    SeparationResult s = oracle(Vec::Zero(2));
    REQUIRE(s.kind == SeparationResult::Kind::hyperplane);
    CHECK(s.distance == doctest::Approx(2.0).epsilon(1e-6));
    // Unit normal pointing from the body toward the query: (-1, 0).
    CHECK(s.normal.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.normal[0] == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(s.normal[1] == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(s.offset == doctest::Approx(-2.0).epsilon(1e-6));
    CHECK(s.separation_margin > 0.0);
    // The query strictly violates the cut by the reported margin.
    CHECK(s.normal.dot(Vec::Zero(2)) - s.offset ==
          doctest::Approx(s.separation_margin).epsilon(1e-9));
}

TEST_CASE("separation oracle certifies interior queries") {
    SeparationOracleFn oracle = make_separation_oracle(dataset_a_difference(), 1e-9);
    SeparationResult s = oracle(vec2(3, 0));  // body midpoint along x
    CHECK(s.kind == SeparationResult::Kind::inside);
    CHECK(s.distance <= 1e-9);
}

TEST_CASE("separation oracle warm-starts across alternating queries") {
    SeparationOracleFn oracle = make_separation_oracle(dataset_a_difference(), 1e-9);
    for (int rep = 0; rep < 3; ++rep) {
        CHECK(oracle(Vec::Zero(2)).kind == SeparationResult::Kind::hyperplane);
        CHECK(oracle(vec2(3, 0)).kind == SeparationResult::Kind::inside);
    }
}

TEST_CASE("zonotope oracle matches the zonotope extreme map") {
    Mat gens = (Mat(3, 3) << 2, 0, 1, 0, 2, 1, 1, 1, 1).finished();
    Zonotope z(gens, Vec::Ones(3));
    LmoHandle lmo = zonotope_lmo(z);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    for (int t = 0; t < 25; ++t) {
        Vec w(3);
        do {
            for (int i = 0; i < 3; ++i) w[i] = g(rng);
        } while (w.norm() <= 1e-6);
        LmoResult a = lmo(w);
        HullVertexWitness b = zonotope_extreme(z, w);
        CHECK(a.point == b.point);
        CHECK(a.weights == b.weights);
    }
}

TEST_CASE("capped simplex oracle agrees with the hull oracle at matching caps") {
    Mat pts = rows2({{0, 0}, {1, 0}, {0, 1}});
    LmoHandle hull = hull_lmo(ReducedHull(pts, 0.5));
    LmoHandle capped = capped_simplex_lmo(pts, 0.5, 1.0);
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    for (int t = 0; t < 25; ++t) {
        Vec w(2);
        do {
            for (int i = 0; i < 2; ++i) w[i] = g(rng);
        } while (w.norm() <= 1e-6);
        LmoResult a = hull(w);
        LmoResult b = capped(w);
        CHECK(a.point == b.point);
        CHECK(a.weights == b.weights);
    }
}

}  // TEST_SUITE
