#include "zonosvm/feature_map.hpp"

#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

using namespace zonosvm;

TEST_SUITE("feature_map") {

TEST_CASE("binomial coefficients are exact") {
    CHECK(binomial(0, 0) == 1);
    CHECK(binomial(5, 0) == 1);
    CHECK(binomial(5, 5) == 1);
    CHECK(binomial(5, 2) == 10);
    CHECK(binomial(10, 3) == 120);
    CHECK(binomial(52, 5) == 2598960);
    CHECK(binomial(61, 30) == 232714176627630544ULL);  // largest-scale exact case
    CHECK(binomial(3, 7) == 0);
    CHECK_THROWS_AS(binomial(100, 50), std::overflow_error);
}

TEST_CASE("spec fills in the lifted dimension C(d+p-1, p)") {
    FeatureMapSpec s = make_feature_map_spec(2, 2);
    CHECK(s.degree == 2);
    CHECK(s.input_dim == 2);
    CHECK(s.lifted_dim == 3);  // v1^2, v1 v2, v2^2
    CHECK(make_feature_map_spec(3, 4).lifted_dim == 20);
    CHECK(make_feature_map_spec(1, 7).lifted_dim == 7);  // degree 1 is the identity shape
    CHECK_THROWS_AS(make_feature_map_spec(0, 2), ValidationError);
    CHECK_THROWS_AS(make_feature_map_spec(2, 0), ValidationError);
}

TEST_CASE("degree-2 map on the plane is (v1^2, sqrt2 v1 v2, v2^2)") {
    Vec v(2);
    v << 3, 5;
    Vec phi = polynomial_feature_map(v, 2);
    REQUIRE(phi.size() == 3);
    CHECK(phi[0] == doctest::Approx(9.0).epsilon(1e-15));
    CHECK(phi[1] == doctest::Approx(std::sqrt(2.0) * 15.0).epsilon(1e-15));
    CHECK(phi[2] == doctest::Approx(25.0).epsilon(1e-15));
}

TEST_CASE("the lifted dot product of (1,2) and (3,1) is (1*3 + 2*1)^2 = 25") {
    Vec a(2), b(2);
    a << 1, 2;
    b << 3, 1;
    double lifted = polynomial_feature_map(a, 2).dot(polynomial_feature_map(b, 2));
    CHECK(lifted == doctest::Approx(25.0).epsilon(1e-12));
}

TEST_CASE("degree 1 reproduces the input") {
    Vec v(3);
    v << -1, 0.5, 2;
    CHECK(polynomial_feature_map(v, 1) == v);
}

TEST_CASE("kernel identity phi(v).phi(w) == (v.w)^p on random pairs") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        Index d = 1 + static_cast<Index>(rng() % 5);
        int p = 1 + static_cast<int>(rng() % 3);
        Vec v(d), w(d);
        for (Index i = 0; i < d; ++i) {
            v[i] = gauss(rng);
            w[i] = gauss(rng);
        }
        double lifted = polynomial_feature_map(v, p).dot(polynomial_feature_map(w, p));
        double kernel = std::pow(v.dot(w), p);
        CHECK(std::abs(lifted - kernel) <= 1e-9 * std::max(1.0, std::abs(kernel)));
    }
}

TEST_CASE("the map lists monomials in descending lexicographic exponent order") {
    Vec v(2);
    v << 2, 3;  // degree 3: exponents (3,0), (2,1), (1,2), (0,3)
    Vec phi = polynomial_feature_map(v, 3);
    REQUIRE(phi.size() == 4);
    CHECK(phi[0] == doctest::Approx(8.0));                        // 2^3
    CHECK(phi[1] == doctest::Approx(std::sqrt(3.0) * 4 * 3));     // sqrt(C) 2^2 3
    CHECK(phi[2] == doctest::Approx(std::sqrt(3.0) * 2 * 9));     // sqrt(C) 2 3^2
    CHECK(phi[3] == doctest::Approx(27.0));                       // 3^3
}

TEST_CASE("lifting a dataset maps every row and keeps labels") {
    Mat pts(2, 2);
    pts << 1, 2, 3, 1;
    LabeledDataset ds(pts, {+1, -1});
    LabeledDataset lifted = lift_dataset_features(ds, 2);
    CHECK(lifted.size() == 2);
    CHECK(lifted.dim() == 3);
    CHECK(lifted.labels() == ds.labels());
    CHECK(lifted.points().row(0).transpose() == polynomial_feature_map(pts.row(0).transpose(), 2));
}

}  // TEST_SUITE
