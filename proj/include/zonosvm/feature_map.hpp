#pragma once

#include "zonosvm/common.hpp"
#include "zonosvm/dataset.hpp"

namespace zonosvm {

// Shape of the degree-p homogeneous polynomial feature map on R^d.
struct FeatureMapSpec {
    int degree = 1;
    Index input_dim = 0;
    Index lifted_dim = 0;  // number of degree-p monomials: C(d + p - 1, p)
};

// Exact binomial coefficient; throws std::overflow_error if it exceeds 2^63-1.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

// Validates degree >= 1, input_dim >= 1 and fills in lifted_dim.
FeatureMapSpec make_feature_map_spec(int degree, Index input_dim);

// Maps x to the vector of all degree-p monomials, each scaled by the square
// root of its multinomial coefficient so that the map linearizes the
// homogeneous polynomial kernel: phi(v).phi(w) == (v.w)^p.
// Components are ordered by descending lexicographic exponent vector.
Vec polynomial_feature_map(const Vec& x, int degree);

// Applies the feature map to every sample; labels are preserved.
LabeledDataset lift_dataset_features(const LabeledDataset& ds, int degree);

}  // namespace zonosvm
