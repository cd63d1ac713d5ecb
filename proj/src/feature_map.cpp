#include "zonosvm/feature_map.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace zonosvm {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    constexpr std::uint64_t kLimit = (std::uint64_t{1} << 63) - 1;
    unsigned __int128 r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;  // exact: r holds C(n - k + i, i) after each step
        if (r > kLimit) {
            throw std::overflow_error("binomial: coefficient exceeds 2^63 - 1.");
        }
    }
    return static_cast<std::uint64_t>(r);
}

FeatureMapSpec make_feature_map_spec(int degree, Index input_dim) {
    if (degree < 1) {
        throw ValidationError("make_feature_map_spec: degree must be at least 1.");
    }
    if (input_dim < 1) {
        throw ValidationError("make_feature_map_spec: input dimension must be at least 1.");
    }
    FeatureMapSpec spec;
    spec.degree = degree;
    spec.input_dim = input_dim;
    const auto count = binomial(static_cast<std::uint64_t>(input_dim) + degree - 1,
                                static_cast<std::uint64_t>(degree));
    spec.lifted_dim = static_cast<Index>(count);
    return spec;
}

namespace {

// Multinomial coefficient p!/(e_0! ... e_{d-1}!) as a product of binomials
// over the prefix sums, so every intermediate value is an exact integer.
std::uint64_t multinomial(const std::vector<int>& e) {
    std::uint64_t m = 1;
    std::uint64_t prefix = 0;
    for (int part : e) {
        prefix += static_cast<std::uint64_t>(part);
        m *= binomial(prefix, static_cast<std::uint64_t>(part));
    }
    return m;
}

// Advances e to the next composition in descending lexicographic order.
// Returns false once e == (0, ..., 0, p), the final composition.
bool next_composition(std::vector<int>& e) {
    const std::size_t d = e.size();
    std::size_t j = d - 1;
    bool found = false;
    while (j-- > 0) {
        if (e[j] > 0) {
            found = true;
            break;
        }
    }
    if (!found) return false;
    int tail = 0;
    for (std::size_t i = j + 1; i < d; ++i) {
        tail += e[i];
        e[i] = 0;
    }
    e[j] -= 1;
    e[j + 1] = tail + 1;
    return true;
}

}  // namespace

Vec polynomial_feature_map(const Vec& x, int degree) {
    const FeatureMapSpec spec = make_feature_map_spec(degree, x.size());
    Vec out(spec.lifted_dim);
    std::vector<int> e(static_cast<std::size_t>(x.size()), 0);
    e[0] = degree;
    Index slot = 0;
    while (true) {
        double monomial = std::sqrt(static_cast<double>(multinomial(e)));
        for (Index i = 0; i < x.size(); ++i) {
            for (int rep = 0; rep < e[static_cast<std::size_t>(i)]; ++rep) {
                monomial *= x[i];
            }
        }
        out[slot++] = monomial;
        if (!next_composition(e)) break;
    }
    if (slot != spec.lifted_dim) {
        throw ConditioningError("polynomial_feature_map: monomial enumeration mismatch.");
    }
    return out;
}

LabeledDataset lift_dataset_features(const LabeledDataset& ds, int degree) {
    const FeatureMapSpec spec = make_feature_map_spec(degree, ds.dim());
    Mat mapped(ds.size(), spec.lifted_dim);
    for (Index i = 0; i < ds.size(); ++i) {
        mapped.row(i) = polynomial_feature_map(ds.point(i), degree).transpose();
    }
    return LabeledDataset(std::move(mapped), ds.labels());
}

}  // namespace zonosvm
