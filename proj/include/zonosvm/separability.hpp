#pragma once

#include "zonosvm/common.hpp"
#include "zonosvm/dataset.hpp"

#include <optional>

namespace zonosvm {

struct SeparabilityResult {
    // Largest mu at which the reduced convex hulls stay separable, clamped to
    // [max(1/|I+|, 1/|I-|), 1].
    double mu_zero = 1.0;
    // (mu_zero - 2/n) / (1 - 2/n); only defined for balanced classes with
    // n > 2 (the normalization degenerates at n = 2). 1 means the class
    // hull interiors are disjoint, 0 means the centroids coincide.
    std::optional<double> mu_star;
    bool separable = false;  // convex hull interiors disjoint
    // Optimal height sum(alpha) of the zonotope-intersection program;
    // 1/mu_zero before clamping (0 when the intersection degenerates to the
    // origin, i.e. strictly separable data).
    double height = 0.0;
    // Witness of the intersection point: per-class weights in [0, 1] whose
    // lifted combinations both equal common_point. In the non-separable case
    // sum(alpha_plus) = sum(alpha_minus) = 1/mu_zero.
    Vec alpha_plus, alpha_minus;
    Vec common_point;  // in R^{d+1}
    long iterations = 0;
};

// Zero-margin separability measure: maximizes the lift coordinate over the
// intersection of the two class zonotopes (unit caps on lifted points) with
// the central-cut ellipsoid, then reads mu_zero off the optimal height.
// Separability is declared when the optimal height stays <= 1 and is
// cross-checked by training at mu = 1.
SeparabilityResult zero_margin_mu(const LabeledDataset& ds, double eps = 1e-7);

// Margin of the trained classifier at the given mu (0 when the reduced hulls
// intersect).
double margin_at_mu(const LabeledDataset& ds, double mu, double eps = 1e-7);

}  // namespace zonosvm
