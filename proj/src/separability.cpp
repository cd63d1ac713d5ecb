#include "zonosvm/separability.hpp"

#include "zonosvm/ellipsoid.hpp"
#include "zonosvm/lmo.hpp"
#include "zonosvm/nearest_point.hpp"
#include "zonosvm/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace zonosvm {

namespace {

constexpr double kHeightSlack = 10.0;  // x eps: band around height 1 for the margin check

}  // namespace

SeparabilityResult zero_margin_mu(const LabeledDataset& ds, double eps) {
    if (!(eps > 0.0)) {
        throw std::invalid_argument("zero_margin_mu: eps must be positive.");
    }
    const auto [plus_lifted, minus_lifted] = lift_dataset_matrices(ds);
    const Zonotope z_plus(plus_lifted, Vec::Ones(plus_lifted.rows()));
    const Zonotope z_minus(minus_lifted, Vec::Ones(minus_lifted.rows()));

    EllipsoidOptions opts;
    opts.eps = eps;
    const MaxCoordinateResult best = ellipsoid_max_coordinate(z_plus, z_minus, ds.dim(), opts);
    if (best.report.termination == EllipsoidTermination::iteration_cap) {
        throw NonconvergenceError("zero_margin_mu: intersection program hit its iteration cap.");
    }

    SeparabilityResult out;
    out.height = std::max(0.0, best.value);
    out.common_point = best.point;
    out.iterations = best.report.iterations;

    // Decompose the optimal intersection point inside each zonotope to get
    // feasible per-class witness weights.
    const auto decompose = [&](const Zonotope& z) {
        return nearest_point(zonotope_lmo(z), best.point, std::min(1e-9, eps)).weights;
    };
    out.alpha_plus = decompose(z_plus);
    out.alpha_minus = decompose(z_minus);

    const double mu_min = std::max(1.0 / static_cast<double>(ds.positives().size()),
                                   1.0 / static_cast<double>(ds.negatives().size()));
    if (out.height > kHeightSlack * eps) {
        out.mu_zero = std::clamp(1.0 / out.height, mu_min, 1.0);
    } else {
        out.mu_zero = 1.0;
    }

    // Heights at or below 1 mean the full hulls at most touch; a strictly
    // positive margin at mu = 1 confirms the interiors are disjoint.
    out.separable = out.height <= 1.0 + kHeightSlack * eps &&
                    margin_at_mu(ds, 1.0, eps) > eps;

    const Index n = ds.size();
    if (ds.positives().size() == ds.negatives().size() && n > 2) {
        const double shift = 2.0 / static_cast<double>(n);
        out.mu_star = (out.mu_zero - shift) / (1.0 - shift);
    }
    return out;
}

double margin_at_mu(const LabeledDataset& ds, double mu, double eps) {
    TrainOptions opts;
    opts.eps = eps;
    return train(ds, mu, opts).margin;
}

}  // namespace zonosvm
