#include "zonosvm/lmo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace zonosvm {

namespace {

constexpr double kMassSlack = 1e-12;   // relative slack when counting full caps
constexpr double kFeasSlack = 1e-9;    // relative slack on total mass feasibility
constexpr double kTieTol = 1e-7;       // relative tolerance for transitional points

}  // namespace

Zonotope::Zonotope(Mat gens, Vec caps) : generators(std::move(gens)), upper(std::move(caps)) {
    if (generators.rows() < 1 || generators.cols() < 1) {
        throw ValidationError("Zonotope: need at least one generator and one coordinate.");
    }
    if (upper.size() != generators.rows()) {
        throw ValidationError("Zonotope: cap count does not match generator count.");
    }
    if (!generators.allFinite() || !upper.allFinite() || (upper.array() < 0.0).any()) {
        throw ValidationError("Zonotope: generators and caps must be finite, caps >= 0.");
    }
}

ReducedHull::ReducedHull(Mat pts, double cap) : points(std::move(pts)), mu(cap) {
    if (points.rows() < 1 || points.cols() < 1) {
        throw ValidationError("ReducedHull: need at least one point and one coordinate.");
    }
    if (!points.allFinite() || !std::isfinite(mu)) {
        throw ValidationError("ReducedHull: points and cap must be finite.");
    }
    if (mu <= 0.0 || mu > 1.0 + kMassSlack) {
        throw ValidationError("ReducedHull: cap must lie in (0, 1].");
    }
    if (mu * static_cast<double>(points.rows()) < 1.0 - kFeasSlack) {
        throw ValidationError("ReducedHull: cap times point count must be at least 1.");
    }
}

HullVertexWitness zonotope_extreme(const Zonotope& z, const Vec& w) {
    if (w.size() != z.dim()) {
        throw std::invalid_argument("zonotope_extreme: direction dimension mismatch.");
    }
    const Vec proj = z.generators * w;
    HullVertexWitness out;
    out.weights = (proj.array() > 0.0).select(z.upper, Vec::Zero(z.count()));
    out.point = z.generators.transpose() * out.weights;
    out.objective = w.dot(out.point);
    return out;
}

HullVertexWitness capped_simplex_extreme(const Mat& pts, double cap, double total,
                                         const Vec& w) {
    const Index m = pts.rows();
    const Index k = pts.cols();
    if (w.size() != k) {
        throw std::invalid_argument("capped_simplex_extreme: direction dimension mismatch.");
    }
    if (!(cap > 0.0) || total < 0.0) {
        throw std::invalid_argument("capped_simplex_extreme: cap must be positive and total "
                                    "non-negative.");
    }
    HullVertexWitness out;
    out.weights = Vec::Zero(m);
    out.point = Vec::Zero(k);
    if (total == 0.0) {
        return out;
    }
    if (total > cap * static_cast<double>(m) * (1.0 + kFeasSlack)) {
        throw std::invalid_argument("capped_simplex_extreme: total mass exceeds capacity.");
    }

    const double ratio = total / cap;
    Index full = static_cast<Index>(std::floor(ratio * (1.0 + kMassSlack)));
    full = std::min(m, std::max<Index>(full, 0));
    double remainder = (full == m) ? 0.0 : total - static_cast<double>(full) * cap;
    if (remainder <= kMassSlack * std::max(1.0, total)) {
        remainder = 0.0;
    }

    const Vec proj = pts * w;
    std::vector<Index> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), Index{0});
    const auto better = [&](Index a, Index b) {
        if (proj[a] != proj[b]) return proj[a] > proj[b];
        return a < b;
    };
    if (full < m) {
        std::nth_element(order.begin(), order.begin() + full, order.end(), better);
    }
    for (Index r = 0; r < full; ++r) {
        const Index i = order[static_cast<std::size_t>(r)];
        out.weights[i] = cap;
        out.point += cap * pts.row(i).transpose();
    }
    if (remainder > 0.0 && full < m) {
        // order[full] is the (full+1)-th best point: it takes the partial weight.
        const Index i = *std::min_element(order.begin() + full, order.end(), better);
        out.weights[i] = remainder;
        out.point += remainder * pts.row(i).transpose();
    }
    out.objective = w.dot(out.point);
    return out;
}

HullVertexWitness hull_extreme(const ReducedHull& h, const Vec& w) {
    if (w.size() != h.dim()) {
        throw std::invalid_argument("hull_extreme: direction dimension mismatch.");
    }
    if (w.isZero(0.0)) {
        throw std::invalid_argument("hull_extreme: direction must be non-zero.");
    }
    return capped_simplex_extreme(h.points, h.mu, 1.0, w);
}

DifferenceExtreme difference_extreme(const ReducedHull& plus, const ReducedHull& minus,
                                     const Vec& w) {
    if (plus.dim() != minus.dim()) {
        throw std::invalid_argument("difference_extreme: hull dimension mismatch.");
    }
    DifferenceExtreme out;
    out.plus = hull_extreme(plus, w);
    out.minus = hull_extreme(minus, -w);
    out.point = out.plus.point - out.minus.point;
    out.objective = w.dot(out.point);
    return out;
}

namespace {

// Greedy transition structure for one class. `wrongness` must be larger for
// points that sit further on the wrong side of the candidate direction, so the
// greedy fill takes them first; `t` is reported in the same orientation.
ClassTransition class_transition(const std::vector<Index>& members, const Vec& wrongness,
                                 double mu) {
    ClassTransition ct;
    const Index m = static_cast<Index>(members.size());
    ct.order.resize(members.size());
    std::iota(ct.order.begin(), ct.order.end(), Index{0});
    std::sort(ct.order.begin(), ct.order.end(), [&](Index a, Index b) {
        if (wrongness[a] != wrongness[b]) return wrongness[a] > wrongness[b];
        return members[static_cast<std::size_t>(a)] < members[static_cast<std::size_t>(b)];
    });

    Index full = static_cast<Index>(std::floor((1.0 + kMassSlack) / mu));
    full = std::min(m, std::max<Index>(full, 0));
    double remainder = (full == m) ? 0.0 : 1.0 - static_cast<double>(full) * mu;
    if (remainder <= kMassSlack) remainder = 0.0;

    if (remainder > 0.0) {
        ct.t = wrongness[ct.order[static_cast<std::size_t>(full)]];
    } else if (full < m) {
        ct.t = 0.5 * (wrongness[ct.order[static_cast<std::size_t>(full - 1)]] +
                      wrongness[ct.order[static_cast<std::size_t>(full)]]);
    } else {
        ct.t = wrongness[ct.order[static_cast<std::size_t>(m - 1)]];
    }

    const double tol = kTieTol * (1.0 + std::abs(ct.t));
    for (Index r = 0; r < m; ++r) {
        const Index local = ct.order[static_cast<std::size_t>(r)];
        const Index global = members[static_cast<std::size_t>(local)];
        if (std::abs(wrongness[local] - ct.t) <= tol) {
            ct.transitional.push_back(global);
        } else if (wrongness[local] > ct.t) {
            ct.capped.push_back(global);
        } else {
            ct.zero.push_back(global);
        }
    }
    // Re-express order in dataset indices, most wrong-side first.
    std::vector<Index> order_global;
    order_global.reserve(ct.order.size());
    for (Index local : ct.order) order_global.push_back(members[static_cast<std::size_t>(local)]);
    ct.order = std::move(order_global);
    return ct;
}

}  // namespace

TransitionReport transition_decompose(const LabeledDataset& ds, double mu, const Vec& w) {
    if (w.size() != ds.dim()) {
        throw std::invalid_argument("transition_decompose: direction dimension mismatch.");
    }
    if (w.isZero(0.0)) {
        throw std::invalid_argument("transition_decompose: direction must be non-zero.");
    }
    const double min_class = static_cast<double>(
        std::min(ds.positives().size(), ds.negatives().size()));
    if (!(mu > 0.0) || mu > 1.0 + kMassSlack || mu * min_class < 1.0 - kFeasSlack) {
        throw ValidationError("transition_decompose: cap is infeasible for this dataset.");
    }

    // Positives are wrong-side when w.x is small, negatives when it is large.
    auto wrongness_for = [&](const std::vector<Index>& members, double sign) {
        Vec v(static_cast<Index>(members.size()));
        for (std::size_t r = 0; r < members.size(); ++r) {
            v[static_cast<Index>(r)] = sign * w.dot(ds.point(members[r]));
        }
        return v;
    };

    TransitionReport report;
    {
        const Vec wrong = wrongness_for(ds.positives(), -1.0);
        report.plus = class_transition(ds.positives(), wrong, mu);
        report.plus.t = -report.plus.t;
    }
    {
        const Vec wrong = wrongness_for(ds.negatives(), +1.0);
        report.minus = class_transition(ds.negatives(), wrong, mu);
    }
    return report;
}

}  // namespace zonosvm
