#include "zonosvm/ellipsoid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace zonosvm {

double central_cut_det_factor(Index k) {
    if (k < 1) {
        throw std::invalid_argument("central_cut_det_factor: dimension must be positive.");
    }
    if (k == 1) return 0.25;
    const double kk = static_cast<double>(k);
    return std::pow(kk * kk / (kk * kk - 1.0), kk) * (kk - 1.0) / (kk + 1.0);
}

SolveReport ellipsoid_minimize(const std::vector<SeparationOracleFn>& oracles,
                               const ConvexObjective& objective, Index dim, double radius,
                               const EllipsoidOptions& opts) {
    if (dim < 1) {
        throw std::invalid_argument("ellipsoid_minimize: dimension must be positive.");
    }
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw std::invalid_argument("ellipsoid_minimize: radius must be positive and finite.");
    }
    if (!(opts.eps > 0.0)) {
        throw std::invalid_argument("ellipsoid_minimize: eps must be positive.");
    }
    if (!objective.value || !objective.subgradient) {
        throw std::invalid_argument("ellipsoid_minimize: objective callbacks are required.");
    }

    const double kk = static_cast<double>(dim);
    long cap = opts.max_iterations;
    if (cap <= 0) {
        const double span = std::max(0.0, std::log(radius / opts.eps));
        cap = static_cast<long>(2.0 * kk * (kk + 1.0) * span) + 1000;
    }

    SolveReport report;
    report.final_state.center = Vec::Zero(dim);
    report.final_state.shape = (radius * radius) * Mat::Identity(dim, dim);

    Vec& c = report.final_state.center;
    Mat& q = report.final_state.shape;
    double lb = objective.known_lower_bound;
    double logdet = 2.0 * kk * std::log(radius);
    const double logdet_floor = 2.0 * kk * std::log(opts.eps);
    const double log_factor = std::log(central_cut_det_factor(dim));
    bool repaired = false;

    auto finish = [&](EllipsoidTermination why) {
        report.termination = why;
        report.certified_gap = report.best_value - lb;
        return report;
    };

    for (long it = 0; it < cap; ++it) {
        // Find a violated oracle; its hyperplane becomes the feasibility cut.
        CutRequest cut;
        bool violated = false;
        for (const auto& oracle : oracles) {
            SeparationResult sep = oracle(c);
            if (sep.kind == SeparationResult::Kind::hyperplane) {
                cut.kind = CutRequest::Kind::feasibility;
                cut.normal = std::move(sep.normal);
                cut.offset = sep.offset;
                violated = true;
                break;
            }
        }

        const double value = objective.value(c);
        Vec g = objective.subgradient(c);
        // The linearization at c lower-bounds the objective everywhere, and the
        // optimum is still inside the ellipsoid, so min over the ellipsoid of
        // the linearization bounds the optimum from below at every center.
        const double reach = std::sqrt(std::max(0.0, g.dot(q * g)));
        lb = std::max(lb, value - reach);

        if (!violated) {
            report.feasible_found = true;
            if (value < report.best_value) {
                report.best_value = value;
                report.best_point = c;
            }
            if (report.best_value - lb <= opts.eps) {
                return finish(EllipsoidTermination::tolerance_met);
            }
            cut.kind = CutRequest::Kind::objective;
            cut.normal = std::move(g);
            cut.offset = cut.normal.dot(c);
        } else if (report.feasible_found && report.best_value - lb <= opts.eps) {
            return finish(EllipsoidTermination::tolerance_met);
        }

        // Cut along `cut.normal`: objective cuts pass through the center, while
        // feasibility cuts land at the certified offset, a depth of `alpha`
        // ellipsoid radii below it.  Deep cuts keep repeated near-parallel
        // feasibility cuts from stretching the ellipsoid into a needle.
        const Vec& a = cut.normal;
        Vec qa = q * a;
        double aqa = a.dot(qa);
        if (!(aqa > 0.0) || !std::isfinite(aqa)) {
            if (repaired) {
                throw ConditioningError(
                    "ellipsoid_minimize: shape matrix lost positive definiteness.");
            }
            repaired = true;
            q = 0.5 * (q + q.transpose()).eval();
            const double ridge = 1e-12 * std::max(q.trace() / kk, opts.eps * opts.eps);
            q += ridge * Mat::Identity(dim, dim);
            qa = q * a;
            aqa = a.dot(qa);
            if (!(aqa > 0.0) || !std::isfinite(aqa)) {
                throw ConditioningError(
                    "ellipsoid_minimize: shape matrix lost positive definiteness.");
            }
        }
        const double reach_along_cut = std::sqrt(aqa);
        double alpha = 0.0;
        if (cut.kind == CutRequest::Kind::feasibility) {
            alpha = (a.dot(c) - cut.offset) / reach_along_cut;
            if (alpha >= 1.0) {
                // The feasible half-space no longer meets the ellipsoid, so the
                // feasible region can't be localized any further at this scale.
                return finish(EllipsoidTermination::volume_exhausted);
            }
            alpha = std::max(alpha, 0.0);
        }
        const Vec b = qa / reach_along_cut;
        c -= ((1.0 + kk * alpha) / (kk + 1.0)) * b;
        if (dim == 1) {
            q(0, 0) *= 0.25 * (1.0 - alpha) * (1.0 - alpha);
            logdet += alpha == 0.0 ? log_factor : 2.0 * std::log(0.5 * (1.0 - alpha));
        } else {
            const double dilation = (kk * kk / (kk * kk - 1.0)) * (1.0 - alpha * alpha);
            const double tighten = 2.0 * (1.0 + kk * alpha) / ((kk + 1.0) * (1.0 + alpha));
            q = dilation * (q - tighten * (b * b.transpose()));
            q = 0.5 * (q + q.transpose()).eval();
            // b has unit norm in the ellipsoid metric, so the rank-one update
            // scales the determinant by exactly (1 - tighten).
            logdet += alpha == 0.0 ? log_factor
                                   : kk * std::log(dilation) + std::log1p(-tighten);
        }
        report.iterations = it + 1;
        report.final_state.iteration = report.iterations;
        if (opts.on_iteration) {
            opts.on_iteration(report.final_state, cut);
        }
        if (0.5 * logdet < logdet_floor) {
            return finish(EllipsoidTermination::volume_exhausted);
        }
    }
    return finish(EllipsoidTermination::iteration_cap);
}

AffineFrame frame_from_directions(Vec origin, const Mat& directions, double rank_tol) {
    AffineFrame frame;
    frame.origin = std::move(origin);
    const Index k = frame.origin.size();
    if (directions.rows() != k) {
        throw std::invalid_argument("frame_from_directions: direction dimension mismatch.");
    }
    if (directions.cols() == 0 || directions.isZero(0.0)) {
        frame.basis = Mat::Zero(k, 0);
        return frame;
    }
    Eigen::ColPivHouseholderQR<Mat> qr(directions);
    qr.setThreshold(rank_tol);
    const Index r = qr.rank();
    Mat full = qr.householderQ();
    frame.basis = full.leftCols(r);
    return frame;
}

namespace {

// Orthonormal basis of the orthogonal complement of col(u) in R^k.
Mat orth_complement(const Mat& u, Index k, double tol) {
    if (u.cols() == 0) {
        return Mat::Identity(k, k);
    }
    Eigen::ColPivHouseholderQR<Mat> qr(u);
    qr.setThreshold(tol);
    const Index r = qr.rank();
    Mat full = qr.householderQ();
    return full.rightCols(k - r);
}

}  // namespace

Mat span_intersection(const Mat& a, const Mat& b, double tol) {
    if (a.rows() != b.rows()) {
        throw std::invalid_argument("span_intersection: ambient dimension mismatch.");
    }
    const Index k = a.rows();
    const Mat na = orth_complement(a, k, tol);
    const Mat nb = orth_complement(b, k, tol);
    Mat joined(k, na.cols() + nb.cols());
    joined.leftCols(na.cols()) = na;
    joined.rightCols(nb.cols()) = nb;
    // span(a) ∩ span(b) is the orthogonal complement of span(a)⊥ + span(b)⊥.
    return orth_complement(joined, k, tol);
}

SeparationOracleFn reduce_oracle(SeparationOracleFn full, const AffineFrame& frame) {
    return [full = std::move(full), frame](const Vec& y) -> SeparationResult {
        SeparationResult res = full(frame.lift(y));
        if (res.nearest.size() != 0) {  // oracles may leave the witness empty
            res.nearest = frame.project(res.nearest);
        }
        if (res.kind == SeparationResult::Kind::hyperplane) {
            Vec reduced = frame.basis.transpose() * res.normal;
            const double norm = reduced.norm();
            if (norm <= 1e-12) {
                throw ConditioningError(
                    "reduce_oracle: separating normal is orthogonal to the frame.");
            }
            res.offset = (res.offset - res.normal.dot(frame.origin)) / norm;
            res.normal = reduced / norm;
            res.separation_margin /= norm;
        }
        return res;
    };
}

ConvexObjective reduce_objective(ConvexObjective full, const AffineFrame& frame) {
    ConvexObjective reduced;
    reduced.known_lower_bound = full.known_lower_bound;
    auto shared = std::make_shared<ConvexObjective>(std::move(full));
    reduced.value = [shared, frame](const Vec& y) { return shared->value(frame.lift(y)); };
    reduced.subgradient = [shared, frame](const Vec& y) {
        return Vec(frame.basis.transpose() * shared->subgradient(frame.lift(y)));
    };
    return reduced;
}

MaxCoordinateResult ellipsoid_max_coordinate(const Zonotope& z1, const Zonotope& z2,
                                             Index coord, const EllipsoidOptions& opts) {
    if (z1.dim() != z2.dim()) {
        throw std::invalid_argument("ellipsoid_max_coordinate: zonotope dimension mismatch.");
    }
    if (coord < 0 || coord >= z1.dim()) {
        throw std::invalid_argument("ellipsoid_max_coordinate: coordinate out of range.");
    }
    const Index k = z1.dim();

    // The intersection lives in the meet of the two linear spans; both contain
    // the origin, so the frame is linear and the origin is always feasible.
    const auto span_of = [&](const Zonotope& z) {
        return frame_from_directions(Vec::Zero(k), z.generators.transpose()).basis;
    };
    AffineFrame frame;
    frame.origin = Vec::Zero(k);
    frame.basis = span_intersection(span_of(z1), span_of(z2));

    MaxCoordinateResult out;
    if (frame.rank() == 0) {
        out.value = 0.0;
        out.point = Vec::Zero(k);
        out.report.best_point = Vec::Zero(0);
        out.report.best_value = 0.0;
        out.report.certified_gap = 0.0;
        out.report.feasible_found = true;
        out.report.termination = EllipsoidTermination::tolerance_met;
        out.report.final_state.center = Vec::Zero(0);
        out.report.final_state.shape = Mat::Zero(0, 0);
        return out;
    }

    const auto reach_bound = [&](const Zonotope& z) {
        double r = 0.0;
        for (Index i = 0; i < z.count(); ++i) {
            r += z.upper[i] * z.generators.row(i).norm();
        }
        return r;
    };
    const double radius = std::min(reach_bound(z1), reach_bound(z2)) + 1.0;

    const Vec e = Vec::Unit(k, coord);
    const double cap1 = zonotope_extreme(z1, e).objective;
    const double cap2 = zonotope_extreme(z2, e).objective;

    ConvexObjective negated;
    negated.value = [e](const Vec& x) { return -e.dot(x); };
    negated.subgradient = [e](const Vec&) { return Vec(-e); };
    negated.known_lower_bound = -std::min(cap1, cap2);

    const double oracle_tol = std::min(1e-9, opts.eps / 10.0);
    std::vector<SeparationOracleFn> oracles;
    oracles.push_back(reduce_oracle(make_separation_oracle(zonotope_lmo(z1), oracle_tol), frame));
    oracles.push_back(reduce_oracle(make_separation_oracle(zonotope_lmo(z2), oracle_tol), frame));

    out.report = ellipsoid_minimize(oracles, reduce_objective(negated, frame), frame.rank(),
                                    radius, opts);
    if (!out.report.best_point) {
        throw NonconvergenceError(
            "ellipsoid_max_coordinate: no feasible center found, yet the origin is feasible.");
    }
    out.point = frame.lift(*out.report.best_point);
    out.value = out.point[coord];
    return out;
}

}  // namespace zonosvm
