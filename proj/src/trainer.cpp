#include "zonosvm/trainer.hpp"

#include "zonosvm/ellipsoid.hpp"
#include "zonosvm/nearest_point.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace zonosvm {

namespace {

constexpr double kMuSlack = 1e-9;             // feasibility slack on mu * class size
constexpr double kSupportTolFactor = 1e-7;    // alpha > factor * mu marks a support vector
constexpr double kRecoverySlack = 1e-9;       // accepted objective regression in recovery
constexpr Index kAutoEllipsoidMaxSamples = 2000;
constexpr double kPointClassSlack = 1e-9;     // mu * m <= 1 + slack: hull is one point

void validate_mu(const LabeledDataset& ds, double mu) {
    const double min_class = static_cast<double>(
        std::min(ds.positives().size(), ds.negatives().size()));
    if (!std::isfinite(mu) || mu <= 0.0 || mu > 1.0 + kMuSlack ||
        mu * min_class < 1.0 - kMuSlack) {
        throw ValidationError(
            "train: weight cap must lie between 1/min-class-size and 1.");
    }
}

// Canonical reconstruction w = sum_i y_i alpha_i x_i; every consumer of the
// classifier recomputes this with the same expression, so it matches bit for
// bit rather than merely to rounding.
Vec reconstruct_w(const LabeledDataset& ds, const Vec& alpha) {
    Vec signed_alpha(ds.size());
    for (Index i = 0; i < ds.size(); ++i) {
        signed_alpha[i] = alpha[i] * static_cast<double>(ds.label(i));
    }
    return ds.points().transpose() * signed_alpha;
}

Vec alpha_from_hull_weights(const LabeledDataset& ds, const Vec& weights) {
    Vec alpha = Vec::Zero(ds.size());
    const auto& pos = ds.positives();
    const auto& neg = ds.negatives();
    for (std::size_t r = 0; r < pos.size(); ++r) {
        alpha[pos[r]] = weights[static_cast<Index>(r)];
    }
    for (std::size_t r = 0; r < neg.size(); ++r) {
        alpha[neg[r]] = weights[static_cast<Index>(pos.size() + r)];
    }
    return alpha;
}

std::vector<Index> supports_of(const Vec& alpha, double mu) {
    std::vector<Index> s;
    for (Index i = 0; i < alpha.size(); ++i) {
        if (alpha[i] > kSupportTolFactor * mu) s.push_back(i);
    }
    return s;
}

// Projection onto the capped simplex {0 <= z <= cap, sum z = 1}: the clipped
// shift z(t) = clip(y - t, 0, cap) has a nonincreasing sum in t, so bisection
// finds the unique level with sum 1 (feasible because n * cap >= 1).
Vec capped_simplex_project(const Vec& y, double cap) {
    double lo = y.minCoeff() - cap;
    double hi = y.maxCoeff();
    for (int it = 0; it < 128; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double sum = (y.array() - mid).max(0.0).min(cap).sum();
        (sum >= 1.0 ? lo : hi) = mid;
    }
    return (y.array() - lo).max(0.0).min(cap).matrix();
}

// When the capped hulls overlap, every decomposition of a common point is an
// optimal dual, so weights straight from the solver would depend on its
// floating-point path and change under dataset translation. Return the
// canonical member instead: the weights nearest the uniform per-class
// weighting whose reconstruction is as short as the caps allow, computed by
// Dykstra's alternating projections between the per-class capped simplices
// and the zero-reconstruction subspace. Both sets depend only on relative
// geometry once the points are centered, which makes the limit reproducible
// and translation invariant.
Vec canonical_overlap_weights(const LabeledDataset& ds, double mu) {
    const auto& pos = ds.positives();
    const auto& neg = ds.negatives();
    const Index n = ds.size();

    Vec uniform(n);
    for (Index i : pos) uniform[i] = 1.0 / static_cast<double>(pos.size());
    for (Index i : neg) uniform[i] = 1.0 / static_cast<double>(neg.size());

    const auto project_classes = [&](const Vec& y) {
        Vec out(n);
        const auto one_class = [&](const std::vector<Index>& idx) {
            Vec slice(static_cast<Index>(idx.size()));
            for (std::size_t r = 0; r < idx.size(); ++r) {
                slice[static_cast<Index>(r)] = y[idx[r]];
            }
            const Vec proj = capped_simplex_project(slice, mu);
            for (std::size_t r = 0; r < idx.size(); ++r) {
                out[idx[r]] = proj[static_cast<Index>(r)];
            }
        };
        one_class(pos);
        one_class(neg);
        return out;
    };

    // Signed, centered points as columns: the reconstruction of any weights
    // with unit class sums is `signed_pts * alpha` regardless of the center.
    const Vec center = 0.5 * (ds.class_points(+1).colwise().mean() +
                              ds.class_points(-1).colwise().mean())
                           .transpose();
    Mat signed_pts(ds.dim(), n);
    for (Index i = 0; i < n; ++i) {
        signed_pts.col(i) = static_cast<double>(ds.label(i)) * (ds.point(i) - center);
    }

    // The projection is a box-constrained least-squares problem whose dual has
    // only dim + 2 variables (one per reconstruction row and class sum), with
    // primal alpha(lambda) = clip(uniform - rows^T lambda, 0, mu) and concave
    // dual gradient g = rows * alpha(lambda) - rhs. A damped semismooth Newton
    // drive on g reaches machine precision in a few dozen steps.
    const Index m = ds.dim() + 2;
    Mat rows = Mat::Zero(m, n);
    rows.topRows(ds.dim()) = signed_pts;
    for (Index i : pos) rows(ds.dim(), i) = 1.0;
    for (Index i : neg) rows(ds.dim() + 1, i) = 1.0;
    Vec rhs = Vec::Zero(m);
    rhs[ds.dim()] = 1.0;
    rhs[ds.dim() + 1] = 1.0;

    const auto alpha_at = [&](const Vec& lam) {
        return (uniform - rows.transpose() * lam).array().max(0.0).min(mu).matrix().eval();
    };
    const double gtol = 1e-12 * (1.0 + signed_pts.cwiseAbs().maxCoeff());
    Vec lam = Vec::Zero(m);
    Vec alpha = alpha_at(lam);
    Vec g = rows * alpha - rhs;
    double damping = 1e-10;
    bool solved = g.lpNorm<Eigen::Infinity>() <= gtol;
    for (int it = 0; it < 300 && !solved; ++it) {
        // Generalized Jacobian of -g over the coordinates strictly inside the
        // box; clipped coordinates contribute nothing.
        Mat jac = Mat::Zero(m, m);
        const Vec raw = uniform - rows.transpose() * lam;
        for (Index i = 0; i < n; ++i) {
            if (raw[i] > 0.0 && raw[i] < mu) jac += rows.col(i) * rows.col(i).transpose();
        }
        bool stepped = false;
        for (int tries = 0; tries < 40 && !stepped; ++tries) {
            const Vec lam_try =
                lam + (jac + damping * Mat::Identity(m, m)).ldlt().solve(g).eval();
            const Vec alpha_try = alpha_at(lam_try);
            const Vec g_try = rows * alpha_try - rhs;
            if (g_try.squaredNorm() <= g.squaredNorm() * (1.0 - 1e-4) ||
                g_try.lpNorm<Eigen::Infinity>() <= gtol) {
                lam = lam_try;
                alpha = alpha_try;
                g = g_try;
                damping = std::max(0.3 * damping, 1e-12);
                stepped = true;
            } else {
                damping *= 10.0;
            }
        }
        if (!stepped || !lam.allFinite()) break;
        solved = g.lpNorm<Eigen::Infinity>() <= gtol;
    }
    if (solved) {
        // Re-impose the class sums bit-exactly; this moves alpha by at most
        // the solved residual.
        return project_classes(alpha);
    }

    // When the hulls only nearly overlap the constraints are inconsistent and
    // the dual diverges; Dykstra's projections then still settle on the
    // feasible weights nearest the reconstruction subspace.
    Eigen::CompleteOrthogonalDecomposition<Mat> cod(signed_pts);
    Vec boxed = uniform;
    Vec smoothed = boxed - cod.solve(signed_pts * boxed);
    Vec correction = uniform - boxed;
    for (int it = 0; it < 20'000; ++it) {
        const Vec target = smoothed + correction;
        Vec next = project_classes(target);
        correction = target - next;
        const double moved = (next - boxed).lpNorm<Eigen::Infinity>();
        boxed = std::move(next);
        smoothed = boxed - cod.solve(signed_pts * boxed);
        if (moved <= 1e-14) break;
    }
    return boxed;  // exactly box- and sum-feasible; reconstruction is minimal
}

struct DualSolution {
    Vec v;             // minimizer of ||v||^2 over H+ (-) H-
    double gap = 0.0;  // solver certificate
    long iterations = 0;
    std::optional<Vec> hull_weights;  // plus-hull weights then minus-hull weights
};

DualSolution solve_dual_frank_wolfe(const LabeledDataset& ds, double mu,
                                    const TrainOptions& opts) {
    ReducedHull plus(ds.class_points(+1), mu);
    ReducedHull minus(ds.class_points(-1), mu);
    NearestPointOptions np;
    np.max_iterations = opts.max_iterations;
    NearestPointResult res = nearest_point(difference_lmo(std::move(plus), std::move(minus)),
                                           Vec::Zero(ds.dim()), opts.eps * opts.eps, np);
    DualSolution sol;
    sol.v = std::move(res.point);
    sol.gap = res.duality_gap;
    sol.iterations = res.iterations;
    sol.hull_weights = std::move(res.weights);
    return sol;
}

DualSolution solve_dual_ellipsoid(const LabeledDataset& ds, double mu,
                                  const TrainOptions& opts) {
    const Mat& xp = ds.class_points(+1);
    const Mat& xm = ds.class_points(-1);
    const Vec centroid_plus = xp.colwise().mean().transpose();
    const Vec centroid_minus = xm.colwise().mean().transpose();
    const Vec origin = centroid_plus - centroid_minus;

    // A class whose cap barely covers mass 1 is a single point (the centroid)
    // and contributes no directions to the affine hull of the difference body.
    const auto class_directions = [&](const Mat& x, const Vec& centroid) {
        if (mu * static_cast<double>(x.rows()) <= 1.0 + kPointClassSlack) {
            return Mat(ds.dim(), 0);
        }
        return Mat((x.rowwise() - centroid.transpose()).transpose());
    };
    const Mat dir_plus = class_directions(xp, centroid_plus);
    const Mat dir_minus = class_directions(xm, centroid_minus);
    Mat directions(ds.dim(), dir_plus.cols() + dir_minus.cols());
    directions.leftCols(dir_plus.cols()) = dir_plus;
    directions.rightCols(dir_minus.cols()) = dir_minus;
    const AffineFrame frame = frame_from_directions(origin, directions);

    DualSolution sol;
    if (frame.rank() == 0) {
        sol.v = origin;
        return sol;
    }

    const auto hull_reach = [&](const Mat& x) {
        double sum = 0.0;
        double peak = 0.0;
        for (Index i = 0; i < x.rows(); ++i) {
            const double norm = x.row(i).norm();
            sum += mu * norm;
            peak = std::max(peak, norm);
        }
        return std::min(sum, peak);
    };
    const double radius = hull_reach(xp) + hull_reach(xm) + origin.norm() + 1.0;

    ConvexObjective norm2;
    norm2.value = [](const Vec& x) { return x.squaredNorm(); };
    norm2.subgradient = [](const Vec& x) { return Vec(2.0 * x); };
    norm2.known_lower_bound = 0.0;

    const double oracle_tol = std::min(1e-9, opts.eps / 100.0);
    std::vector<SeparationOracleFn> oracles;
    oracles.push_back(reduce_oracle(
        make_separation_oracle(
            difference_lmo(ReducedHull(xp, mu), ReducedHull(xm, mu)), oracle_tol),
        frame));

    EllipsoidOptions eopts;
    eopts.eps = opts.eps;
    const SolveReport report =
        ellipsoid_minimize(oracles, reduce_objective(norm2, frame), frame.rank(), radius, eopts);
    if (report.termination == EllipsoidTermination::iteration_cap) {
        throw NonconvergenceError("train: ellipsoid solver hit its iteration cap.");
    }
    if (!report.best_point) {
        throw NonconvergenceError("train: ellipsoid solver found no feasible center.");
    }
    sol.v = frame.lift(*report.best_point);
    sol.gap = report.certified_gap;
    sol.iterations = report.iterations;
    return sol;
}

}  // namespace

TrainedClassifier train(const LabeledDataset& ds, double mu, const TrainOptions& opts,
                        TrainDiagnostics* diagnostics) {
    validate_mu(ds, mu);
    if (!(opts.eps > 0.0)) {
        throw std::invalid_argument("train: eps must be positive.");
    }

    SolverKind solver = opts.solver;
    if (solver == SolverKind::automatic) {
        solver = ds.size() <= kAutoEllipsoidMaxSamples ? SolverKind::ellipsoid
                                                       : SolverKind::nearest_point;
    }
    DualSolution sol = solver == SolverKind::ellipsoid ? solve_dual_ellipsoid(ds, mu, opts)
                                                       : solve_dual_frank_wolfe(ds, mu, opts);

    TrainedClassifier c;
    c.mu = mu;
    c.bias_strategy = opts.bias;
    c.xi = Vec::Zero(ds.size());

    bool witness_fallback = false;
    const auto witness_weights = [&]() -> Vec {
        if (sol.hull_weights) return *sol.hull_weights;
        // The ellipsoid path carries no feasible weights; one Frank-Wolfe run
        // on the same body provides them.
        ReducedHull plus(ds.class_points(+1), mu);
        ReducedHull minus(ds.class_points(-1), mu);
        NearestPointOptions np;
        np.max_iterations = opts.max_iterations;
        return nearest_point(difference_lmo(std::move(plus), std::move(minus)),
                             Vec::Zero(ds.dim()), opts.eps * opts.eps, np)
            .weights;
    };

    const double f_found = sol.v.squaredNorm();
    bool degenerate = sol.v.norm() <= opts.eps;

    if (!degenerate) {
        // Recover the dual weights through the transition structure of the
        // found direction: capped and zero weights are pinned and the
        // transitional face is re-solved exactly. The recovered direction is
        // sharper than the solver's center, so re-running the recovery on it
        // refines the face; iterate while the objective keeps improving.
        const auto recover_once = [&](const Vec& dir) {
            const TransitionReport tr = transition_decompose(ds, mu, dir);
            Vec alpha = Vec::Zero(ds.size());
            Vec fixed = Vec::Zero(ds.dim());
            for (Index i : tr.plus.capped) {
                alpha[i] = mu;
                fixed += mu * ds.point(i);
            }
            for (Index i : tr.minus.capped) {
                alpha[i] = mu;
                fixed -= mu * ds.point(i);
            }
            const auto face_points = [&](const std::vector<Index>& idx) {
                Mat pts(static_cast<Index>(idx.size()), ds.dim());
                for (std::size_t r = 0; r < idx.size(); ++r) {
                    pts.row(static_cast<Index>(r)) = ds.point(idx[r]);
                }
                return pts;
            };
            double s_plus = 1.0 - mu * static_cast<double>(tr.plus.capped.size());
            double s_minus = 1.0 - mu * static_cast<double>(tr.minus.capped.size());
            if (tr.plus.transitional.empty() || s_plus < 0.0) s_plus = 0.0;
            if (tr.minus.transitional.empty() || s_minus < 0.0) s_minus = 0.0;

            NearestPointOptions np;
            np.max_iterations = opts.max_iterations;
            const NearestPointResult face = nearest_point(
                difference_capped_lmo(face_points(tr.plus.transitional), mu, s_plus,
                                      face_points(tr.minus.transitional), mu, s_minus),
                -fixed, 1e-18, np);
            for (std::size_t r = 0; r < tr.plus.transitional.size(); ++r) {
                alpha[tr.plus.transitional[r]] = face.weights[static_cast<Index>(r)];
            }
            for (std::size_t r = 0; r < tr.minus.transitional.size(); ++r) {
                alpha[tr.minus.transitional[r]] =
                    face.weights[static_cast<Index>(tr.plus.transitional.size() + r)];
            }
            return alpha;
        };

        constexpr int kPolishRounds = 8;
        Vec alpha_best, w_best;
        double f_best = std::numeric_limits<double>::infinity();
        Vec dir = sol.v;
        for (int round = 0; round < kPolishRounds; ++round) {
            Vec alpha = recover_once(dir);
            Vec w = reconstruct_w(ds, alpha);
            const double f = w.squaredNorm();
            if (w.norm() <= opts.eps) {
                degenerate = true;
                break;
            }
            if (f < f_best - 1e-12 * (1.0 + f)) {
                f_best = f;
                alpha_best = std::move(alpha);
                w_best = std::move(w);
                dir = w_best;
            } else {
                break;
            }
        }
        if (!degenerate) {
            if (f_best > f_found + kRecoverySlack * (1.0 + f_found)) {
                // Either the transition structure misidentified the optimal
                // face or the solver's value undershoots (its centers are
                // feasible only up to the oracle tolerance). The solver's
                // witness weights are exactly feasible, so adopt them only
                // when they actually beat the recovered face solution.
                Vec alpha_witness = alpha_from_hull_weights(ds, witness_weights());
                Vec w_witness = reconstruct_w(ds, alpha_witness);
                if (w_witness.squaredNorm() < f_best - 1e-12 * (1.0 + f_best)) {
                    witness_fallback = true;
                    alpha_best = std::move(alpha_witness);
                    w_best = std::move(w_witness);
                }
            }
            if (w_best.norm() <= opts.eps) {
                degenerate = true;
            } else {
                c.alpha = std::move(alpha_best);
                c.w = std::move(w_best);
            }
        }
    }

    if (degenerate) {
        c.alpha = canonical_overlap_weights(ds, mu);
        c.w = Vec::Zero(ds.dim());
        c.degenerate = true;
        c.support_indices = supports_of(c.alpha, mu);
        if (diagnostics) {
            diagnostics->solver_used =
                solver == SolverKind::ellipsoid ? "ellipsoid" : "nearest-point";
            diagnostics->iterations = sol.iterations;
            diagnostics->duality_gap = sol.gap;
            diagnostics->squared_norm = 0.0;
            diagnostics->witness_fallback = witness_fallback;
        }
        return c;
    }

    ReducedHull plus(ds.class_points(+1), mu);
    ReducedHull minus(ds.class_points(-1), mu);
    c.b_plus = -hull_extreme(plus, -c.w).objective;  // min over H+ of w.x
    c.b_minus = hull_extreme(minus, c.w).objective;  // max over H- of w.x
    const double norm = c.w.norm();
    c.margin = (c.b_plus - c.b_minus) / norm;
    const double halfway = 0.5 * (c.b_plus + c.b_minus);
    c.b = opts.bias == BiasStrategy::halfway ? halfway : line_search_bias(ds, c.w, halfway);

    for (Index i = 0; i < ds.size(); ++i) {
        const double proj = c.w.dot(ds.point(i));
        c.xi[i] = ds.label(i) > 0 ? std::max(0.0, c.b_plus - proj)
                                  : std::max(0.0, proj - c.b_minus);
    }
    c.support_indices = supports_of(c.alpha, mu);

    if (diagnostics) {
        diagnostics->solver_used =
            solver == SolverKind::ellipsoid ? "ellipsoid" : "nearest-point";
        diagnostics->iterations = sol.iterations;
        diagnostics->duality_gap = sol.gap;
        diagnostics->squared_norm = c.w.squaredNorm();
        diagnostics->witness_fallback = witness_fallback;
    }
    return c;
}

double decision_value(const TrainedClassifier& c, const Vec& x) {
    if (c.w.size() == 0 || c.w.isZero(0.0)) {
        throw UndefinedClassifierError(
            "decision_value: classifier is degenerate (zero direction).");
    }
    if (x.size() != c.w.size()) {
        throw std::invalid_argument("decision_value: point dimension mismatch.");
    }
    return c.w.dot(x) - c.b;
}

double line_search_bias(const LabeledDataset& ds, const Vec& w, double halfway_bias) {
    if (w.size() != ds.dim()) {
        throw std::invalid_argument("line_search_bias: direction dimension mismatch.");
    }
    std::vector<double> pos, neg;
    for (Index i = 0; i < ds.size(); ++i) {
        (ds.label(i) > 0 ? pos : neg).push_back(w.dot(ds.point(i)));
    }
    std::sort(pos.begin(), pos.end());
    std::sort(neg.begin(), neg.end());

    // A positive point errs when w.x <= b, a negative one when w.x >= b.
    const auto errors_at = [&](double b) {
        const long pos_err = std::upper_bound(pos.begin(), pos.end(), b) - pos.begin();
        const long neg_err = neg.end() - std::lower_bound(neg.begin(), neg.end(), b);
        return pos_err + neg_err;
    };

    std::vector<double> all;
    all.reserve(pos.size() + neg.size());
    all.insert(all.end(), pos.begin(), pos.end());
    all.insert(all.end(), neg.begin(), neg.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());

    std::vector<double> candidates;
    candidates.push_back(halfway_bias);
    candidates.push_back(all.front() - 1.0);
    candidates.push_back(all.back() + 1.0);
    for (std::size_t i = 0; i < all.size(); ++i) {
        candidates.push_back(all[i]);
        if (i + 1 < all.size()) candidates.push_back(0.5 * (all[i] + all[i + 1]));
    }

    double best_b = halfway_bias;
    long best_err = errors_at(halfway_bias);
    for (double b : candidates) {
        const long err = errors_at(b);
        if (err < best_err ||
            (err == best_err &&
             (std::abs(b - halfway_bias) < std::abs(best_b - halfway_bias) ||
              (std::abs(b - halfway_bias) == std::abs(best_b - halfway_bias) && b < best_b)))) {
            best_err = err;
            best_b = b;
        }
    }
    return best_b;
}

KktReport kkt_check(const LabeledDataset& ds, double mu, const Vec& w, double b_plus,
                    double b_minus, const Vec& alpha, const Vec& xi, double tol) {
    if (alpha.size() != ds.size() || xi.size() != ds.size() || w.size() != ds.dim()) {
        throw std::invalid_argument("kkt_check: size mismatch.");
    }
    if (!(tol > 0.0)) {
        throw std::invalid_argument("kkt_check: tolerance must be positive.");
    }
    KktReport report;
    double viol_dual = 0.0, viol_primal = 0.0, viol_recon = 0.0, viol_comp = 0.0;

    double sum_plus = 0.0, sum_minus = 0.0;
    for (Index i = 0; i < ds.size(); ++i) {
        viol_dual = std::max({viol_dual, -alpha[i] / mu, (alpha[i] - mu) / mu});
        (ds.label(i) > 0 ? sum_plus : sum_minus) += alpha[i];
    }
    viol_dual = std::max({viol_dual, std::abs(sum_plus - 1.0), std::abs(sum_minus - 1.0)});

    const Vec proj = ds.points() * w;
    const double bias_scale = 1.0 + std::abs(b_plus) + std::abs(b_minus);
    for (Index i = 0; i < ds.size(); ++i) {
        const double scale = 1.0 + std::abs(proj[i]) + std::abs(ds.label(i) > 0 ? b_plus : b_minus);
        const double slab = ds.label(i) > 0 ? (b_plus - xi[i] - proj[i])
                                            : (proj[i] - b_minus - xi[i]);
        viol_primal = std::max({viol_primal, slab / scale, -xi[i]});
        // xi may be positive only where alpha is capped.
        viol_comp = std::max(viol_comp,
                             std::min(xi[i] / bias_scale, (mu - alpha[i]) / mu));
    }

    Vec signed_alpha(ds.size());
    for (Index i = 0; i < ds.size(); ++i) {
        signed_alpha[i] = alpha[i] * static_cast<double>(ds.label(i));
    }
    const Vec r = w - ds.points().transpose() * signed_alpha;
    viol_recon = r.cwiseAbs().maxCoeff() / (1.0 + w.cwiseAbs().maxCoeff());

    // Within each class the weights must be monotone in the projection: the
    // capped points sit furthest on the wrong side, then the (all equal)
    // transitional projections, then the zero-weight points.
    const auto monotone = [&](const std::vector<Index>& members, double sign) {
        // Orientation: p is larger the further the point sits on its class's
        // wrong side, so capped weights need the largest p, zero the smallest.
        double min_capped = std::numeric_limits<double>::infinity();
        double max_zero = -std::numeric_limits<double>::infinity();
        double min_int = std::numeric_limits<double>::infinity();
        double max_int = -std::numeric_limits<double>::infinity();
        double scale = 1.0;
        for (Index i : members) {
            const double p = sign * proj[i];
            scale = std::max(scale, 1.0 + std::abs(p));
            if (alpha[i] >= mu * (1.0 - tol)) {
                min_capped = std::min(min_capped, p);
            } else if (alpha[i] <= mu * tol) {
                max_zero = std::max(max_zero, p);
            } else {
                min_int = std::min(min_int, p);
                max_int = std::max(max_int, p);
            }
        }
        double v = 0.0;
        if (std::isfinite(min_capped) && std::isfinite(max_int))
            v = std::max(v, max_int - min_capped);
        if (std::isfinite(min_int) && std::isfinite(max_zero))
            v = std::max(v, max_zero - min_int);
        if (std::isfinite(min_capped) && std::isfinite(max_zero))
            v = std::max(v, max_zero - min_capped);
        if (std::isfinite(min_int) && std::isfinite(max_int))
            v = std::max(v, max_int - min_int);
        return std::max(0.0, v) / scale;
    };
    // Positives are wrong-side when the projection is small: flip the sign so
    // "capped has the largest value" holds for both classes.
    viol_comp = std::max(viol_comp, monotone(ds.positives(), -1.0));
    viol_comp = std::max(viol_comp, monotone(ds.negatives(), +1.0));

    report.dual_feasible = viol_dual <= tol;
    report.primal_feasible = viol_primal <= tol;
    report.reconstructs = viol_recon <= tol;
    report.complementary = viol_comp <= tol;
    report.max_violation = std::max({viol_dual, viol_primal, viol_recon, viol_comp});
    return report;
}

KktReport kkt_check(const LabeledDataset& ds, const TrainedClassifier& c, double tol) {
    return kkt_check(ds, c.mu, c.w, c.b_plus, c.b_minus, c.alpha, c.xi, tol);
}

}  // namespace zonosvm
