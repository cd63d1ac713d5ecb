#pragma once

#include "zonosvm/common.hpp"
#include "zonosvm/lmo.hpp"
#include "zonosvm/nearest_point.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace zonosvm {

// E = { x : (x - center)' shape^{-1} (x - center) <= 1 }, shape symmetric PD.
struct EllipsoidState {
    Vec center;
    Mat shape;
    long iteration = 0;
};

// A cut applied at the current center: feasibility cuts come from a violated
// separation oracle, objective cuts from the subgradient at a feasible center.
struct CutRequest {
    enum class Kind { feasibility, objective };
    Kind kind = Kind::feasibility;
    Vec normal;
    double offset = 0.0;
};

struct ConvexObjective {
    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> subgradient;
    // Optional a-priori lower bound (e.g. 0 for a squared norm); tightens the
    // certified gap without extra work.
    double known_lower_bound = -std::numeric_limits<double>::infinity();
};

enum class EllipsoidTermination { tolerance_met, volume_exhausted, iteration_cap };

struct EllipsoidOptions {
    double eps = 1e-7;
    // <= 0 selects the cap 2k(k+1) ln(R/eps) + 1000.
    long max_iterations = 0;
    // Observation hook, called after every update with the post-update state
    // and the cut that produced it.
    std::function<void(const EllipsoidState&, const CutRequest&)> on_iteration;
};

struct SolveReport {
    std::optional<Vec> best_point;  // best center all oracles accepted
    double best_value = std::numeric_limits<double>::infinity();
    double certified_gap = std::numeric_limits<double>::infinity();
    long iterations = 0;
    EllipsoidTermination termination = EllipsoidTermination::iteration_cap;
    bool feasible_found = false;
    EllipsoidState final_state;
};

// Cutting-plane ellipsoid with a sliding objective: starting from the ball of
// radius R about the origin in R^dim, repeatedly cut with a violated oracle's
// hyperplane, or with the objective subgradient when all oracles accept the
// center. Objective cuts pass through the center, so their determinant shrink
// is the exact central-cut factor (k^2/(k^2-1))^k (k-1)/(k+1); feasibility
// cuts use the full depth of the oracle's offset, which both shrinks faster
// and keeps runs of near-parallel cuts from stretching the ellipsoid into a
// needle. Stops when the subgradient bound certifies best - lower_bound <=
// eps, when the volume falls below the eps-ball volume or a feasibility cut's
// depth exceeds the ellipsoid (infeasibility verdict if nothing was
// feasible), or at the iteration cap. Throws ConditioningError if the shape
// matrix loses positive definiteness and one re-inflation does not recover
// it.
SolveReport ellipsoid_minimize(const std::vector<SeparationOracleFn>& oracles,
                               const ConvexObjective& objective, Index dim, double radius,
                               const EllipsoidOptions& opts = {});

// Determinant shrink factor of one central cut in dimension k.
double central_cut_det_factor(Index k);

// Orthonormal coordinates for the affine hull of a body: x = origin + basis y.
// Running the ellipsoid inside the frame keeps flat bodies full-dimensional.
struct AffineFrame {
    Vec origin;
    Mat basis;  // k x r, orthonormal columns; r == 0 means the single point `origin`
    Index rank() const { return basis.cols(); }
    Vec lift(const Vec& y) const { return origin + basis * y; }
    Vec project(const Vec& x) const { return basis.transpose() * (x - origin); }
};

// Frame spanned by the given direction vectors (columns), anchored at origin.
// Directions with relative norm below rank_tol are treated as zero.
AffineFrame frame_from_directions(Vec origin, const Mat& directions, double rank_tol = 1e-10);

// Orthonormal basis of span(a) ∩ span(b), each given by orthonormal columns.
Mat span_intersection(const Mat& a, const Mat& b, double tol = 1e-10);

// Oracle/objective wrappers living in the frame's coordinates. Cuts pull
// back as a_red = basis' a, renormalized to unit length.
SeparationOracleFn reduce_oracle(SeparationOracleFn full, const AffineFrame& frame);
ConvexObjective reduce_objective(ConvexObjective full, const AffineFrame& frame);

// max x[coord] over the intersection of two zonotopes, solved by the central
// cut ellipsoid with one nearest-point separation oracle per zonotope, inside
// the intersection of their linear spans. Both zonotopes contain the origin,
// so the feasible set is never empty.
struct MaxCoordinateResult {
    double value = 0.0;
    Vec point;
    SolveReport report;
};
MaxCoordinateResult ellipsoid_max_coordinate(const Zonotope& z1, const Zonotope& z2, Index coord,
                                             const EllipsoidOptions& opts = {});

}  // namespace zonosvm
