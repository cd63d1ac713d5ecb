#pragma once

#include "zonosvm/common.hpp"
#include "zonosvm/lmo.hpp"

#include <functional>
#include <limits>
#include <memory>
#include <vector>

namespace zonosvm {

// A linear maximization oracle for a convex body: maps a direction to the
// extreme point argmax_z w.z together with the generator weights producing
// it. Handles are pure and safe to call concurrently.
struct LmoResult {
    Vec point;
    Vec weights;
};
using LmoHandle = std::function<LmoResult(const Vec& direction)>;

LmoHandle segment_lmo(Vec a, Vec b);          // weights = (1-t, t), point = a + t(b-a)
LmoHandle zonotope_lmo(Zonotope z);
LmoHandle hull_lmo(ReducedHull h);
LmoHandle capped_simplex_lmo(Mat pts, double cap, double total);
// Minkowski difference of two reduced hulls; weights are the plus-hull
// weights followed by the minus-hull weights.
LmoHandle difference_lmo(ReducedHull plus, ReducedHull minus);
LmoHandle difference_capped_lmo(Mat plus_pts, double plus_cap, double plus_total,
                                Mat minus_pts, double minus_cap, double minus_total);

// Pairwise Frank-Wolfe iteration for min ||v - target||^2 over the body given
// by an LMO. Keeps the iterate as an explicit convex combination of atoms, so
// every iterate has feasible witness weights by construction. Retargeting
// keeps the atom set: separation oracles reuse it as a warm start.
class PairwiseFrankWolfe {
public:
    PairwiseFrankWolfe(LmoHandle lmo, Vec target);

    void set_target(const Vec& target);
    // One step: refreshes the duality gap with a fresh LMO call, then moves
    // along the best pairwise (or plain Frank-Wolfe) direction with exact
    // line search. Returns the gap measured at the start of the step.
    double step();

    const Vec& point() const { return v_; }
    const Vec& target() const { return target_; }
    double squared_distance() const { return (v_ - target_).squaredNorm(); }
    // max_z (v - target).(v - z), from the most recent step's LMO call.
    double duality_gap() const { return gap_; }
    long iterations() const { return iterations_; }
    // Largest squared point norm seen; used for floating-point gap floors.
    double scale() const { return scale_; }

    // Exact recombination of the atoms: point and generator weights.
    LmoResult recombine() const;

private:
    struct Atom {
        Vec point;
        Vec weights;
        double lambda = 0.0;
    };

    void add_or_merge(const LmoResult& s, double gamma);
    void refresh_from_atoms();

    LmoHandle lmo_;
    Vec target_;
    Vec v_;
    std::vector<Atom> atoms_;
    double gap_ = std::numeric_limits<double>::infinity();
    double scale_ = 0.0;
    long iterations_ = 0;
};

struct NearestPointResult {
    Vec point;                // nearest point found
    double squared_distance = 0.0;
    Vec weights;              // feasible generator weights reproducing point
    double duality_gap = 0.0;
    long iterations = 0;
};

struct NearestPointOptions {
    long max_iterations = 1'000'000;
    // Called after every step with (iteration, squared distance, duality gap).
    std::function<void(long, double, double)> on_iteration;
};

class NearestPointNonconvergence : public NonconvergenceError {
public:
    NearestPointNonconvergence(std::string what, NearestPointResult best_so_far)
        : NonconvergenceError(std::move(what)), best(std::move(best_so_far)) {}
    NearestPointResult best;
};

// Minimizes ||v - target||^2 over the body. Terminates when the duality gap
// max_z (v - target).(v - z) certifies the result within tol (tol > 0,
// absolute). Throws NearestPointNonconvergence past the iteration cap.
NearestPointResult nearest_point(const LmoHandle& lmo, const Vec& target, double tol = 1e-9,
                                 const NearestPointOptions& opts = {});

// Separation oracle answer: either `inside` (distance <= tol, except when
// floating-point progress stalls first and the certified distance bound
// cannot prove q outside) or a hyperplane normal.x <= offset that the whole
// body satisfies exactly while normal.q - offset = separation_margin > 0.
struct SeparationResult {
    enum class Kind { inside, hyperplane };
    Kind kind = Kind::inside;
    double distance = 0.0;  // ||v* - q|| estimate
    Vec normal;             // unit length (hyperplane case)
    double offset = 0.0;
    double separation_margin = 0.0;
    Vec nearest;            // nearest body point found
};
using SeparationOracleFn = std::function<SeparationResult(const Vec& q)>;

// Builds a separation oracle from the body's LMO by running the nearest-point
// iteration adaptively: inside when dist <= tol, hyperplane once the gap
// certifies a positive-margin cut (the certifying LMO call doubles as the
// post-hoc hyperplane verification). Every query answers within a bounded
// step budget: a query the iteration cannot resolve is answered from the
// best certificate seen, so emitted hyperplanes are always exactly valid
// while inside answers may carry `distance` above tol when the certified
// bounds cannot prove the query outside. The returned callable is internally
// synchronized and warm-starts across queries.
SeparationOracleFn make_separation_oracle(LmoHandle lmo, double tol = 1e-9);

}  // namespace zonosvm
