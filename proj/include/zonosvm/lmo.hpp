#pragma once

#include "zonosvm/common.hpp"
#include "zonosvm/dataset.hpp"

#include <vector>

namespace zonosvm {

// Minkowski sum of segments: { sum_i a_i v_i : 0 <= a_i <= u_i }.
struct Zonotope {
    Mat generators;  // m x k, one generator per row
    Vec upper;       // m non-negative caps

    Zonotope(Mat gens, Vec caps);
    Index count() const { return generators.rows(); }
    Index dim() const { return generators.cols(); }
};

// Reduced convex hull: { sum_i a_i x_i : sum_i a_i = 1, 0 <= a_i <= mu }.
// Non-empty iff mu * m >= 1; the constructor rejects anything below that
// (up to a small floating slack) and mu outside (0, 1].
struct ReducedHull {
    Mat points;  // m x k, one point per row
    double mu;

    ReducedHull(Mat pts, double cap);
    Index count() const { return points.rows(); }
    Index dim() const { return points.cols(); }
};

// Result of a linear maximization over a body: the witness weights, the
// extreme point they produce, and the achieved objective w.point.
struct HullVertexWitness {
    Vec weights;
    Vec point;
    double objective = 0.0;
};

// argmax of w.z over the zonotope: a_i = u_i where w.v_i > 0, else 0
// (ties at w.v_i == 0 resolve to 0). One pass, O(mk).
HullVertexWitness zonotope_extreme(const Zonotope& z, const Vec& w);

// argmax of w.x over the reduced hull: fills weight mu greedily by descending
// projection (ties broken by ascending row index); at most one weight is
// strictly between 0 and mu. Throws std::invalid_argument for a zero
// direction or a dimension mismatch.
HullVertexWitness hull_extreme(const ReducedHull& h, const Vec& w);

// Generalization used internally and by the trainer's recovery step:
// argmax of w.x over { sum a_i x_i : sum a_i = total, 0 <= a_i <= cap }.
// total == 0 yields the zero point with zero weights.
HullVertexWitness capped_simplex_extreme(const Mat& pts, double cap, double total, const Vec& w);

// argmax of w.(v_plus - v_minus) over the Minkowski difference of two reduced
// hulls: compose hull_extreme on `plus` with direction w and on `minus` with
// direction -w.
struct DifferenceExtreme {
    HullVertexWitness plus, minus;
    Vec point;  // plus.point - minus.point
    double objective = 0.0;
};
DifferenceExtreme difference_extreme(const ReducedHull& plus, const ReducedHull& minus,
                                     const Vec& w);

// Per-class transition structure of a direction w at cap mu: class members
// sorted by how "wrong" each point is (for the positive class ascending w.x,
// for the negative class descending), the projection value t where greedy
// weight mass 1 runs out, and the index sets this induces. Indices are
// dataset indices. A point is transitional when |w.x - t| <= 1e-7 * (1+|t|);
// capped/zero hold the remaining wrong-side/right-side points.
struct ClassTransition {
    std::vector<Index> order;  // class members, most wrong-side first
    double t = 0.0;
    std::vector<Index> capped, transitional, zero;
};
struct TransitionReport {
    ClassTransition plus, minus;
};
TransitionReport transition_decompose(const LabeledDataset& ds, double mu, const Vec& w);

}  // namespace zonosvm
