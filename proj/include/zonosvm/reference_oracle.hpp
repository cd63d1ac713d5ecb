#pragma once

#include "zonosvm/common.hpp"
#include "zonosvm/dataset.hpp"
#include "zonosvm/lmo.hpp"

#include <vector>

namespace zonosvm {

// Deliberately brute-force ground truths for cross-checking the fast solvers.
// Implementations share no code paths with the production LMOs or solvers.
struct OracleConfig {
    Index max_n = 10;            // refuse anything bigger
    int direction_samples = 512;  // random directions for the vertex search
    std::uint64_t seed = 0x5eedf00dULL;
};

// All vertices of a reduced hull with mu = 1/k: each k-subset of points that
// is strictly linearly separable from the rest contributes its average.
// Separability is checked by direction sampling (pairwise difference
// directions, their d<=3 normals/cross products, seeded random directions,
// plus any extra_directions) with an exact strict comparison per candidate.
// Requires mu = 1/k for integer k and m <= max_n.
std::vector<HullVertexWitness> enumerate_hull_vertices(const ReducedHull& h,
                                                       const OracleConfig& cfg = {},
                                                       const std::vector<Vec>& extra_directions = {});

// Exhaustive max of w.z over the zonotope: tries all 2^m corner weight
// patterns. Requires m <= max_n.
double brute_lmo(const Zonotope& z, const Vec& w, const OracleConfig& cfg = {});

// Exhaustive max of w.x over a reduced hull with mu = 1/k: enumerates hull
// vertices (seeding the search with w itself, which makes the value exact
// whenever the top-k set under w is strict) and takes the best.
double brute_lmo(const ReducedHull& h, const Vec& w, const OracleConfig& cfg = {});

// Ground truth for the dual: enumerates every assignment of each weight to
// {0, mu, free} with at most d+2 free per class, solves the resulting
// equality-constrained least squares exactly, and keeps the best feasible
// candidate. Requires n <= max_n.
struct BruteNearestResult {
    double squared_norm = 0.0;  // min ||sum_+ a x - sum_- a x||^2
    Vec alpha;                  // an optimal feasible weight vector
    Vec point;                  // the optimal difference vector
};
BruteNearestResult brute_nearest(const LabeledDataset& ds, double mu,
                                 const OracleConfig& cfg = {});

}  // namespace zonosvm
