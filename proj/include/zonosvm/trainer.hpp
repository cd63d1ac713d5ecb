#pragma once

#include "zonosvm/common.hpp"
#include "zonosvm/dataset.hpp"
#include "zonosvm/lmo.hpp"

#include <optional>
#include <string>
#include <vector>

namespace zonosvm {

enum class BiasStrategy { halfway, line_search };
enum class SolverKind { automatic, ellipsoid, nearest_point };

struct TrainedClassifier {
    Vec w;
    double b_plus = 0.0;   // supporting value of the positive hull: min w.x over H+
    double b_minus = 0.0;  // supporting value of the negative hull: max w.x over H-
    double b = 0.0;        // decision bias per bias_strategy
    double margin = 0.0;   // (b_plus - b_minus) / ||w||, 0 when degenerate
    double mu = 0.0;
    Vec alpha;             // n dual weights in dataset order
    Vec xi;                // n slack values in dataset order
    std::vector<Index> support_indices;  // alpha_i > 1e-7 * mu, ascending
    BiasStrategy bias_strategy = BiasStrategy::halfway;
    bool degenerate = false;  // hulls intersect at this mu: margin 0, w = 0
};

struct TrainOptions {
    BiasStrategy bias = BiasStrategy::halfway;
    double eps = 1e-7;  // solver tolerance; ||v*|| <= eps declares margin 0
    SolverKind solver = SolverKind::automatic;
    long max_iterations = 1'000'000;
};

struct TrainDiagnostics {
    std::string solver_used;      // "ellipsoid" | "nearest-point"
    long iterations = 0;
    double duality_gap = 0.0;     // certificate from the solver
    double squared_norm = 0.0;    // ||w||^2 of the recovered solution
    bool witness_fallback = false;  // recovery fell back to solver witness weights
};

// Solves the dual min ||v||^2 over H+ (-) H- at the given mu, then recovers
// the weights through the slab's transition structure and recomputes w from
// them, so w always reconstructs from alpha exactly. mu must lie in
// [1 / min(|I+|, |I-|), 1]. Degenerate problems (the capped hulls overlap, so
// w = 0 and any common point decomposes optimally) return the canonical dual
// weights: the feasible weights nearest the uniform per-class weighting,
// which makes alpha reproducible and translation invariant instead of an
// accident of the solver's path. Throws NonconvergenceError if the solver
// hits its iteration cap.
TrainedClassifier train(const LabeledDataset& ds, double mu, const TrainOptions& opts = {},
                        TrainDiagnostics* diagnostics = nullptr);

// w.x - b. Throws UndefinedClassifierError when w == 0.
double decision_value(const TrainedClassifier& c, const Vec& x);

// Bias minimizing the number of training errors for the fixed direction w,
// scanning the projection values and midpoints between consecutive distinct
// ones; ties break toward halfway_bias (then toward the smaller bias).
double line_search_bias(const LabeledDataset& ds, const Vec& w, double halfway_bias);

// Karush-Kuhn-Tucker audit of a solution at tolerance tol.
struct KktReport {
    bool dual_feasible = false;       // 0 <= alpha <= mu, per-class sums = 1
    bool primal_feasible = false;     // slab holds with slacks, xi >= 0
    bool reconstructs = false;        // w == sum_+ alpha x - sum_- alpha x
    bool complementary = false;       // interior alpha on its class transition,
                                      // xi > 0 only at alpha = mu
    double max_violation = 0.0;       // worst scaled violation over all checks
    bool pass() const { return dual_feasible && primal_feasible && reconstructs && complementary; }
};
KktReport kkt_check(const LabeledDataset& ds, double mu, const Vec& w, double b_plus,
                    double b_minus, const Vec& alpha, const Vec& xi, double tol);
KktReport kkt_check(const LabeledDataset& ds, const TrainedClassifier& c, double tol);

}  // namespace zonosvm
