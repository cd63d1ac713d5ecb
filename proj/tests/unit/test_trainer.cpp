#include "doctest.h"

#include "zonosvm/dataset.hpp"
#include "zonosvm/separability.hpp"
#include "zonosvm/trainer.hpp"

#include <cmath>
#include <vector>

using namespace zonosvm;

namespace {

LabeledDataset corners_dataset() {
    Mat x(4, 2);
    x << 2, 0, 3, 1, 0, 0, -1, 1;
    return LabeledDataset(x, {1, 1, -1, -1});
}

// Eight points in the plane whose slab at cap 0.4 has a vertical boundary
// pair: six support vectors, two of them capped per class.
LabeledDataset slab_dataset() {
    Mat x(8, 2);
    x << 1, 0,      // 0: transitional (tied at t with row 1)
        1, 2,       // 1: transitional
        0.6, 1,     // 2: capped
        2.5, 1,     // 3: zero weight
        0, 1,       // 4: transitional
        0.4, 0.3,   // 5: capped
        0.4, 1.7,   // 6: capped
        -1.5, 1;    // 7: zero weight
    return LabeledDataset(x, {1, 1, 1, 1, -1, -1, -1, -1});
}

LabeledDataset coincident_centroids() {
    Mat x(4, 1);
    x << -1, 1, -2, 2;
    return LabeledDataset(x, {1, 1, -1, -1});
}

}  // namespace

TEST_SUITE("trainer") {

TEST_CASE("four-corner instance trains to the known maximum margin") {
    LabeledDataset ds = corners_dataset();
    for (SolverKind solver : {SolverKind::nearest_point, SolverKind::ellipsoid}) {
        CAPTURE(static_cast<int>(solver));
        TrainOptions opts;
        opts.solver = solver;
        TrainDiagnostics diag;
        TrainedClassifier c = train(ds, 1.0, opts, &diag);
        CHECK_FALSE(c.degenerate);
        CHECK(c.w[0] == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(c.w[1] == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(c.margin == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(c.b_plus == doctest::Approx(4.0).epsilon(1e-9));
        CHECK(c.b_minus == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(c.b == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(c.alpha[0] == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(c.alpha[1] == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(c.alpha[2] == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(c.alpha[3] == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(c.support_indices == std::vector<Index>{0, 2});
        CHECK(c.xi.maxCoeff() <= 1e-9);
        CHECK(diag.squared_norm == doctest::Approx(4.0).epsilon(1e-9));
        CHECK(kkt_check(ds, c, 1e-6).pass());
    }
}

TEST_CASE("reduced-hull instance recovers the full transition structure") {
    LabeledDataset ds = slab_dataset();
    TrainOptions opts;
    opts.eps = 1e-9;
    TrainedClassifier c = train(ds, 0.4, opts);
    CHECK_FALSE(c.degenerate);
    // Optimal direction is horizontal with squared length 0.2704.
    CHECK(c.w[0] == doctest::Approx(0.52).epsilon(1e-7));
    CHECK(c.w[1] == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(c.margin == doctest::Approx(0.52).epsilon(1e-7));
    CHECK(c.b_plus == doctest::Approx(0.4368).epsilon(1e-6));
    CHECK(c.b_minus == doctest::Approx(0.1664).epsilon(1e-6));
    // Dual weights: capped rows at 0.4, transitional rows share the rest.
    CHECK(c.alpha[0] == doctest::Approx(0.3).epsilon(1e-6));
    CHECK(c.alpha[1] == doctest::Approx(0.3).epsilon(1e-6));
    CHECK(c.alpha[2] == doctest::Approx(0.4).epsilon(1e-9));
    CHECK(c.alpha[3] == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(c.alpha[4] == doctest::Approx(0.2).epsilon(1e-6));
    CHECK(c.alpha[5] == doctest::Approx(0.4).epsilon(1e-9));
    CHECK(c.alpha[6] == doctest::Approx(0.4).epsilon(1e-9));
    CHECK(c.alpha[7] == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(c.support_indices == std::vector<Index>{0, 1, 2, 4, 5, 6});
    CHECK(kkt_check(ds, c, 1e-5).pass());
}

TEST_CASE("translation leaves direction, weights, and margin unchanged") {
    LabeledDataset ds = slab_dataset();
    TrainedClassifier base = train(ds, 0.4);
    Vec shift = (Vec(2) << 17.5, -3.25).finished();
    Mat moved = ds.points();
    moved.rowwise() += shift.transpose();
    LabeledDataset ds2(moved, ds.labels());
    TrainedClassifier c2 = train(ds2, 0.4);
    CHECK((c2.w - base.w).norm() <= 1e-6);
    CHECK(c2.margin == doctest::Approx(base.margin).epsilon(1e-6));
    CHECK((c2.alpha - base.alpha).cwiseAbs().maxCoeff() <= 1e-6);
    // Bias shifts with the data: decision values at translated points match.
    CHECK(c2.b == doctest::Approx(base.b + base.w.dot(shift)).epsilon(1e-6));
}

TEST_CASE("coincident centroids at full cap degenerate to the zero classifier") {
    LabeledDataset ds = coincident_centroids();
    TrainedClassifier c = train(ds, 1.0);
    CHECK(c.degenerate);
    CHECK(c.w.norm() == 0.0);
    CHECK(c.margin == 0.0);
    CHECK(c.b == 0.0);
    CHECK(kkt_check(ds, c, 1e-6).pass());
    CHECK_THROWS_AS(decision_value(c, Vec::Zero(1)), UndefinedClassifierError);
}

TEST_CASE("overlapping hulls return the canonical weights nearest uniform") {
    // H+ = [-2, 1] contains H- = {0}, so w = 0 and the optimal weights form a
    // segment: alpha_+ = (t, 1 - 3t, 2t) for t in [0, 1/3] (reconstruction
    // -2t + 2t = 0, class sum 1). Projecting the uniform weighting (1/3 each)
    // onto it minimizes 28t^2 - 6t + const, i.e. t = 3/14.
    Mat x(4, 1);
    x << -2, 0, 1, 0;
    LabeledDataset ds(x, {1, 1, 1, -1});
    TrainedClassifier c = train(ds, 1.0);
    CHECK(c.degenerate);
    CHECK(c.alpha[0] == doctest::Approx(3.0 / 14.0).epsilon(1e-9));
    CHECK(c.alpha[1] == doctest::Approx(5.0 / 14.0).epsilon(1e-9));
    CHECK(c.alpha[2] == doctest::Approx(6.0 / 14.0).epsilon(1e-9));
    CHECK(c.alpha[3] == doctest::Approx(1.0).epsilon(1e-12));

    // The canonical choice survives translation, unlike a solver-path pick.
    Mat moved = x.array() + 7.25;
    TrainedClassifier cm = train(LabeledDataset(moved, ds.labels()), 1.0);
    CHECK(cm.degenerate);
    CHECK((cm.alpha - c.alpha).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("identical classes keep exactly uniform canonical weights") {
    Mat x(6, 2);
    x << 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1;
    LabeledDataset ds(x, {1, 1, 1, -1, -1, -1});
    TrainedClassifier c = train(ds, 1.0);
    CHECK(c.degenerate);
    for (Index i = 0; i < 6; ++i) {
        CHECK(c.alpha[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }
}

TEST_CASE("decision values split the plane along the trained slab") {
    TrainedClassifier c = train(corners_dataset(), 1.0);
    CHECK(decision_value(c, (Vec(2) << 3, 0).finished()) > 0.0);
    CHECK(decision_value(c, (Vec(2) << -1, 0).finished()) < 0.0);
    CHECK(decision_value(c, (Vec(2) << 1, 7).finished()) ==
          doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("cap outside the feasible interval is rejected") {
    LabeledDataset ds = corners_dataset();
    CHECK_THROWS_AS(train(ds, 0.25), ValidationError);   // mu * min class size < 1
    CHECK_THROWS_AS(train(ds, 1.5), ValidationError);    // mu > 1
    CHECK_THROWS_AS(train(ds, 0.0), ValidationError);
    TrainOptions opts;
    opts.eps = 0.0;
    CHECK_THROWS_AS(train(ds, 1.0, opts), std::invalid_argument);
}

TEST_CASE("line-search bias minimizes training errors with halfway tie-breaks") {
    // Projections: positives {-5, 1, 2, 3}, negatives {-3, -2, -1}; the
    // halfway bias -4 misclassifies four points, the best bias 0 only one.
    Mat x(7, 1);
    x << -5, 1, 2, 3, -3, -2, -1;
    LabeledDataset ds(x, {1, 1, 1, 1, -1, -1, -1});
    Vec w = Vec::Ones(1);
    double b = line_search_bias(ds, w, -4.0);
    CHECK(b == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("line-search bias strategy is wired through training") {
    TrainOptions opts;
    opts.bias = BiasStrategy::line_search;
    TrainedClassifier c = train(corners_dataset(), 1.0, opts);
    CHECK(c.bias_strategy == BiasStrategy::line_search);
    // Separable data: any bias inside the slab gives zero errors; the tie
    // breaks toward halfway, so the bias stays at 2.
    CHECK(c.b == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("margins shrink as the cap loosens") {
    LabeledDataset ds = slab_dataset();
    double prev = std::numeric_limits<double>::infinity();
    for (double mu : {0.25, 0.4, 0.6, 0.8, 1.0}) {
        double m = margin_at_mu(ds, mu);
        CHECK(m <= prev + 1e-7);
        prev = m;
    }
}

TEST_CASE("solver diagnostics record the engine that ran") {
    TrainOptions opts;
    TrainDiagnostics diag;
    opts.solver = SolverKind::ellipsoid;
    train(corners_dataset(), 1.0, opts, &diag);
    CHECK(diag.solver_used == "ellipsoid");
    opts.solver = SolverKind::nearest_point;
    train(corners_dataset(), 1.0, opts, &diag);
    CHECK(diag.solver_used == "nearest-point");
    CHECK(diag.iterations >= 1);
    opts.solver = SolverKind::automatic;  // small n: ellipsoid
    train(corners_dataset(), 1.0, opts, &diag);
    CHECK(diag.solver_used == "ellipsoid");
}

TEST_CASE("kkt audit flags corrupted solutions") {
    LabeledDataset ds = corners_dataset();
    TrainedClassifier c = train(ds, 1.0);
    KktReport ok = kkt_check(ds, c, 1e-6);
    CHECK(ok.pass());
    CHECK(ok.max_violation <= 1e-6);

    Vec bad_alpha = c.alpha;
    bad_alpha[0] = 1.5;  // breaks the box constraint and the class sum
    KktReport bad = kkt_check(ds, 1.0, c.w, c.b_plus, c.b_minus, bad_alpha, c.xi, 1e-6);
    CHECK_FALSE(bad.dual_feasible);
    CHECK_FALSE(bad.pass());

    Vec bad_w = c.w * 2.0;  // no longer reconstructs from alpha
    KktReport bad2 = kkt_check(ds, 1.0, bad_w, c.b_plus, c.b_minus, c.alpha, c.xi, 1e-6);
    CHECK_FALSE(bad2.reconstructs);
}

}  // TEST_SUITE
