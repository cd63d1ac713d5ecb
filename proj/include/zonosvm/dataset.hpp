#pragma once

#include "zonosvm/common.hpp"

#include <utility>
#include <vector>

namespace zonosvm {

// A binary-classification training set: n points in R^d with labels +/-1.
// Both classes are guaranteed non-empty and every coordinate is finite.
class LabeledDataset {
public:
    // points: one row per sample (n x d). labels: +1 or -1 per row.
    LabeledDataset(Mat points, std::vector<int> labels);

    Index size() const { return points_.rows(); }
    Index dim() const { return points_.cols(); }
    const Mat& points() const { return points_; }
    const std::vector<int>& labels() const { return labels_; }
    Vec point(Index i) const { return points_.row(i).transpose(); }
    int label(Index i) const { return labels_[static_cast<std::size_t>(i)]; }

    // Dataset indices of each class, in ascending order.
    const std::vector<Index>& positives() const { return positives_; }
    const std::vector<Index>& negatives() const { return negatives_; }

    // Rows of one class, stacked in ascending index order.
    const Mat& class_points(int label) const { return label > 0 ? plus_points_ : minus_points_; }
    const std::vector<Index>& class_indices(int label) const {
        return label > 0 ? positives_ : negatives_;
    }

private:
    Mat points_;
    std::vector<int> labels_;
    std::vector<Index> positives_, negatives_;
    Mat plus_points_, minus_points_;
};

// A point lifted to R^{d+1} by appending the coordinate 1.
struct LiftedVector {
    Vec v;  // v[d] == 1
};

// Lifts every point of `ds`; returns the positive-class list and the
// negative-class list, each in ascending dataset-index order.
std::pair<std::vector<LiftedVector>, std::vector<LiftedVector>> lift_dataset(
    const LabeledDataset& ds);

// Same lift, as matrices (one lifted row per class member). Convenience for
// building zonotopes out of a dataset.
std::pair<Mat, Mat> lift_dataset_matrices(const LabeledDataset& ds);

}  // namespace zonosvm
