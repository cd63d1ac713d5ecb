#include "zonosvm/dataset.hpp"

#include <cmath>
#include <utility>

namespace zonosvm {

LabeledDataset::LabeledDataset(Mat points, std::vector<int> labels)
    : points_(std::move(points)), labels_(std::move(labels)) {
    const Index n = points_.rows();
    if (n < 2) {
        throw ValidationError("LabeledDataset: need at least two samples.");
    }
    if (points_.cols() < 1) {
        throw ValidationError("LabeledDataset: need at least one coordinate.");
    }
    if (static_cast<Index>(labels_.size()) != n) {
        throw ValidationError("LabeledDataset: label count does not match sample count.");
    }
    if (!points_.allFinite()) {
        throw ValidationError("LabeledDataset: coordinates must be finite.");
    }
    for (Index i = 0; i < n; ++i) {
        const int y = labels_[static_cast<std::size_t>(i)];
        if (y == 1) {
            positives_.push_back(i);
        } else if (y == -1) {
            negatives_.push_back(i);
        } else {
            throw ValidationError("LabeledDataset: labels must be +1 or -1.");
        }
    }
    if (positives_.empty() || negatives_.empty()) {
        throw ValidationError("LabeledDataset: both classes must be present.");
    }
    plus_points_.resize(static_cast<Index>(positives_.size()), points_.cols());
    for (std::size_t r = 0; r < positives_.size(); ++r) {
        plus_points_.row(static_cast<Index>(r)) = points_.row(positives_[r]);
    }
    minus_points_.resize(static_cast<Index>(negatives_.size()), points_.cols());
    for (std::size_t r = 0; r < negatives_.size(); ++r) {
        minus_points_.row(static_cast<Index>(r)) = points_.row(negatives_[r]);
    }
}

std::pair<std::vector<LiftedVector>, std::vector<LiftedVector>> lift_dataset(
    const LabeledDataset& ds) {
    auto lift_one = [&](Index i) {
        LiftedVector lv;
        lv.v.resize(ds.dim() + 1);
        lv.v.head(ds.dim()) = ds.point(i);
        lv.v[ds.dim()] = 1.0;
        return lv;
    };
    std::vector<LiftedVector> plus, minus;
    plus.reserve(ds.positives().size());
    minus.reserve(ds.negatives().size());
    for (Index i : ds.positives()) plus.push_back(lift_one(i));
    for (Index i : ds.negatives()) minus.push_back(lift_one(i));
    return {std::move(plus), std::move(minus)};
}

std::pair<Mat, Mat> lift_dataset_matrices(const LabeledDataset& ds) {
    auto lift_rows = [&](const Mat& rows) {
        Mat lifted(rows.rows(), rows.cols() + 1);
        lifted.leftCols(rows.cols()) = rows;
        lifted.col(rows.cols()).setOnes();
        return lifted;
    };
    return {lift_rows(ds.class_points(+1)), lift_rows(ds.class_points(-1))};
}

}  // namespace zonosvm
