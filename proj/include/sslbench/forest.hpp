#pragma once

#include <cstdint>
#include <vector>

#include "sslbench/dataset.hpp"

namespace sslbench {

struct LearnerConfig {
    int n_trees = 100;
    int max_depth = 0; // 0 = unlimited
    int min_leaf = 1;
    bool bootstrap = true;
    uint64_t seed = 0;
};

// Vote-margin confidence: 0 at a 50:50 tree vote, 1 at unanimity.
struct Prediction {
    int label = 0;
    double p_malicious = 0.0;
    double confidence = 0.0;
};

struct TreeNode {
    int32_t feature = -1; // -1 marks a leaf
    double threshold = 0.0;
    int32_t left = -1;
    int32_t right = -1;
    uint32_t count_benign = 0; // leaf training counts (bootstrap multiset)
    uint32_t count_malicious = 0;
};

class FittedModel {
public:
    FittedModel() = default;
    FittedModel(size_t dim, size_t train_size, ClassRatio ratio, std::vector<std::vector<TreeNode>> trees)
        : dim_(dim), train_size_(train_size), train_ratio_(ratio), trees_(std::move(trees)) {}

    size_t dim() const { return dim_; }
    size_t train_size() const { return train_size_; }
    ClassRatio train_ratio() const { return train_ratio_; }
    size_t n_trees() const { return trees_.size(); }
    const std::vector<std::vector<TreeNode>>& trees() const { return trees_; }

    Prediction predict_one(std::span<const double> features) const;

private:
    size_t dim_ = 0;
    size_t train_size_ = 0;
    ClassRatio train_ratio_;
    std::vector<std::vector<TreeNode>> trees_;
};

// Random decision forest: per tree a bootstrap resample (optional) and a
// recursive search for the Gini-minimizing split over floor(sqrt(dim))
// randomly drawn features per node. Thresholds are midpoints between
// consecutive distinct sorted values; equal-impurity candidates resolve to
// the lowest feature index, then the lowest threshold. Tree t draws all of
// its randomness from a stream derived from (config.seed, t), so the
// result is identical for any n_threads.
FittedModel fit(const LabeledDataset& train, const LearnerConfig& config, int n_threads = 1);

std::vector<Prediction> predict(const FittedModel& model, const FeatureView& samples);

} // namespace sslbench
