#include "sslbench/forest.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

namespace sslbench {

namespace {

constexpr uint64_t kTreeTag = 0x74726565; // stream namespace for per-tree seeds

struct SplitChoice {
    int feature = -1;
    double threshold = 0.0;
    double impurity = std::numeric_limits<double>::infinity();
    uint32_t left_benign = 0;
    uint32_t left_malicious = 0;
};

// Per-tree builder over feature-major presorted index arrays. Every node
// is a contiguous segment [lo, hi) shared by all feature arrays; splitting
// stable-partitions each array so segments stay sorted by their feature.
class TreeBuilder {
public:
    TreeBuilder(const double* x, const uint8_t* y, size_t dim, const std::vector<uint32_t>& global_order,
                const LearnerConfig& cfg)
        : x_(x), y_(y), dim_(dim), global_order_(global_order), cfg_(cfg) {}

    std::vector<TreeNode> build(uint64_t tree_seed, size_t n_samples) {
        RandomStream rng(tree_seed);

        weights_.assign(n_samples, cfg_.bootstrap ? 0 : 1);
        if (cfg_.bootstrap) {
            for (size_t i = 0; i < n_samples; ++i) ++weights_[rng.below(n_samples)];
        }

        // In-bag rows of each presorted feature array, order preserved.
        size_t m = 0;
        for (uint32_t w : weights_) m += (w > 0);
        order_.resize(dim_ * m);
        for (size_t f = 0; f < dim_; ++f) {
            size_t out = f * m;
            const uint32_t* src = global_order_.data() + f * n_samples;
            for (size_t j = 0; j < n_samples; ++j)
                if (weights_[src[j]] > 0) order_[out++] = src[j];
        }
        m_ = m;
        scratch_.resize(m);
        feature_pool_.resize(dim_);
        goes_left_.resize(n_samples);

        uint32_t wb = 0, wm = 0;
        for (size_t j = 0; j < m; ++j) {
            const uint32_t i = order_[j];
            (y_[i] ? wm : wb) += weights_[i];
        }

        nodes_.clear();
        grow(0, m, 0, wb, wm, rng);
        return std::move(nodes_);
    }

private:
    int32_t grow(size_t lo, size_t hi, int depth, uint32_t wb, uint32_t wm, RandomStream& rng) {
        const int32_t idx = static_cast<int32_t>(nodes_.size());
        nodes_.emplace_back();
        nodes_[idx].count_benign = wb;
        nodes_[idx].count_malicious = wm;

        const bool depth_capped = cfg_.max_depth > 0 && depth >= cfg_.max_depth;
        const uint32_t min_leaf = static_cast<uint32_t>(cfg_.min_leaf);
        if (wb == 0 || wm == 0 || depth_capped || wb + wm < 2 * min_leaf) return idx;

        const SplitChoice split = best_split(lo, hi, wb, wm, rng);
        if (split.feature < 0) return idx;

        const size_t nl = partition(lo, hi, split.feature, split.threshold);
        nodes_[idx].feature = split.feature;
        nodes_[idx].threshold = split.threshold;
        const int32_t l = grow(lo, lo + nl, depth + 1, split.left_benign, split.left_malicious, rng);
        const int32_t r = grow(lo + nl, hi, depth + 1, wb - split.left_benign, wm - split.left_malicious, rng);
        nodes_[idx].left = l;
        nodes_[idx].right = r;
        return idx;
    }

    SplitChoice best_split(size_t lo, size_t hi, uint32_t wb, uint32_t wm, RandomStream& rng) {
        // floor(sqrt(dim)) distinct candidate features, examined in index
        // order so equal-impurity ties resolve deterministically
        const size_t k = static_cast<size_t>(std::sqrt(static_cast<double>(dim_)));
        for (size_t f = 0; f < dim_; ++f) feature_pool_[f] = static_cast<uint32_t>(f);
        for (size_t i = 0; i < k; ++i) {
            const size_t j = i + static_cast<size_t>(rng.below(dim_ - i));
            std::swap(feature_pool_[i], feature_pool_[j]);
        }
        std::sort(feature_pool_.begin(), feature_pool_.begin() + static_cast<long>(k));

        SplitChoice best;
        const double total = static_cast<double>(wb) + static_cast<double>(wm);
        const uint32_t min_leaf = static_cast<uint32_t>(cfg_.min_leaf);

        for (size_t fi = 0; fi < k; ++fi) {
            const uint32_t f = feature_pool_[fi];
            const uint32_t* seg = order_.data() + static_cast<size_t>(f) * m_;
            uint32_t run_b = 0, run_m = 0;
            double v = x_[static_cast<size_t>(seg[lo]) * dim_ + f];
            for (size_t j = lo; j + 1 < hi; ++j) {
                const uint32_t i = seg[j];
                (y_[i] ? run_m : run_b) += weights_[i];
                const double next = x_[static_cast<size_t>(seg[j + 1]) * dim_ + f];
                const bool boundary = v < next;
                const double at = v;
                v = next;
                if (!boundary) continue;

                const uint32_t nl = run_b + run_m;
                const uint32_t nr = (wb + wm) - nl;
                if (nl < min_leaf || nr < min_leaf) continue;

                const double lb = run_b, lm = run_m;
                const double rb = wb - run_b, rm = wm - run_m;
                const double gini_l = 1.0 - (lb * lb + lm * lm) / (static_cast<double>(nl) * nl);
                const double gini_r = 1.0 - (rb * rb + rm * rm) / (static_cast<double>(nr) * nr);
                const double impurity = (nl * gini_l + nr * gini_r) / total;
                if (impurity < best.impurity) {
                    double thr = at + (next - at) / 2.0;
                    if (!(thr < next)) thr = at; // keep the boundary between at and next
                    best = {static_cast<int>(f), thr, impurity, run_b, run_m};
                }
            }
        }
        return best;
    }

    // Stable partition of every feature array's segment by the chosen
    // split; returns the left-side size.
    size_t partition(size_t lo, size_t hi, int feature, double threshold) {
        const uint32_t* rows = order_.data(); // feature 0 holds the same row set
        for (size_t j = lo; j < hi; ++j) {
            const uint32_t i = rows[j];
            goes_left_[i] =
                x_[static_cast<size_t>(i) * dim_ + static_cast<size_t>(feature)] <= threshold;
        }
        size_t nl = 0;
        for (size_t f = 0; f < dim_; ++f) {
            uint32_t* seg = order_.data() + f * m_;
            size_t left = lo, right = 0;
            for (size_t j = lo; j < hi; ++j) {
                const uint32_t i = seg[j];
                if (goes_left_[i])
                    seg[left++] = i;
                else
                    scratch_[right++] = i;
            }
            std::copy(scratch_.begin(), scratch_.begin() + static_cast<long>(right), seg + left);
            nl = left - lo;
        }
        return nl;
    }

    const double* x_;
    const uint8_t* y_;
    size_t dim_;
    const std::vector<uint32_t>& global_order_;
    const LearnerConfig& cfg_;

    size_t m_ = 0;
    std::vector<uint32_t> weights_;
    std::vector<uint32_t> order_;
    std::vector<uint32_t> scratch_;
    std::vector<uint32_t> feature_pool_;
    std::vector<uint8_t> goes_left_;
    std::vector<TreeNode> nodes_;
};

} // namespace

FittedModel fit(const LabeledDataset& train, const LearnerConfig& config, int n_threads) {
    if (train.empty()) throw Error(Errc::empty_training_set, "cannot fit on an empty training set");
    if (config.n_trees < 1) throw Error(Errc::config_error, "learner needs at least one tree");
    const size_t n = train.size();
    const size_t dim = train.dim();

    std::vector<double> x(n * dim);
    std::vector<uint8_t> y(n);
    for (size_t i = 0; i < n; ++i) {
        const auto row = train.features_of(i);
        std::copy(row.begin(), row.end(), x.begin() + static_cast<long>(i * dim));
        y[i] = static_cast<uint8_t>(train.label(i));
    }

    // One presort per feature, shared by all trees; ties sort by row so
    // the order is a pure function of the data.
    std::vector<uint32_t> global_order(dim * n);
    for (size_t f = 0; f < dim; ++f) {
        uint32_t* seg = global_order.data() + f * n;
        for (size_t i = 0; i < n; ++i) seg[i] = static_cast<uint32_t>(i);
        std::sort(seg, seg + n, [&](uint32_t a, uint32_t b) {
            const double va = x[static_cast<size_t>(a) * dim + f];
            const double vb = x[static_cast<size_t>(b) * dim + f];
            return va < vb || (va == vb && a < b);
        });
    }

    std::vector<std::vector<TreeNode>> trees(static_cast<size_t>(config.n_trees));
    auto build_range = [&](size_t first, size_t last) {
        TreeBuilder builder(x.data(), y.data(), dim, global_order, config);
        for (size_t t = first; t < last; ++t)
            trees[t] = builder.build(derive_seed(config.seed, {kTreeTag, t}), n);
    };

    const size_t n_trees = trees.size();
    if (n_threads <= 1 || n_trees <= 1) {
        build_range(0, n_trees);
    } else {
        const size_t workers = std::min<size_t>(static_cast<size_t>(n_threads), n_trees);
        std::vector<std::future<void>> jobs;
        for (size_t w = 0; w < workers; ++w) {
            const size_t first = n_trees * w / workers;
            const size_t last = n_trees * (w + 1) / workers;
            jobs.push_back(std::async(std::launch::async, build_range, first, last));
        }
        for (auto& j : jobs) j.get();
    }

    return {dim, n, class_ratio(train), std::move(trees)};
}

Prediction FittedModel::predict_one(std::span<const double> features) const {
    if (features.size() != dim_)
        throw Error(Errc::dimension_mismatch, "sample has " + std::to_string(features.size()) +
                                                  " features, model expects " + std::to_string(dim_));
    size_t votes = 0;
    for (const auto& tree : trees_) {
        int32_t at = 0;
        while (tree[at].feature >= 0)
            at = features[static_cast<size_t>(tree[at].feature)] <= tree[at].threshold ? tree[at].left
                                                                                       : tree[at].right;
        votes += tree[at].count_malicious > tree[at].count_benign;
    }
    Prediction p;
    p.p_malicious = static_cast<double>(votes) / static_cast<double>(trees_.size());
    p.label = p.p_malicious > 0.5 ? 1 : 0; // tie votes benign
    p.confidence = 2.0 * std::abs(p.p_malicious - 0.5);
    return p;
}

std::vector<Prediction> predict(const FittedModel& model, const FeatureView& samples) {
    if (samples.dim() != model.dim())
        throw Error(Errc::dimension_mismatch, "samples have dim " + std::to_string(samples.dim()) +
                                                  ", model expects " + std::to_string(model.dim()));
    std::vector<Prediction> out(samples.size());
    for (size_t i = 0; i < samples.size(); ++i) out[i] = model.predict_one(samples.row(i));
    return out;
}

} // namespace sslbench
