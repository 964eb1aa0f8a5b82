#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sslbench/errors.hpp"
#include "sslbench/rng.hpp"

namespace sslbench {

// label encoding used everywhere: 0 = benign, 1 = malicious
struct Sample {
    std::vector<double> features;
    int label = 0;
    int64_t id = 0;
};

// Integer class-balance percentages. Benign is rounded half-up and
// malicious is the complement, so the pair always sums to 100.
struct ClassRatio {
    int benign_pct = 0;
    int malicious_pct = 0;
    bool operator==(const ClassRatio&) const = default;
};

// Per-class labelling cost in budget units.
struct CostScenario {
    double cost_benign = 1.0;
    double cost_malicious = 1.0;
    std::string name = "balanced";
};

// Mutable per-run budget book-keeping; everything else in this module is
// immutable after construction.
struct BudgetLedger {
    double budget = 0.0;
    double spent_benign = 0.0;
    double spent_malicious = 0.0;

    double spent() const { return spent_benign + spent_malicious; }
    double residual() const { return budget - spent(); }
};

struct PartitionSpec {
    double test_fraction = 0.2;
    double budget = 0.0;
    size_t min_benign = 0;
    CostScenario cost_scenario;
    uint64_t seed = 0;
};

// Non-owning row-major view of feature rows; the only thing a learner may
// see of an unlabelled pool.
class FeatureView {
public:
    FeatureView() = default;
    FeatureView(const double* data, size_t rows, size_t dim)
        : data_(data), rows_(rows), dim_(dim) {}

    size_t size() const { return rows_; }
    size_t dim() const { return dim_; }
    std::span<const double> row(size_t i) const { return {data_ + i * dim_, dim_}; }

private:
    const double* data_ = nullptr;
    size_t rows_ = 0;
    size_t dim_ = 0;
};

// Flat row-major storage; Sample is the owning value type used at the
// edges (CSV round-trip, tests).
class LabeledDataset {
public:
    LabeledDataset() = default;
    LabeledDataset(std::string name, size_t dim) : name_(std::move(name)), dim_(dim) {}

    const std::string& name() const { return name_; }
    void set_name(std::string n) { name_ = std::move(n); }
    size_t dim() const { return dim_; }
    size_t size() const { return labels_.size(); }
    bool empty() const { return labels_.empty(); }

    std::span<const double> features_of(size_t i) const { return {features_.data() + i * dim_, dim_}; }
    int label(size_t i) const { return labels_[i]; }
    int64_t id(size_t i) const { return ids_[i]; }

    FeatureView features() const { return {features_.data(), size(), dim_}; }

    size_t count(int label) const;
    size_t n_benign() const { return count(0); }
    size_t n_malicious() const { return count(1); }

    void add(std::span<const double> features, int label, int64_t id);
    void add(const Sample& s) { add(s.features, s.label, s.id); }
    Sample sample(size_t i) const;

    // Subset in source order, by row position.
    LabeledDataset subset(const std::vector<uint32_t>& rows) const;

private:
    std::string name_;
    size_t dim_ = 0;
    std::vector<double> features_;
    std::vector<uint8_t> labels_;
    std::vector<int64_t> ids_;
};

// Wraps ground-truthed samples whose labels are masked from learners:
// the learner-facing surface is features() only. truth_label() exists for
// the simulated oracle and for evaluation audits.
class UnlabeledPool {
public:
    UnlabeledPool() = default;
    explicit UnlabeledPool(LabeledDataset hidden) : hidden_(std::move(hidden)) {}

    size_t size() const { return hidden_.size(); }
    size_t dim() const { return hidden_.dim(); }
    bool masked() const { return true; }

    FeatureView features() const { return hidden_.features(); }
    std::span<const double> features_of(size_t i) const { return hidden_.features_of(i); }
    int64_t id(size_t i) const { return hidden_.id(i); }

    // Oracle/evaluator access only.
    int truth_label(size_t i) const { return hidden_.label(i); }
    size_t truth_count(int label) const { return hidden_.count(label); }

private:
    LabeledDataset hidden_;
};

ClassRatio class_ratio(const LabeledDataset& d);

LabeledDataset load_csv(const std::string& path, const std::string& label_column,
                        bool require_both_classes = true);
void write_csv(const LabeledDataset& d, const std::string& path,
               const std::string& label_column = "label");

// Stratified split: floor(test_fraction * n_c) rows of each class go to
// the future set, the rest form the training pool. Both keep source order.
struct FutureSplit {
    LabeledDataset future;
    LabeledDataset trainpool;
};
FutureSplit split_future(const LabeledDataset& d, const PartitionSpec& spec, RandomStream& rng);

// Budget-driven composition of the labelled set: min_benign benign rows
// first, then malicious rows until the residual cannot afford another one.
// Whatever is left of the pool becomes the masked unlabelled set.
struct LabelledComposition {
    LabeledDataset labelled;
    UnlabeledPool unlabelled;
    BudgetLedger ledger;
};
LabelledComposition compose_labelled(const LabeledDataset& trainpool, const PartitionSpec& spec,
                                     RandomStream& rng);

} // namespace sslbench
