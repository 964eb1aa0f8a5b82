#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sslbench/dataset.hpp"
#include "sslbench/forest.hpp"
#include "sslbench/stats.hpp"

namespace sslbench {

// Confidence bands partition [0, 1]; boundaries are inclusive on the
// outer bands.
enum class Band { low, other, high };

constexpr double kLowBandMax = 0.01;
constexpr double kHighBandMin = 0.99;

inline bool in_band(double confidence, Band b) {
    switch (b) {
        case Band::low: return confidence <= kLowBandMax;
        case Band::other: return confidence > kLowBandMax && confidence < kHighBandMin;
        case Band::high: return confidence >= kHighBandMin;
    }
    return false;
}

inline Band band_of(double confidence) {
    if (confidence <= kLowBandMax) return Band::low;
    if (confidence >= kHighBandMin) return Band::high;
    return Band::other;
}

enum class MethodKind {
    sl_lower,        // supervised floor, trained on the labelled set only
    sl_upper,        // supervised ceiling, trained on the whole pool with true labels
    ssl_vanilla,     // admit every pseudo-label
    pseudo,          // admit pseudo-labels at confidence >= threshold
    pseudo_iterated, // pseudo, then a second admission pass on the remainder
    active,          // half budget up front, half on oracle-labelled band samples
    pseudo_active,   // active on top of a pseudo-labelled support model
};

struct MethodSpec {
    MethodKind kind = MethodKind::sl_lower;
    Band band = Band::low; // meaningful for active/pseudo_active only
    double pseudo_threshold = kHighBandMin;
    int active_repeats = 5;

    bool uses_band() const { return kind == MethodKind::active || kind == MethodKind::pseudo_active; }
    bool is_active() const { return uses_band(); }

    std::string name() const;
    int id() const; // stable 0..10, used for seed derivation

    static std::optional<MethodSpec> parse(const std::string& name);
};

// The 2 supervised baselines, 3 pseudo-labelling variants and 6 active
// variants, in id order.
std::vector<MethodSpec> standard_method_suite();

// Labelled rows with verified labels plus rows carrying model-assigned
// labels; ids never overlap between the two origins.
struct MixedLabelledSet {
    LabeledDataset data;
    std::vector<uint8_t> origin; // per row: 0 = correct, 1 = pseudo

    size_t n_correct() const;
    size_t n_pseudo() const { return data.size() - n_correct(); }
    void add_correct(const LabeledDataset& src, size_t row);
    void add_pseudo(std::span<const double> features, int pseudo_label, int64_t id);
};

// Sample ids touched by each pipeline stage, for audits; the engine drops
// these when it persists run records.
struct ProvenanceIds {
    std::vector<int64_t> pseudo_stage1;
    std::vector<int64_t> pseudo_stage2;
    std::vector<std::vector<int64_t>> oracle_per_repeat;
};

struct MethodResult {
    Metrics mean;                   // averaged over repeats for active kinds
    double epsilon_ms = 0.0;        // per-repeat average for active kinds, total otherwise
    std::vector<double> repeat_f1s; // raw repeat f1 values ({f1} for single-shot kinds)
    double verified_spend = 0.0;    // budget units spent on oracle-verified labels
    size_t verified_count = 0;      // verified labels in the final training set
    size_t final_train_size = 0;
    std::vector<std::string> flags;
    std::vector<std::pair<std::string, double>> stage_ms;
    ProvenanceIds provenance;

    double stage(const std::string& name) const;
};

ConfusionCounts evaluate(const FittedModel& model, const LabeledDataset& future);

MethodResult run_sl_lower(const LabeledDataset& labelled, const LabeledDataset& future,
                          const LearnerConfig& cfg);

MethodResult run_sl_upper(const LabeledDataset& trainpool, const LabeledDataset& future,
                          const LearnerConfig& cfg);

MethodResult run_vanilla_ssl(const LabeledDataset& labelled, const UnlabeledPool& pool,
                             const LabeledDataset& future, const LearnerConfig& cfg);

MethodResult run_pseudo(const LabeledDataset& labelled, const UnlabeledPool& pool,
                        const LabeledDataset& future, const LearnerConfig& cfg,
                        double threshold = kHighBandMin);

MethodResult run_pseudo_iterated(const LabeledDataset& labelled, const UnlabeledPool& pool,
                                 const LabeledDataset& future, const LearnerConfig& cfg,
                                 double threshold = kHighBandMin);

// Removes floor(n/2) of each class uniformly at random; restored_budget is
// the labelling cost of the removed rows.
struct HalvedLabelled {
    LabeledDataset half;
    double restored_budget = 0.0;
};
HalvedLabelled halve_labelled(const LabeledDataset& labelled, const CostScenario& scenario,
                              RandomStream& rng);

MethodResult run_active(const LabeledDataset& labelled, const UnlabeledPool& pool,
                        const LabeledDataset& future, const LearnerConfig& cfg, Band band,
                        const CostScenario& scenario, uint64_t draw_seed, int repeats = 5);

MethodResult run_pseudo_active(const LabeledDataset& labelled, const UnlabeledPool& pool,
                               const LabeledDataset& future, const LearnerConfig& cfg, Band band,
                               const CostScenario& scenario, uint64_t draw_seed, int repeats = 5,
                               double threshold = kHighBandMin);

struct MethodContext {
    const LabeledDataset* labelled = nullptr;
    const UnlabeledPool* pool = nullptr;
    const LabeledDataset* trainpool = nullptr;
    const LabeledDataset* future = nullptr;
    LearnerConfig learner;            // seed preset to the run seed
    CostScenario scenario;
    double pseudo_threshold = kHighBandMin;
    int active_repeats = 5;
    uint64_t draw_seed = 0;
};

MethodResult run_method(const MethodSpec& spec, const MethodContext& ctx);

} // namespace sslbench
