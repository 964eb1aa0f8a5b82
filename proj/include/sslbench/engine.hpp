#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sslbench/dataset.hpp"
#include "sslbench/methods.hpp"
#include "sslbench/timing.hpp"

namespace sslbench {

// One labelling-cost scenario with its per-budget benign floor (parallel
// to CampaignConfig::budgets).
struct ScenarioConfig {
    CostScenario cost;
    std::vector<size_t> min_benign;
};

struct CampaignConfig {
    std::string dataset_path;
    std::string label_column = "label";
    std::vector<MethodSpec> methods; // must contain the three baselines
    int n = 1;                       // labelled-set redraws per future split
    int k = 1;                       // future-set redraws
    std::vector<double> budgets;
    std::vector<ScenarioConfig> scenarios;
    double test_fraction = 0.2;
    LearnerConfig learner;
    uint64_t master_seed = 0;
    int active_repeats = 5;
    double pseudo_threshold = kHighBandMin;
    double alpha = 0.05;
    Tails tails = Tails::two;
    double benefit_gap_delta = 0.05; // required upper-vs-lower mean F1 gap
    double u_fixed = 0.0;            // fixed unlabelled-data investment in the ROI budget
    double epsilon_cost_rate = 0.0;  // budget units per millisecond of extra cost
};

// One method invocation: full provenance of what it trained on plus its
// outcome. Active methods aggregate their repeats into one record and
// keep the raw per-repeat F1 values alongside.
struct RunRecord {
    std::string method;
    double budget = 0.0;
    std::string scenario;
    double cost_benign = 1.0;
    double cost_malicious = 1.0;
    int k_index = 0;
    int n_index = 0;
    int repeat_index = 0;
    double f1 = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double epsilon_ms = 0.0;
    size_t size_labelled = 0, labelled_benign = 0, labelled_malicious = 0;
    size_t size_unlabelled = 0, unlabelled_benign = 0, unlabelled_malicious = 0;
    size_t size_trainpool = 0, trainpool_benign = 0, trainpool_malicious = 0;
    size_t size_future = 0, future_benign = 0, future_malicious = 0;
    ClassRatio ratio_labelled;
    ClassRatio ratio_future;
    double verified_spend = 0.0;
    std::string flags; // semicolon-joined tokens, e.g. band_exhausted, failed:<code>
    uint64_t run_seed = 0;
    std::vector<double> repeat_f1s;

    bool failed() const { return flags.rfind("failed", 0) == 0 || flags.find(";failed") != std::string::npos; }
};

struct CellParams {
    double budget = 0.0;
    CostScenario scenario;
    size_t min_benign = 0;
    uint64_t combo_seed = 0;
};

// Throws Errc::config_error naming the violated field or baseline
// requirement; returns non-fatal warnings.
std::vector<std::string> validate_campaign(const CampaignConfig& cfg);
std::vector<std::string> validate_campaign(const CampaignConfig& cfg, const LabeledDataset& d);

// Records for one (future redraw, labelled redraw) cell: every configured
// method runs once against the identical partition.
std::vector<RunRecord> run_cell_unit(const LabeledDataset& d, const CellParams& cell,
                                     const CampaignConfig& cfg, int k_index, int n_index);

// All n*k cells of one (budget, scenario) combination.
std::vector<RunRecord> run_cell(const LabeledDataset& d, const CellParams& cell,
                                const CampaignConfig& cfg);

struct CampaignResult {
    std::vector<RunRecord> records; // sorted by (method, budget, scenario, k, n, repeat)
    std::vector<std::string> warnings;
    std::string dataset_name;
    size_t dataset_size = 0;
    size_t dataset_benign = 0;
    size_t dataset_malicious = 0;
    size_t dataset_dim = 0;
};

// The full sweep: every (budget, scenario) pair restarts the pipeline
// with an independently derived seed. Cells may run on `workers` threads;
// the result is identical for any worker count.
CampaignResult run_campaign(const CampaignConfig& cfg, const LabeledDataset& d, int workers = 1);
CampaignResult run_campaign(const CampaignConfig& cfg, int workers = 1); // loads cfg.dataset_path

uint64_t combo_seed(const CampaignConfig& cfg, size_t budget_index, size_t scenario_index);

} // namespace sslbench
