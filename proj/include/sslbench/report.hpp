#pragma once

#include <string>
#include <vector>

#include "sslbench/engine.hpp"

namespace sslbench {

// results CSV: one row per RunRecord, fixed header, deterministic number
// formatting. epsilon_ms is the only wall-clock (nondeterministic) column.
std::string results_csv_header();
void write_results_csv(const std::vector<RunRecord>& records, const std::string& path);
std::vector<RunRecord> read_results_csv(const std::string& path);

// Drops the epsilon_ms column from results CSV text, for byte-level
// determinism comparisons.
std::string strip_epsilon_column(const std::string& csv_text);

struct PlotRow {
    std::string scenario;
    double budget = 0.0;
    std::string method;
    double mean_f1 = 0.0;
    double std_f1 = 0.0; // population standard deviation
    size_t count = 0;
};
std::vector<PlotRow> plot_data(const std::vector<RunRecord>& records);
void write_plotdata_csv(const std::vector<PlotRow>& rows, const std::string& path);

// Def.-style benefit analysis of one challenger against a baseline
// population; z > 0 means the challenger ranks above the baseline.
struct ComparisonOutcome {
    std::string baseline;
    std::string challenger;
    StatTestResult test;
    double mean_f1_baseline = 0.0;
    double mean_f1_challenger = 0.0;
    double gap_upper_lower = 0.0; // mean F1 sl_upper - sl_lower
    double roi_challenger = 0.0;
    double roi_sl_lower = 0.0;
    double roi_vanilla = 0.0;
    std::string benefit; // beneficial | no_benefit | investment_not_warranted
};

// Populations pair F1 values cell by cell; cells where either method
// failed are dropped from both sides. Requires records for sl_lower,
// sl_upper and ssl_vanilla (the benefit conditions read them).
ComparisonOutcome compare_methods(const std::vector<RunRecord>& records, const std::string& baseline,
                                  const std::string& challenger, Tails tails, double alpha,
                                  const CampaignConfig& cfg);

// Best by campaign mean F1; pure pseudo-labelling picks among
// ssl_vanilla/pseudo/pseudo_iterated, active among the six band methods.
std::string best_pure_pseudo_method(const std::vector<RunRecord>& records);
std::string best_active_method(const std::vector<RunRecord>& records);

void write_stats_csv(const std::vector<ComparisonOutcome>& rows, const std::string& dataset,
                     const std::string& path);

void write_transparency_json(const CampaignResult& result, const CampaignConfig& cfg,
                             const std::vector<ComparisonOutcome>& comparisons,
                             const std::string& path);

std::string summary_table(const std::vector<ComparisonOutcome>& rows, const std::string& dataset);

} // namespace sslbench
