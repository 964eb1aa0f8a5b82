#include "sslbench/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "sslbench/config.hpp"

namespace sslbench {

namespace {

std::string fmt(double v, const char* spec = "%.6f") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

std::string join_repeat_f1s(const std::vector<double>& v) {
    std::string out;
    for (double f : v) {
        if (!out.empty()) out.push_back(';');
        out += fmt(f);
    }
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

constexpr const char* kColumns[] = {
    "method",          "budget",           "scenario",
    "cost_benign",     "cost_malicious",   "k_index",
    "n_index",         "repeat_index",     "f1",
    "precision",       "recall",           "epsilon_ms",
    "size_labelled",   "labelled_benign",  "labelled_malicious",
    "size_unlabelled", "unlabelled_benign","unlabelled_malicious",
    "size_trainpool",  "trainpool_benign", "trainpool_malicious",
    "size_future",     "future_benign",    "future_malicious",
    "ratio_labelled_benign_pct", "ratio_labelled_malicious_pct",
    "ratio_future_benign_pct",   "ratio_future_malicious_pct",
    "verified_spend",  "flags",            "run_seed",
    "repeat_f1s",
};

// (budget, scenario, k, n) key shared by method populations
std::string cell_key(const RunRecord& r) {
    return fmt(r.budget, "%.9g") + "|" + r.scenario + "|" + std::to_string(r.k_index) + "|" +
           std::to_string(r.n_index);
}

struct MethodStats {
    double mean_f1 = 0.0;
    double mean_budget = 0.0;
    double mean_epsilon = 0.0;
    size_t count = 0;
};

MethodStats method_stats(const std::vector<RunRecord>& records, const std::string& method) {
    MethodStats s;
    for (const RunRecord& r : records) {
        if (r.method != method || r.failed()) continue;
        s.mean_f1 += r.f1;
        s.mean_budget += r.budget;
        s.mean_epsilon += r.epsilon_ms;
        ++s.count;
    }
    if (s.count > 0) {
        s.mean_f1 /= static_cast<double>(s.count);
        s.mean_budget /= static_cast<double>(s.count);
        s.mean_epsilon /= static_cast<double>(s.count);
    }
    return s;
}

std::string best_by_mean_f1(const std::vector<RunRecord>& records,
                            const std::vector<std::string>& candidates) {
    std::string best;
    double best_f1 = -1.0;
    for (const std::string& m : candidates) {
        const MethodStats s = method_stats(records, m);
        if (s.count > 0 && s.mean_f1 > best_f1) {
            best_f1 = s.mean_f1;
            best = m;
        }
    }
    return best;
}

} // namespace

std::string results_csv_header() {
    std::string h;
    for (const char* c : kColumns) {
        if (!h.empty()) h.push_back(',');
        h += c;
    }
    return h;
}

void write_results_csv(const std::vector<RunRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::missing_file, "cannot write results file: " + path);
    out << results_csv_header() << '\n';
    for (const RunRecord& r : records) {
        out << r.method << ',' << fmt(r.budget, "%.9g") << ',' << r.scenario << ','
            << fmt(r.cost_benign, "%.9g") << ',' << fmt(r.cost_malicious, "%.9g") << ','
            << r.k_index << ',' << r.n_index << ',' << r.repeat_index << ',' << fmt(r.f1) << ','
            << fmt(r.precision) << ',' << fmt(r.recall) << ',' << fmt(r.epsilon_ms, "%.3f") << ','
            << r.size_labelled << ',' << r.labelled_benign << ',' << r.labelled_malicious << ','
            << r.size_unlabelled << ',' << r.unlabelled_benign << ',' << r.unlabelled_malicious << ','
            << r.size_trainpool << ',' << r.trainpool_benign << ',' << r.trainpool_malicious << ','
            << r.size_future << ',' << r.future_benign << ',' << r.future_malicious << ','
            << r.ratio_labelled.benign_pct << ',' << r.ratio_labelled.malicious_pct << ','
            << r.ratio_future.benign_pct << ',' << r.ratio_future.malicious_pct << ','
            << fmt(r.verified_spend) << ',' << r.flags << ',' << r.run_seed << ','
            << join_repeat_f1s(r.repeat_f1s) << '\n';
    }
}

std::vector<RunRecord> read_results_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::missing_file, "cannot open results file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw Error(Errc::parse_error, "results file has no header: " + path);
    if (split_csv_line(line) != std::vector<std::string>(std::begin(kColumns), std::end(kColumns)))
        throw Error(Errc::parse_error, "unexpected results header in " + path);

    std::vector<RunRecord> out;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != std::size(kColumns))
            throw Error(Errc::parse_error,
                        "results row " + std::to_string(line_no) + ": wrong field count");
        RunRecord r;
        size_t i = 0;
        try {
            r.method = f[i++];
            r.budget = std::stod(f[i++]);
            r.scenario = f[i++];
            r.cost_benign = std::stod(f[i++]);
            r.cost_malicious = std::stod(f[i++]);
            r.k_index = std::stoi(f[i++]);
            r.n_index = std::stoi(f[i++]);
            r.repeat_index = std::stoi(f[i++]);
            r.f1 = std::stod(f[i++]);
            r.precision = std::stod(f[i++]);
            r.recall = std::stod(f[i++]);
            r.epsilon_ms = std::stod(f[i++]);
            r.size_labelled = std::stoul(f[i++]);
            r.labelled_benign = std::stoul(f[i++]);
            r.labelled_malicious = std::stoul(f[i++]);
            r.size_unlabelled = std::stoul(f[i++]);
            r.unlabelled_benign = std::stoul(f[i++]);
            r.unlabelled_malicious = std::stoul(f[i++]);
            r.size_trainpool = std::stoul(f[i++]);
            r.trainpool_benign = std::stoul(f[i++]);
            r.trainpool_malicious = std::stoul(f[i++]);
            r.size_future = std::stoul(f[i++]);
            r.future_benign = std::stoul(f[i++]);
            r.future_malicious = std::stoul(f[i++]);
            r.ratio_labelled.benign_pct = std::stoi(f[i++]);
            r.ratio_labelled.malicious_pct = std::stoi(f[i++]);
            r.ratio_future.benign_pct = std::stoi(f[i++]);
            r.ratio_future.malicious_pct = std::stoi(f[i++]);
            r.verified_spend = std::stod(f[i++]);
            r.flags = f[i++];
            r.run_seed = std::stoull(f[i++]);
            std::string piece;
            std::istringstream reps(f[i]);
            while (std::getline(reps, piece, ';'))
                if (!piece.empty()) r.repeat_f1s.push_back(std::stod(piece));
        } catch (const std::exception&) {
            throw Error(Errc::parse_error, "results row " + std::to_string(line_no) + ", field " +
                                               std::to_string(i) + ": bad value");
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::string strip_epsilon_column(const std::string& csv_text) {
    std::istringstream in(csv_text);
    std::ostringstream out;
    std::string line;
    size_t eps_col = SIZE_MAX;
    bool first = true;
    while (std::getline(in, line)) {
        const auto fields = split_csv_line(line);
        if (first) {
            for (size_t i = 0; i < fields.size(); ++i)
                if (fields[i] == "epsilon_ms") eps_col = i;
            first = false;
        }
        std::string rebuilt;
        for (size_t i = 0; i < fields.size(); ++i) {
            if (i == eps_col) continue;
            if (!rebuilt.empty()) rebuilt.push_back(',');
            rebuilt += fields[i];
        }
        out << rebuilt << '\n';
    }
    return out.str();
}

std::vector<PlotRow> plot_data(const std::vector<RunRecord>& records) {
    std::map<std::tuple<std::string, double, std::string>, std::vector<double>> groups;
    for (const RunRecord& r : records)
        groups[{r.scenario, r.budget, r.method}].push_back(r.f1);

    std::vector<PlotRow> rows;
    for (const auto& [key, f1s] : groups) {
        PlotRow row;
        row.scenario = std::get<0>(key);
        row.budget = std::get<1>(key);
        row.method = std::get<2>(key);
        row.count = f1s.size();
        double sum = 0.0;
        for (double f : f1s) sum += f;
        row.mean_f1 = sum / static_cast<double>(f1s.size());
        double ss = 0.0;
        for (double f : f1s) ss += (f - row.mean_f1) * (f - row.mean_f1);
        row.std_f1 = std::sqrt(ss / static_cast<double>(f1s.size()));
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_plotdata_csv(const std::vector<PlotRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::missing_file, "cannot write plot data file: " + path);
    out << "scenario,budget,method,mean_f1,std_f1,count\n";
    for (const PlotRow& r : rows)
        out << r.scenario << ',' << fmt(r.budget, "%.9g") << ',' << r.method << ','
            << fmt(r.mean_f1) << ',' << fmt(r.std_f1) << ',' << r.count << '\n';
}

ComparisonOutcome compare_methods(const std::vector<RunRecord>& records, const std::string& baseline,
                                  const std::string& challenger, Tails tails, double alpha,
                                  const CampaignConfig& cfg) {
    std::map<std::string, double> base_by_cell, chal_by_cell;
    for (const RunRecord& r : records) {
        if (r.failed()) continue;
        if (r.method == baseline) base_by_cell[cell_key(r)] = r.f1;
        if (r.method == challenger) chal_by_cell[cell_key(r)] = r.f1;
    }

    std::vector<double> base_pop, chal_pop;
    for (const auto& [key, f1] : base_by_cell) {
        const auto it = chal_by_cell.find(key);
        if (it != chal_by_cell.end()) {
            base_pop.push_back(f1);
            chal_pop.push_back(it->second);
        }
    }
    if (base_pop.empty())
        throw Error(Errc::empty_population,
                    "no shared cells between '" + baseline + "' and '" + challenger + "'");

    ComparisonOutcome out;
    out.baseline = baseline;
    out.challenger = challenger;
    out.test = wilcoxon_ranksum(chal_pop, base_pop, tails, alpha);

    const MethodStats lower = method_stats(records, "sl_lower");
    const MethodStats upper = method_stats(records, "sl_upper");
    const MethodStats vanilla = method_stats(records, "ssl_vanilla");
    const MethodStats base = method_stats(records, baseline);
    const MethodStats chal = method_stats(records, challenger);
    if (lower.count == 0 || upper.count == 0 || vanilla.count == 0)
        throw Error(Errc::empty_population,
                    "benefit analysis needs sl_lower, sl_upper and ssl_vanilla records");

    out.mean_f1_baseline = base.mean_f1;
    out.mean_f1_challenger = chal.mean_f1;
    out.gap_upper_lower = upper.mean_f1 - lower.mean_f1;

    auto total_budget = [&](const MethodStats& s) {
        return cfg.u_fixed + s.mean_budget + cfg.epsilon_cost_rate * s.mean_epsilon;
    };
    out.roi_challenger = roi(chal.mean_f1, total_budget(chal));
    out.roi_sl_lower = roi(lower.mean_f1, total_budget(lower));
    out.roi_vanilla = roi(vanilla.mean_f1, total_budget(vanilla));

    if (out.gap_upper_lower <= cfg.benefit_gap_delta)
        out.benefit = "investment_not_warranted";
    else if (out.roi_challenger > out.roi_sl_lower && out.roi_challenger > out.roi_vanilla)
        out.benefit = "beneficial";
    else
        out.benefit = "no_benefit";
    return out;
}

std::string best_pure_pseudo_method(const std::vector<RunRecord>& records) {
    return best_by_mean_f1(records, {"ssl_vanilla", "pseudo", "pseudo_iterated"});
}

std::string best_active_method(const std::vector<RunRecord>& records) {
    return best_by_mean_f1(records, {"active_low", "active_other", "active_high",
                                     "pseudo_active_low", "pseudo_active_other",
                                     "pseudo_active_high"});
}

void write_stats_csv(const std::vector<ComparisonOutcome>& rows, const std::string& dataset,
                     const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::missing_file, "cannot write stats file: " + path);
    out << "dataset,baseline,challenger,tails,pop_size,z,p,effect_size,verdict\n";
    for (const ComparisonOutcome& r : rows)
        out << dataset << ',' << r.baseline << ',' << r.challenger << ','
            << static_cast<int>(r.test.tails) << ',' << r.test.pop_size << ',' << fmt(r.test.z) << ','
            << fmt(r.test.p) << ',' << fmt(r.test.effect_size) << ',' << r.test.verdict() << '\n';
}

void write_transparency_json(const CampaignResult& result, const CampaignConfig& cfg,
                             const std::vector<ComparisonOutcome>& comparisons,
                             const std::string& path) {
    using nlohmann::json;
    json root;
    root["framework_version"] = kFrameworkVersion;
    root["master_seed"] = cfg.master_seed;
    root["dataset"] = {{"name", result.dataset_name}, {"path", cfg.dataset_path},
                       {"size", result.dataset_size}, {"benign", result.dataset_benign},
                       {"malicious", result.dataset_malicious}, {"dim", result.dataset_dim}};
    root["learner"] = {{"n_trees", cfg.learner.n_trees}, {"max_depth", cfg.learner.max_depth},
                       {"min_leaf", cfg.learner.min_leaf}, {"bootstrap", cfg.learner.bootstrap}};
    root["iteration"] = {{"n", cfg.n}, {"k", cfg.k}};
    root["budgets"] = cfg.budgets;
    root["test_fraction"] = cfg.test_fraction;
    root["active_repeats"] = cfg.active_repeats;
    root["pseudo_threshold"] = cfg.pseudo_threshold;
    root["warnings"] = result.warnings;

    json scenarios = json::array();
    for (const auto& sc : cfg.scenarios)
        scenarios.push_back({{"name", sc.cost.name}, {"cost_benign", sc.cost.cost_benign},
                             {"cost_malicious", sc.cost.cost_malicious},
                             {"min_benign", sc.min_benign}});
    root["scenarios"] = std::move(scenarios);

    json methods = json::array();
    for (const auto& m : cfg.methods) methods.push_back(m.name());
    root["methods"] = std::move(methods);

    const double dsize = static_cast<double>(result.dataset_size);
    json runs = json::array();
    for (const RunRecord& r : result.records) {
        json e;
        e["method"] = r.method;
        e["budget"] = r.budget;
        e["scenario"] = r.scenario;
        e["k_index"] = r.k_index;
        e["n_index"] = r.n_index;
        e["repeat_index"] = r.repeat_index;
        e["run_seed"] = r.run_seed;
        e["flags"] = r.flags;
        e["sizes"] = {{"labelled", r.size_labelled}, {"unlabelled", r.size_unlabelled},
                      {"trainpool", r.size_trainpool}, {"future", r.size_future}};
        e["sizes_relative"] = {{"labelled", static_cast<double>(r.size_labelled) / dsize},
                               {"unlabelled", static_cast<double>(r.size_unlabelled) / dsize},
                               {"trainpool", static_cast<double>(r.size_trainpool) / dsize},
                               {"future", static_cast<double>(r.size_future) / dsize}};
        e["class_counts"] = {{"labelled", {r.labelled_benign, r.labelled_malicious}},
                             {"unlabelled", {r.unlabelled_benign, r.unlabelled_malicious}},
                             {"trainpool", {r.trainpool_benign, r.trainpool_malicious}},
                             {"future", {r.future_benign, r.future_malicious}}};
        e["ratio_labelled"] = {r.ratio_labelled.benign_pct, r.ratio_labelled.malicious_pct};
        e["ratio_future"] = {r.ratio_future.benign_pct, r.ratio_future.malicious_pct};
        e["verified_spend"] = r.verified_spend;
        runs.push_back(std::move(e));
    }
    root["runs"] = std::move(runs);

    json benefit = json::array();
    for (const ComparisonOutcome& c : comparisons)
        benefit.push_back({{"baseline", c.baseline}, {"challenger", c.challenger},
                           {"z", c.test.z}, {"p", c.test.p}, {"pop_size", c.test.pop_size},
                           {"effect_size", c.test.effect_size}, {"verdict", c.test.verdict()},
                           {"mean_f1_baseline", c.mean_f1_baseline},
                           {"mean_f1_challenger", c.mean_f1_challenger},
                           {"gap_upper_lower", c.gap_upper_lower},
                           {"roi_challenger", c.roi_challenger}, {"roi_sl_lower", c.roi_sl_lower},
                           {"roi_vanilla", c.roi_vanilla}, {"benefit", c.benefit}});
    root["benefit_analysis"] = std::move(benefit);

    std::ofstream out(path);
    if (!out) throw Error(Errc::missing_file, "cannot write transparency file: " + path);
    out << root.dump(2) << '\n';
}

std::string summary_table(const std::vector<ComparisonOutcome>& rows, const std::string& dataset) {
    std::ostringstream out;
    out << "dataset: " << dataset << '\n';
    char line[256];
    std::snprintf(line, sizeof(line), "%-12s %-20s %8s %10s %10s %8s %-8s %s\n", "baseline",
                  "challenger", "popsize", "z", "p", "effect", "H0", "benefit");
    out << line;
    bool any_small = false;
    for (const ComparisonOutcome& r : rows) {
        std::snprintf(line, sizeof(line), "%-12s %-20s %8zu %10.3f %10.4f %8.4f %-8s %s\n",
                      r.baseline.c_str(), r.challenger.c_str(), r.test.pop_size, r.test.z, r.test.p,
                      r.test.effect_size, r.test.verdict(), r.benefit.c_str());
        out << line;
        any_small |= r.test.small_sample;
    }
    if (any_small)
        out << "note: populations under 20 per side; the normal approximation degrades\n";
    return out.str();
}

} // namespace sslbench
