#include "sslbench/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace sslbench {

namespace {

constexpr uint64_t kComboTag = 0x636f6d62;
constexpr uint64_t kFutureTag = 0x66757475;
constexpr uint64_t kComposeTag = 0x6c616264;
constexpr uint64_t kRunTag = 0x72756e;
constexpr uint64_t kDrawTag = 0x64726177;

bool has_method(const CampaignConfig& cfg, MethodKind kind) {
    return std::any_of(cfg.methods.begin(), cfg.methods.end(),
                       [&](const MethodSpec& m) { return m.kind == kind; });
}

std::string join_flags(const std::vector<std::string>& flags) {
    std::string out;
    for (const auto& f : flags) {
        if (!out.empty()) out.push_back(';');
        out += f;
    }
    return out;
}

std::string sanitize(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r' || c == ';') c = ' ';
    return s;
}

// Largest labelled set any (budget, scenario) pair can compose.
size_t worst_case_labelled(const CampaignConfig& cfg) {
    size_t worst = 0;
    for (const auto& sc : cfg.scenarios) {
        for (size_t bi = 0; bi < cfg.budgets.size(); ++bi) {
            const size_t floor_b = sc.min_benign[bi];
            const double residual =
                cfg.budgets[bi] - static_cast<double>(floor_b) * sc.cost.cost_benign;
            const size_t n_m = static_cast<size_t>(std::floor(residual / sc.cost.cost_malicious));
            worst = std::max(worst, floor_b + n_m);
        }
    }
    return worst;
}

} // namespace

uint64_t combo_seed(const CampaignConfig& cfg, size_t budget_index, size_t scenario_index) {
    return derive_seed(cfg.master_seed, {kComboTag, budget_index, scenario_index});
}

std::vector<std::string> validate_campaign(const CampaignConfig& cfg) {
    auto fail = [](const std::string& msg) { throw Error(Errc::config_error, msg); };

    if (cfg.methods.empty()) fail("methods: at least the three baselines are required");
    if (!has_method(cfg, MethodKind::sl_lower))
        fail("methods: lower-bound baseline 'sl_lower' is required");
    if (!has_method(cfg, MethodKind::ssl_vanilla))
        fail("methods: ablation baseline 'ssl_vanilla' is required");
    if (!has_method(cfg, MethodKind::sl_upper))
        fail("methods: upper-bound baseline 'sl_upper' is required");
    for (size_t i = 0; i < cfg.methods.size(); ++i)
        for (size_t j = i + 1; j < cfg.methods.size(); ++j)
            if (cfg.methods[i].id() == cfg.methods[j].id())
                fail("methods: duplicate entry '" + cfg.methods[i].name() + "'");

    if (cfg.n < 1) fail("n: labelled-set redraw count must be >= 1");
    if (cfg.k < 1) fail("k: future-set redraw count must be >= 1");
    if (cfg.budgets.empty()) fail("budgets: at least one labelling budget is required");
    if (cfg.scenarios.empty()) fail("scenarios: at least one cost scenario is required");
    if (!(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0))
        fail("test_fraction: must lie in (0, 1)");
    if (cfg.learner.n_trees < 1) fail("learner.n_trees: must be >= 1");
    if (cfg.learner.min_leaf < 1) fail("learner.min_leaf: must be >= 1");
    if (cfg.learner.max_depth < 0) fail("learner.max_depth: must be >= 0 (0 = unlimited)");
    if (cfg.active_repeats < 1) fail("active_repeats: must be >= 1");
    if (!(cfg.pseudo_threshold >= 0.0 && cfg.pseudo_threshold <= 1.0))
        fail("pseudo_threshold: must lie in [0, 1]");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) fail("alpha: must lie in (0, 1)");

    for (const auto& sc : cfg.scenarios) {
        const std::string where = "scenario '" + sc.cost.name + "'";
        if (!(sc.cost.cost_benign > 0.0)) fail(where + ": cost_benign must be > 0");
        if (!(sc.cost.cost_malicious > 0.0)) fail(where + ": cost_malicious must be > 0");
        if (sc.min_benign.size() != cfg.budgets.size())
            fail(where + ": min_benign needs one entry per budget (" +
                 std::to_string(cfg.budgets.size()) + ")");
        for (size_t bi = 0; bi < cfg.budgets.size(); ++bi) {
            const double floor_cost =
                static_cast<double>(sc.min_benign[bi]) * sc.cost.cost_benign + sc.cost.cost_malicious;
            if (cfg.budgets[bi] < floor_cost)
                fail(where + ", budget " + std::to_string(cfg.budgets[bi]) +
                     ": cannot cover min_benign plus one malicious label");
        }
    }
    return {};
}

std::vector<std::string> validate_campaign(const CampaignConfig& cfg, const LabeledDataset& d) {
    validate_campaign(cfg);
    std::vector<std::string> warnings;
    const size_t worst = worst_case_labelled(cfg);
    if (d.size() < 5 * worst)
        warnings.push_back("dataset '" + d.name() + "' has " + std::to_string(d.size()) +
                           " samples, below 5x the largest labelled set (" + std::to_string(worst) +
                           "); the labelled set may not stay smaller than the future set");
    return warnings;
}

std::vector<RunRecord> run_cell_unit(const LabeledDataset& d, const CellParams& cell,
                                     const CampaignConfig& cfg, int k_index, int n_index) {
    PartitionSpec spec;
    spec.test_fraction = cfg.test_fraction;
    spec.budget = cell.budget;
    spec.min_benign = cell.min_benign;
    spec.cost_scenario = cell.scenario;

    RandomStream split_rng(derive_seed(cell.combo_seed, {kFutureTag, static_cast<uint64_t>(k_index)}));
    const FutureSplit split = split_future(d, spec, split_rng);

    spec.seed = derive_seed(cell.combo_seed,
                            {kComposeTag, static_cast<uint64_t>(k_index), static_cast<uint64_t>(n_index)});
    RandomStream compose_rng(spec.seed);
    const LabelledComposition comp = compose_labelled(split.trainpool, spec, compose_rng);

    std::vector<RunRecord> records;
    records.reserve(cfg.methods.size());
    for (const MethodSpec& m : cfg.methods) {
        RunRecord rec;
        rec.method = m.name();
        rec.budget = cell.budget;
        rec.scenario = cell.scenario.name;
        rec.cost_benign = cell.scenario.cost_benign;
        rec.cost_malicious = cell.scenario.cost_malicious;
        rec.k_index = k_index;
        rec.n_index = n_index;
        rec.run_seed = derive_seed(cell.combo_seed, {kRunTag, static_cast<uint64_t>(k_index),
                                                     static_cast<uint64_t>(n_index),
                                                     static_cast<uint64_t>(m.id())});
        rec.size_labelled = comp.labelled.size();
        rec.labelled_benign = comp.labelled.n_benign();
        rec.labelled_malicious = comp.labelled.n_malicious();
        rec.size_unlabelled = comp.unlabelled.size();
        rec.unlabelled_benign = comp.unlabelled.truth_count(0);
        rec.unlabelled_malicious = comp.unlabelled.truth_count(1);
        rec.size_trainpool = split.trainpool.size();
        rec.trainpool_benign = split.trainpool.n_benign();
        rec.trainpool_malicious = split.trainpool.n_malicious();
        rec.size_future = split.future.size();
        rec.future_benign = split.future.n_benign();
        rec.future_malicious = split.future.n_malicious();
        rec.ratio_labelled = class_ratio(comp.labelled);
        rec.ratio_future = class_ratio(split.future);

        MethodContext ctx;
        ctx.labelled = &comp.labelled;
        ctx.pool = &comp.unlabelled;
        ctx.trainpool = &split.trainpool;
        ctx.future = &split.future;
        ctx.learner = cfg.learner;
        ctx.learner.seed = rec.run_seed;
        ctx.scenario = cell.scenario;
        ctx.pseudo_threshold = cfg.pseudo_threshold;
        ctx.active_repeats = cfg.active_repeats;
        ctx.draw_seed = derive_seed(rec.run_seed, {kDrawTag});

        try {
            const MethodResult res = run_method(m, ctx);
            rec.f1 = res.mean.f1;
            rec.precision = res.mean.precision;
            rec.recall = res.mean.recall;
            rec.epsilon_ms = res.epsilon_ms;
            rec.verified_spend = res.verified_spend;
            rec.flags = join_flags(res.flags);
            rec.repeat_f1s = res.repeat_f1s;
        } catch (const Error& e) {
            rec.flags = "failed:" + std::string(errc_name(e.code())) + " " + sanitize(e.what());
        } catch (const std::exception& e) {
            rec.flags = "failed:internal " + sanitize(e.what());
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<RunRecord> run_cell(const LabeledDataset& d, const CellParams& cell,
                                const CampaignConfig& cfg) {
    std::vector<RunRecord> out;
    for (int ki = 0; ki < cfg.k; ++ki)
        for (int ni = 0; ni < cfg.n; ++ni) {
            auto unit = run_cell_unit(d, cell, cfg, ki, ni);
            out.insert(out.end(), std::make_move_iterator(unit.begin()),
                       std::make_move_iterator(unit.end()));
        }
    return out;
}

CampaignResult run_campaign(const CampaignConfig& cfg, const LabeledDataset& d, int workers) {
    CampaignResult result;
    result.warnings = validate_campaign(cfg, d);
    result.dataset_name = d.name();
    result.dataset_size = d.size();
    result.dataset_benign = d.n_benign();
    result.dataset_malicious = d.n_malicious();
    result.dataset_dim = d.dim();

    struct Task {
        CellParams cell;
        int k_index;
        int n_index;
    };
    std::vector<Task> tasks;
    for (size_t si = 0; si < cfg.scenarios.size(); ++si)
        for (size_t bi = 0; bi < cfg.budgets.size(); ++bi) {
            CellParams cell;
            cell.budget = cfg.budgets[bi];
            cell.scenario = cfg.scenarios[si].cost;
            cell.min_benign = cfg.scenarios[si].min_benign[bi];
            cell.combo_seed = combo_seed(cfg, bi, si);
            for (int ki = 0; ki < cfg.k; ++ki)
                for (int ni = 0; ni < cfg.n; ++ni) tasks.push_back({cell, ki, ni});
        }

    std::vector<std::vector<RunRecord>> slots(tasks.size());
    std::atomic<size_t> next{0};
    auto worker_loop = [&] {
        for (;;) {
            const size_t t = next.fetch_add(1);
            if (t >= tasks.size()) return;
            slots[t] = run_cell_unit(d, tasks[t].cell, cfg, tasks[t].k_index, tasks[t].n_index);
        }
    };

    if (workers <= 1) {
        worker_loop();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker_loop);
        for (auto& t : pool) t.join();
    }

    for (auto& slot : slots)
        result.records.insert(result.records.end(), std::make_move_iterator(slot.begin()),
                              std::make_move_iterator(slot.end()));

    std::sort(result.records.begin(), result.records.end(), [](const RunRecord& a, const RunRecord& b) {
        return std::tie(a.method, a.budget, a.scenario, a.k_index, a.n_index, a.repeat_index) <
               std::tie(b.method, b.budget, b.scenario, b.k_index, b.n_index, b.repeat_index);
    });
    return result;
}

CampaignResult run_campaign(const CampaignConfig& cfg, int workers) {
    const LabeledDataset d = load_csv(cfg.dataset_path, cfg.label_column);
    return run_campaign(cfg, d, workers);
}

} // namespace sslbench
