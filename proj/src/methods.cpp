#include "sslbench/methods.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sslbench/timing.hpp"

namespace sslbench {

namespace {

constexpr uint64_t kHalveTag = 0x68616c76;  // sub-stream for budget halving
constexpr uint64_t kRepeatTag = 0x72657074; // sub-stream per oracle redraw

double label_cost(size_t n_benign, size_t n_malicious, const CostScenario& s) {
    return static_cast<double>(n_benign) * s.cost_benign +
           static_cast<double>(n_malicious) * s.cost_malicious;
}

MixedLabelledSet mixed_from(const LabeledDataset& labelled) {
    MixedLabelledSet m;
    m.data = LabeledDataset(labelled.name(), labelled.dim());
    for (size_t i = 0; i < labelled.size(); ++i) m.add_correct(labelled, i);
    return m;
}

Metrics finish_single(MethodResult& r, const FittedModel& model, const LabeledDataset& future) {
    ConfusionCounts confusion;
    r.stage_ms.emplace_back("evaluate",
                            measure_epsilon_ms([&] { confusion = evaluate(model, future); }));
    const Metrics m = metrics(confusion);
    r.mean = m;
    r.repeat_f1s = {m.f1};
    for (const auto& [_, ms] : r.stage_ms) r.epsilon_ms += ms;
    return m;
}

} // namespace

std::string MethodSpec::name() const {
    switch (kind) {
        case MethodKind::sl_lower: return "sl_lower";
        case MethodKind::sl_upper: return "sl_upper";
        case MethodKind::ssl_vanilla: return "ssl_vanilla";
        case MethodKind::pseudo: return "pseudo";
        case MethodKind::pseudo_iterated: return "pseudo_iterated";
        case MethodKind::active:
        case MethodKind::pseudo_active: {
            const char* base = kind == MethodKind::active ? "active" : "pseudo_active";
            const char* suffix =
                band == Band::low ? "_low" : (band == Band::other ? "_other" : "_high");
            return std::string(base) + suffix;
        }
    }
    return "unknown";
}

int MethodSpec::id() const {
    switch (kind) {
        case MethodKind::sl_lower: return 0;
        case MethodKind::sl_upper: return 1;
        case MethodKind::ssl_vanilla: return 2;
        case MethodKind::pseudo: return 3;
        case MethodKind::pseudo_iterated: return 4;
        case MethodKind::active:
            return 5 + (band == Band::low ? 0 : band == Band::other ? 1 : 2);
        case MethodKind::pseudo_active:
            return 8 + (band == Band::low ? 0 : band == Band::other ? 1 : 2);
    }
    return -1;
}

std::optional<MethodSpec> MethodSpec::parse(const std::string& name) {
    for (const MethodSpec& m : standard_method_suite())
        if (m.name() == name) return m;
    return std::nullopt;
}

std::vector<MethodSpec> standard_method_suite() {
    std::vector<MethodSpec> out;
    out.push_back({MethodKind::sl_lower});
    out.push_back({MethodKind::sl_upper});
    out.push_back({MethodKind::ssl_vanilla});
    out.push_back({MethodKind::pseudo});
    out.push_back({MethodKind::pseudo_iterated});
    for (Band b : {Band::low, Band::other, Band::high}) out.push_back({MethodKind::active, b});
    for (Band b : {Band::low, Band::other, Band::high}) out.push_back({MethodKind::pseudo_active, b});
    return out;
}

size_t MixedLabelledSet::n_correct() const {
    size_t n = 0;
    for (uint8_t o : origin) n += (o == 0);
    return n;
}

void MixedLabelledSet::add_correct(const LabeledDataset& src, size_t row) {
    data.add(src.features_of(row), src.label(row), src.id(row));
    origin.push_back(0);
}

void MixedLabelledSet::add_pseudo(std::span<const double> features, int pseudo_label, int64_t id) {
    data.add(features, pseudo_label, id);
    origin.push_back(1);
}

double MethodResult::stage(const std::string& name) const {
    double total = 0.0;
    for (const auto& [n, ms] : stage_ms)
        if (n == name) total += ms;
    return total;
}

ConfusionCounts evaluate(const FittedModel& model, const LabeledDataset& future) {
    ConfusionCounts c;
    for (size_t i = 0; i < future.size(); ++i) {
        const int predicted = model.predict_one(future.features_of(i)).label;
        const int truth = future.label(i);
        if (truth == 1)
            (predicted == 1 ? c.tp : c.fn)++;
        else
            (predicted == 1 ? c.fp : c.tn)++;
    }
    return c;
}

MethodResult run_sl_lower(const LabeledDataset& labelled, const LabeledDataset& future,
                          const LearnerConfig& cfg) {
    MethodResult r;
    FittedModel model;
    r.stage_ms.emplace_back("fit", measure_epsilon_ms([&] { model = fit(labelled, cfg); }));
    r.final_train_size = labelled.size();
    r.verified_count = labelled.size();
    finish_single(r, model, future);
    return r;
}

MethodResult run_sl_upper(const LabeledDataset& trainpool, const LabeledDataset& future,
                          const LearnerConfig& cfg) {
    MethodResult r;
    FittedModel model;
    r.stage_ms.emplace_back("fit", measure_epsilon_ms([&] { model = fit(trainpool, cfg); }));
    r.final_train_size = trainpool.size();
    r.verified_count = trainpool.size();
    finish_single(r, model, future);
    return r;
}

MethodResult run_vanilla_ssl(const LabeledDataset& labelled, const UnlabeledPool& pool,
                             const LabeledDataset& future, const LearnerConfig& cfg) {
    if (pool.size() == 0)
        throw Error(Errc::empty_dataset, "vanilla pipeline needs a nonempty unlabelled pool");
    MethodResult r;
    FittedModel initial;
    r.stage_ms.emplace_back("fit_initial", measure_epsilon_ms([&] { initial = fit(labelled, cfg); }));

    std::vector<Prediction> preds;
    r.stage_ms.emplace_back("predict_pool",
                            measure_epsilon_ms([&] { preds = predict(initial, pool.features()); }));

    MixedLabelledSet mixed = mixed_from(labelled);
    for (size_t i = 0; i < pool.size(); ++i) {
        mixed.add_pseudo(pool.features_of(i), preds[i].label, pool.id(i));
        r.provenance.pseudo_stage1.push_back(pool.id(i));
    }

    FittedModel final_model;
    r.stage_ms.emplace_back("fit_final", measure_epsilon_ms([&] { final_model = fit(mixed.data, cfg); }));
    r.final_train_size = mixed.data.size();
    r.verified_count = labelled.size();
    finish_single(r, final_model, future);
    return r;
}

MethodResult run_pseudo(const LabeledDataset& labelled, const UnlabeledPool& pool,
                        const LabeledDataset& future, const LearnerConfig& cfg, double threshold) {
    MethodResult r;
    FittedModel initial;
    r.stage_ms.emplace_back("fit_initial", measure_epsilon_ms([&] { initial = fit(labelled, cfg); }));

    std::vector<Prediction> preds;
    r.stage_ms.emplace_back("predict_pool",
                            measure_epsilon_ms([&] { preds = predict(initial, pool.features()); }));

    MixedLabelledSet mixed = mixed_from(labelled);
    for (size_t i = 0; i < pool.size(); ++i) {
        if (preds[i].confidence >= threshold) {
            mixed.add_pseudo(pool.features_of(i), preds[i].label, pool.id(i));
            r.provenance.pseudo_stage1.push_back(pool.id(i));
        }
    }

    FittedModel final_model;
    r.stage_ms.emplace_back("fit_final", measure_epsilon_ms([&] { final_model = fit(mixed.data, cfg); }));
    r.final_train_size = mixed.data.size();
    r.verified_count = labelled.size();
    finish_single(r, final_model, future);
    return r;
}

MethodResult run_pseudo_iterated(const LabeledDataset& labelled, const UnlabeledPool& pool,
                                 const LabeledDataset& future, const LearnerConfig& cfg,
                                 double threshold) {
    MethodResult r;
    FittedModel initial;
    r.stage_ms.emplace_back("fit_initial", measure_epsilon_ms([&] { initial = fit(labelled, cfg); }));

    std::vector<Prediction> preds;
    r.stage_ms.emplace_back("predict_pool",
                            measure_epsilon_ms([&] { preds = predict(initial, pool.features()); }));

    MixedLabelledSet mixed = mixed_from(labelled);
    std::vector<uint32_t> remainder;
    for (size_t i = 0; i < pool.size(); ++i) {
        if (preds[i].confidence >= threshold) {
            mixed.add_pseudo(pool.features_of(i), preds[i].label, pool.id(i));
            r.provenance.pseudo_stage1.push_back(pool.id(i));
        } else {
            remainder.push_back(static_cast<uint32_t>(i));
        }
    }

    FittedModel stage1;
    r.stage_ms.emplace_back("fit_stage1", measure_epsilon_ms([&] { stage1 = fit(mixed.data, cfg); }));

    // second admission pass over the rows never admitted in pass one
    r.stage_ms.emplace_back("predict_remainder", measure_epsilon_ms([&] {
                                for (uint32_t i : remainder) {
                                    const Prediction p = stage1.predict_one(pool.features_of(i));
                                    if (p.confidence >= threshold) {
                                        mixed.add_pseudo(pool.features_of(i), p.label, pool.id(i));
                                        r.provenance.pseudo_stage2.push_back(pool.id(i));
                                    }
                                }
                            }));

    FittedModel final_model;
    r.stage_ms.emplace_back("fit_final", measure_epsilon_ms([&] { final_model = fit(mixed.data, cfg); }));
    r.final_train_size = mixed.data.size();
    r.verified_count = labelled.size();
    finish_single(r, final_model, future);
    return r;
}

HalvedLabelled halve_labelled(const LabeledDataset& labelled, const CostScenario& scenario,
                              RandomStream& rng) {
    std::vector<uint32_t> by_class[2];
    for (size_t i = 0; i < labelled.size(); ++i)
        by_class[labelled.label(i)].push_back(static_cast<uint32_t>(i));
    for (int c = 0; c < 2; ++c)
        if (by_class[c].size() < 2)
            throw Error(Errc::too_few_samples,
                        std::string("cannot halve: fewer than 2 ") +
                            (c == 0 ? "benign" : "malicious") + " labelled samples");

    std::vector<uint8_t> removed(labelled.size(), 0);
    HalvedLabelled out;
    for (int c = 0; c < 2; ++c) {
        const size_t drop = by_class[c].size() / 2;
        for (uint32_t pick : sample_indices(by_class[c].size(), drop, rng))
            removed[by_class[c][pick]] = 1;
        out.restored_budget +=
            static_cast<double>(drop) * (c == 0 ? scenario.cost_benign : scenario.cost_malicious);
    }

    out.half = LabeledDataset(labelled.name(), labelled.dim());
    for (size_t i = 0; i < labelled.size(); ++i)
        if (!removed[i]) out.half.add(labelled.features_of(i), labelled.label(i), labelled.id(i));
    return out;
}

namespace {

// Oracle stage shared by the two active pipelines: per repeat, reveal true
// labels for `quota` candidate rows (uniform draw), topping up from the
// non-candidate remainder when the band cannot fill the quota.
struct OracleStage {
    std::vector<uint32_t> candidates; // pool rows inside the band
    std::vector<uint32_t> fallback;   // pool rows outside the band, still unlabelled
    size_t quota = 0;
    bool band_exhausted = false;
    bool pool_exhausted = false;

    std::vector<uint32_t> draw(RandomStream& rng) const {
        std::vector<uint32_t> chosen;
        if (candidates.size() >= quota) {
            for (uint32_t pick : sample_indices(candidates.size(), quota, rng))
                chosen.push_back(candidates[pick]);
        } else {
            chosen = candidates;
            const size_t missing = std::min(quota - candidates.size(), fallback.size());
            for (uint32_t pick : sample_indices(fallback.size(), missing, rng))
                chosen.push_back(fallback[pick]);
        }
        return chosen;
    }
};

OracleStage plan_oracle(const std::vector<uint32_t>& rows, const std::vector<Prediction>& preds,
                        Band band, size_t quota) {
    OracleStage stage;
    stage.quota = quota;
    for (size_t j = 0; j < rows.size(); ++j) {
        if (in_band(preds[j].confidence, band))
            stage.candidates.push_back(rows[j]);
        else
            stage.fallback.push_back(rows[j]);
    }
    stage.band_exhausted = stage.candidates.size() < quota;
    stage.pool_exhausted = rows.size() < quota;
    return stage;
}

MethodResult run_active_family(const LabeledDataset& labelled, const UnlabeledPool& pool,
                               const LabeledDataset& future, const LearnerConfig& cfg, Band band,
                               const CostScenario& scenario, uint64_t draw_seed, int repeats,
                               bool with_pseudo_support, double threshold) {
    if (repeats < 1) throw Error(Errc::config_error, "active pipelines need repeats >= 1");

    MethodResult r;
    RandomStream halve_rng(derive_seed(draw_seed, {kHalveTag}));
    HalvedLabelled halved;
    r.stage_ms.emplace_back(
        "halve", measure_epsilon_ms([&] { halved = halve_labelled(labelled, scenario, halve_rng); }));

    FittedModel support;
    r.stage_ms.emplace_back("fit_support",
                            measure_epsilon_ms([&] { support = fit(halved.half, cfg); }));

    std::vector<Prediction> pool_preds;
    r.stage_ms.emplace_back(
        "predict_pool", measure_epsilon_ms([&] { pool_preds = predict(support, pool.features()); }));

    // Base training set per repeat: the halved set alone, or the halved
    // set plus high-confidence pseudo-labels with a refreshed prediction
    // of the never-admitted remainder.
    MixedLabelledSet base = mixed_from(halved.half);
    std::vector<uint32_t> remainder_rows;
    std::vector<Prediction> remainder_preds;
    if (with_pseudo_support) {
        for (size_t i = 0; i < pool.size(); ++i) {
            if (pool_preds[i].confidence >= threshold) {
                base.add_pseudo(pool.features_of(i), pool_preds[i].label, pool.id(i));
                r.provenance.pseudo_stage1.push_back(pool.id(i));
            } else {
                remainder_rows.push_back(static_cast<uint32_t>(i));
            }
        }
        FittedModel pseudo_support;
        r.stage_ms.emplace_back(
            "fit_pseudo_support", measure_epsilon_ms([&] { pseudo_support = fit(base.data, cfg); }));
        r.stage_ms.emplace_back("predict_remainder", measure_epsilon_ms([&] {
                                    remainder_preds.reserve(remainder_rows.size());
                                    for (uint32_t i : remainder_rows)
                                        remainder_preds.push_back(
                                            pseudo_support.predict_one(pool.features_of(i)));
                                }));
    } else {
        remainder_rows.resize(pool.size());
        std::iota(remainder_rows.begin(), remainder_rows.end(), 0u);
        remainder_preds = pool_preds;
    }

    const size_t quota = labelled.size() - halved.half.size();
    const OracleStage oracle = plan_oracle(remainder_rows, remainder_preds, band, quota);
    if (oracle.band_exhausted) r.flags.push_back("band_exhausted");
    if (oracle.pool_exhausted) r.flags.push_back("pool_exhausted");

    Metrics total;
    for (int rep = 0; rep < repeats; ++rep) {
        RandomStream rep_rng(derive_seed(draw_seed, {kRepeatTag, static_cast<uint64_t>(rep)}));
        const std::vector<uint32_t> chosen = oracle.draw(rep_rng);

        LabeledDataset final_set = base.data;
        std::vector<int64_t> oracle_ids;
        for (uint32_t i : chosen) {
            final_set.add(pool.features_of(i), pool.truth_label(i), pool.id(i));
            oracle_ids.push_back(pool.id(i));
        }
        r.provenance.oracle_per_repeat.push_back(std::move(oracle_ids));

        FittedModel final_model;
        r.stage_ms.emplace_back("fit_final",
                                measure_epsilon_ms([&] { final_model = fit(final_set, cfg); }));
        ConfusionCounts confusion;
        r.stage_ms.emplace_back("evaluate",
                                measure_epsilon_ms([&] { confusion = evaluate(final_model, future); }));
        const Metrics m = metrics(confusion);
        total.f1 += m.f1;
        total.precision += m.precision;
        total.recall += m.recall;
        r.repeat_f1s.push_back(m.f1);
        r.final_train_size = final_set.size();
    }

    r.mean = {total.f1 / repeats, total.precision / repeats, total.recall / repeats};
    double all_ms = 0.0;
    for (const auto& [_, ms] : r.stage_ms) all_ms += ms;
    r.epsilon_ms = all_ms / repeats;

    // per-suggestion cost is standardized to restored_budget / quota, so
    // the oracle hands back exactly the restored half of the budget
    const size_t oracle_count = oracle.pool_exhausted ? remainder_rows.size() : quota;
    const double per_suggestion = halved.restored_budget / static_cast<double>(quota);
    r.verified_count = halved.half.size() + oracle_count;
    r.verified_spend =
        label_cost(halved.half.n_benign(), halved.half.n_malicious(), scenario) +
        per_suggestion * static_cast<double>(oracle_count);
    return r;
}

} // namespace

MethodResult run_active(const LabeledDataset& labelled, const UnlabeledPool& pool,
                        const LabeledDataset& future, const LearnerConfig& cfg, Band band,
                        const CostScenario& scenario, uint64_t draw_seed, int repeats) {
    return run_active_family(labelled, pool, future, cfg, band, scenario, draw_seed, repeats, false,
                             kHighBandMin);
}

MethodResult run_pseudo_active(const LabeledDataset& labelled, const UnlabeledPool& pool,
                               const LabeledDataset& future, const LearnerConfig& cfg, Band band,
                               const CostScenario& scenario, uint64_t draw_seed, int repeats,
                               double threshold) {
    return run_active_family(labelled, pool, future, cfg, band, scenario, draw_seed, repeats, true,
                             threshold);
}

MethodResult run_method(const MethodSpec& spec, const MethodContext& ctx) {
    MethodResult r;
    switch (spec.kind) {
        case MethodKind::sl_lower:
            r = run_sl_lower(*ctx.labelled, *ctx.future, ctx.learner);
            break;
        case MethodKind::sl_upper:
            r = run_sl_upper(*ctx.trainpool, *ctx.future, ctx.learner);
            break;
        case MethodKind::ssl_vanilla:
            r = run_vanilla_ssl(*ctx.labelled, *ctx.pool, *ctx.future, ctx.learner);
            break;
        case MethodKind::pseudo:
            r = run_pseudo(*ctx.labelled, *ctx.pool, *ctx.future, ctx.learner, ctx.pseudo_threshold);
            break;
        case MethodKind::pseudo_iterated:
            r = run_pseudo_iterated(*ctx.labelled, *ctx.pool, *ctx.future, ctx.learner,
                                    ctx.pseudo_threshold);
            break;
        case MethodKind::active:
            r = run_active(*ctx.labelled, *ctx.pool, *ctx.future, ctx.learner, spec.band,
                           ctx.scenario, ctx.draw_seed, ctx.active_repeats);
            break;
        case MethodKind::pseudo_active:
            r = run_pseudo_active(*ctx.labelled, *ctx.pool, *ctx.future, ctx.learner, spec.band,
                                  ctx.scenario, ctx.draw_seed, ctx.active_repeats,
                                  ctx.pseudo_threshold);
            break;
    }
    if (!spec.is_active()) {
        const LabeledDataset& spent_on =
            spec.kind == MethodKind::sl_upper ? *ctx.trainpool : *ctx.labelled;
        r.verified_spend = label_cost(spent_on.n_benign(), spent_on.n_malicious(), ctx.scenario);
    }
    return r;
}

} // namespace sslbench
