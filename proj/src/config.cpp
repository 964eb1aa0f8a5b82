#include "sslbench/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sslbench {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
    throw Error(Errc::config_error, field + ": " + msg);
}

template <class T>
T require(const json& j, const std::string& field) {
    if (!j.contains(field)) fail(field, "missing required field");
    try {
        return j.at(field).get<T>();
    } catch (const json::exception&) {
        fail(field, "has the wrong type");
    }
}

template <class T>
T optional(const json& j, const std::string& field, T fallback) {
    if (!j.contains(field)) return fallback;
    try {
        return j.at(field).get<T>();
    } catch (const json::exception&) {
        fail(field, "has the wrong type");
    }
}

} // namespace

CampaignConfig load_campaign_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::missing_file, "cannot open config file: " + path);

    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        fail("config", std::string("invalid JSON: ") + e.what());
    }

    CampaignConfig cfg;
    cfg.dataset_path = require<std::string>(j, "dataset");
    const auto dataset_path = std::filesystem::path(cfg.dataset_path);
    if (dataset_path.is_relative())
        cfg.dataset_path = (std::filesystem::path(path).parent_path() / dataset_path).string();
    cfg.label_column = optional<std::string>(j, "label_column", "label");

    if (!j.contains("methods")) fail("methods", "missing required field");
    if (j.at("methods").is_string() && j.at("methods").get<std::string>() == "all") {
        cfg.methods = standard_method_suite();
    } else {
        for (const std::string& name : require<std::vector<std::string>>(j, "methods")) {
            const auto spec = MethodSpec::parse(name);
            if (!spec) fail("methods", "unknown method '" + name + "'");
            cfg.methods.push_back(*spec);
        }
    }

    cfg.n = require<int>(j, "n");
    cfg.k = require<int>(j, "k");
    cfg.budgets = require<std::vector<double>>(j, "budgets");
    cfg.test_fraction = optional<double>(j, "test_fraction", 0.2);
    cfg.master_seed = require<uint64_t>(j, "master_seed");
    cfg.active_repeats = optional<int>(j, "active_repeats", 5);
    cfg.pseudo_threshold = optional<double>(j, "pseudo_threshold", kHighBandMin);
    cfg.alpha = optional<double>(j, "alpha", 0.05);
    const int tails = optional<int>(j, "tails", 2);
    if (tails != 1 && tails != 2) fail("tails", "must be 1 or 2");
    cfg.tails = tails == 1 ? Tails::one : Tails::two;
    cfg.benefit_gap_delta = optional<double>(j, "benefit_gap_delta", 0.05);
    cfg.u_fixed = optional<double>(j, "u_fixed", 0.0);
    cfg.epsilon_cost_rate = optional<double>(j, "epsilon_cost_rate", 0.0);

    if (j.contains("learner")) {
        const json& l = j.at("learner");
        cfg.learner.n_trees = optional<int>(l, "n_trees", 100);
        cfg.learner.max_depth = optional<int>(l, "max_depth", 0);
        cfg.learner.min_leaf = optional<int>(l, "min_leaf", 1);
        cfg.learner.bootstrap = optional<bool>(l, "bootstrap", true);
    }

    if (!j.contains("scenarios") || !j.at("scenarios").is_array() || j.at("scenarios").empty())
        fail("scenarios", "needs a nonempty array of cost scenarios");
    for (const json& s : j.at("scenarios")) {
        ScenarioConfig sc;
        sc.cost.name = require<std::string>(s, "name");
        sc.cost.cost_benign = require<double>(s, "cost_benign");
        sc.cost.cost_malicious = require<double>(s, "cost_malicious");
        sc.min_benign = require<std::vector<size_t>>(s, "min_benign");
        cfg.scenarios.push_back(std::move(sc));
    }

    validate_campaign(cfg);
    return cfg;
}

std::string campaign_config_summary(const CampaignConfig& cfg) {
    std::ostringstream out;
    out << "dataset=" << cfg.dataset_path << " methods=" << cfg.methods.size() << " n=" << cfg.n
        << " k=" << cfg.k << " budgets=" << cfg.budgets.size()
        << " scenarios=" << cfg.scenarios.size() << " seed=" << cfg.master_seed;
    return out.str();
}

} // namespace sslbench
