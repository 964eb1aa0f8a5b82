#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "sslbench/cli.hpp"
#include "sslbench/config.hpp"
#include "sslbench/report.hpp"

using namespace sslbench;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

// dataset + config pair under one temp directory
std::string write_campaign_fixture(int n, int k, uint64_t master_seed) {
    const std::string dir = testutil::temp_path("campaign");
    std::filesystem::create_directories(dir);
    cmd_gen({300, 300, 2, 2.0, 5}, dir + "/data.csv");

    std::ostringstream cfg;
    cfg << R"({
  "dataset": "data.csv",
  "methods": "all",
  "n": )" << n << R"(, "k": )" << k << R"(,
  "budgets": [30, 60],
  "scenarios": [
    {"name": "balanced", "cost_benign": 1, "cost_malicious": 1, "min_benign": [15, 30]},
    {"name": "unbalanced", "cost_benign": 1, "cost_malicious": 2, "min_benign": [10, 20]}
  ],
  "learner": {"n_trees": 8, "max_depth": 6},
  "active_repeats": 2,
  "master_seed": )" << master_seed << R"(
})";
    testutil::write_text(dir + "/config.json", cfg.str());
    return dir;
}

} // namespace

TEST_CASE("config loader resolves paths and validates fields") {
    const std::string dir = write_campaign_fixture(1, 1, 7);
    const CampaignConfig cfg = load_campaign_config(dir + "/config.json");
    CHECK(cfg.methods.size() == 11);
    CHECK(cfg.dataset_path == dir + "/data.csv");
    CHECK(cfg.budgets == std::vector<double>{30, 60});
    CHECK(cfg.scenarios[1].cost.cost_malicious == 2);
    CHECK(cfg.learner.n_trees == 8);
    CHECK(cfg.pseudo_threshold == 0.99);
}

TEST_CASE("config errors name the offending field") {
    const std::string dir = testutil::temp_path("badcfg");
    std::filesystem::create_directories(dir);

    testutil::write_text(dir + "/no_methods.json",
                         R"({"dataset": "x.csv", "n": 1, "k": 1, "budgets": [10],
                             "scenarios": [{"name":"b","cost_benign":1,"cost_malicious":1,"min_benign":[5]}],
                             "master_seed": 1})");
    try {
        load_campaign_config(dir + "/no_methods.json");
        FAIL("expected config error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::config_error);
        CHECK(std::string(e.what()).rfind("methods", 0) == 0);
    }

    testutil::write_text(dir + "/bad_method.json",
                         R"({"dataset": "x.csv", "methods": ["sl_lower", "warp_drive"], "n": 1, "k": 1,
                             "budgets": [10],
                             "scenarios": [{"name":"b","cost_benign":1,"cost_malicious":1,"min_benign":[5]}],
                             "master_seed": 1})");
    try {
        load_campaign_config(dir + "/bad_method.json");
        FAIL("expected config error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("warp_drive") != std::string::npos);
    }

    testutil::write_text(dir + "/missing_baseline.json",
                         R"({"dataset": "x.csv", "methods": ["sl_upper", "ssl_vanilla"], "n": 1, "k": 1,
                             "budgets": [10],
                             "scenarios": [{"name":"b","cost_benign":1,"cost_malicious":1,"min_benign":[5]}],
                             "master_seed": 1})");
    try {
        load_campaign_config(dir + "/missing_baseline.json");
        FAIL("expected config error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("lower-bound baseline") != std::string::npos);
    }

    testutil::write_text(dir + "/not_json.json", "budgets = [1,2,3]\n");
    CHECK_THROWS_AS(load_campaign_config(dir + "/not_json.json"), Error);
}

TEST_CASE("gen writes a loadable dataset of the requested shape") {
    const std::string path = testutil::temp_path("gen") + ".csv";
    cmd_gen({100, 100, 2, 4.0, 7}, path);
    const LabeledDataset d = load_csv(path, "label");
    CHECK(d.size() == 200);
    CHECK(d.dim() == 2);
    CHECK(d.n_benign() == 100);

    // regenerating reloads to the identical dataset
    const std::string again = testutil::temp_path("gen") + ".csv";
    cmd_gen({100, 100, 2, 4.0, 7}, again);
    CHECK(slurp(path) == slurp(again));
}

TEST_CASE("run emits the three artifacts with the expected population") {
    const std::string dir = write_campaign_fixture(2, 1, 11);
    const RunOutputs outputs = cmd_run(dir + "/config.json", dir + "/out", 1);

    const auto records = read_results_csv(outputs.results_csv);
    // n*k per method per (budget, scenario) pair: 2 * (2*2) = 8 each
    REQUIRE(records.size() == 11u * 8u);
    for (const auto& r : records) {
        CHECK(r.size_labelled + r.size_unlabelled == r.size_trainpool);
        CHECK(r.repeat_f1s.size() == (r.method.find("active") != std::string::npos ? 2u : 1u));
    }

    const std::string stats = slurp(outputs.stats_csv);
    CHECK(stats.rfind("dataset,baseline,challenger,tails,pop_size,z,p,effect_size,verdict\n", 0) == 0);
    CHECK(std::count(stats.begin(), stats.end(), '\n') == 3); // header + two comparisons

    const std::string transparency = slurp(outputs.transparency_json);
    CHECK(transparency.find("\"framework_version\"") != std::string::npos);
    CHECK(transparency.find("\"runs\"") != std::string::npos);
}

TEST_CASE("rerunning a config reproduces the results bytes up to wall time") {
    const std::string dir = write_campaign_fixture(1, 2, 13);
    const RunOutputs a = cmd_run(dir + "/config.json", dir + "/out_a", 1);
    const RunOutputs b = cmd_run(dir + "/config.json", dir + "/out_b", 2);

    const std::string raw_a = slurp(a.results_csv);
    const std::string raw_b = slurp(b.results_csv);
    CHECK(raw_a != raw_b); // epsilon columns differ between runs
    CHECK(strip_epsilon_column(raw_a) == strip_epsilon_column(raw_b));
    CHECK(slurp(a.stats_csv) == slurp(b.stats_csv));
}

TEST_CASE("plot aggregation arithmetic") {
    std::vector<RunRecord> records;
    RunRecord r;
    r.method = "sl_lower";
    r.scenario = "balanced";
    r.budget = 10;
    r.f1 = 0.4;
    records.push_back(r);

    auto rows = plot_data(records);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].mean_f1 == 0.4);
    CHECK(rows[0].std_f1 == 0.0);
    CHECK(rows[0].count == 1);

    r.f1 = 0.6;
    r.n_index = 1;
    records.push_back(r);
    rows = plot_data(records);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].mean_f1 == doctest::Approx(0.5));
    CHECK(rows[0].count == 2);
    CHECK(rows[0].std_f1 == doctest::Approx(0.1));
}

TEST_CASE("plotdata command round-trips through the results file") {
    const std::string dir = write_campaign_fixture(1, 1, 17);
    const RunOutputs outputs = cmd_run(dir + "/config.json", dir + "/out", 1);
    cmd_plotdata(outputs.results_csv, dir + "/plot.csv");

    const std::string text = slurp(dir + "/plot.csv");
    CHECK(text.rfind("scenario,budget,method,mean_f1,std_f1,count", 0) == 0);
    // one row per (scenario, budget, method): 2*2*11 plus header
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 2 * 2 * 11);
    CHECK(text.find(",1\n") != std::string::npos); // n*k = 1 record per group
}

TEST_CASE("cli binary reports machine-parsable errors and exit codes") {
    const std::string dir = testutil::temp_path("cli");
    std::filesystem::create_directories(dir);

    std::string cmd = std::string(SSLBENCH_CLI_PATH) + " gen --benign 20 --malicious 20 --dim 2" +
                      " --sep 3 --seed 9 --out " + dir + "/g.csv > " + dir + "/gen.log 2>&1";
    REQUIRE(std::system(cmd.c_str()) == 0);
    CHECK(load_csv(dir + "/g.csv", "label").size() == 40);

    cmd = std::string(SSLBENCH_CLI_PATH) + " run --config " + dir + "/missing.json 2> " + dir +
          "/err.log";
    CHECK(std::system(cmd.c_str()) != 0);
    const std::string err = slurp(dir + "/err.log");
    CHECK(err.rfind("error: ", 0) == 0);
    CHECK(std::count(err.begin(), err.end(), '\n') == 1); // single line

    cmd = std::string(SSLBENCH_CLI_PATH) + " frobnicate 2> /dev/null";
    CHECK(std::system(cmd.c_str()) != 0);
}
