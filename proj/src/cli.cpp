#include "sslbench/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "sslbench/config.hpp"
#include "sslbench/report.hpp"

namespace sslbench {

namespace {

int default_workers() {
    if (const char* env = std::getenv("SSLBENCH_WORKERS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return 1;
}

} // namespace

RunOutputs cmd_run(const std::string& config_path, const std::string& out_dir, int workers,
                   std::string* summary_out) {
    const CampaignConfig cfg = load_campaign_config(config_path);
    std::filesystem::create_directories(out_dir);

    const CampaignResult result = run_campaign(cfg, workers);

    std::vector<ComparisonOutcome> comparisons;
    const std::string best_pseudo = best_pure_pseudo_method(result.records);
    const std::string best_active = best_active_method(result.records);
    if (!best_pseudo.empty())
        comparisons.push_back(
            compare_methods(result.records, "sl_lower", best_pseudo, cfg.tails, cfg.alpha, cfg));
    if (!best_active.empty())
        comparisons.push_back(
            compare_methods(result.records, "sl_lower", best_active, cfg.tails, cfg.alpha, cfg));

    RunOutputs out;
    out.results_csv = (std::filesystem::path(out_dir) / "results.csv").string();
    out.stats_csv = (std::filesystem::path(out_dir) / "stats.csv").string();
    out.transparency_json = (std::filesystem::path(out_dir) / "transparency.json").string();
    write_results_csv(result.records, out.results_csv);
    write_stats_csv(comparisons, result.dataset_name, out.stats_csv);
    write_transparency_json(result, cfg, comparisons, out.transparency_json);

    std::string summary;
    for (const std::string& w : result.warnings) summary += "warning: " + w + "\n";
    summary += summary_table(comparisons, result.dataset_name);
    if (summary_out) *summary_out = summary;
    return out;
}

void cmd_plotdata(const std::string& results_path, const std::string& out_path) {
    const auto records = read_results_csv(results_path);
    write_plotdata_csv(plot_data(records), out_path);
}

void cmd_gen(const SynthSpec& spec, const std::string& out_path) {
    write_csv(generate(spec), out_path);
}

int cli_main(int argc, char** argv) {
    CLI::App app{"labelling-budget benchmark for semisupervised threat detectors"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", results_path, out_path = "plotdata.csv";
    int workers = default_workers();

    CLI::App* run = app.add_subcommand("run", "execute a benchmark campaign");
    run->add_option("--config", config_path, "campaign config (JSON)")->required();
    run->add_option("--out-dir", out_dir, "output directory");
    run->add_option("--workers", workers, "worker thread count (default $SSLBENCH_WORKERS or 1)");

    CLI::App* plot = app.add_subcommand("plotdata", "aggregate results for plotting");
    plot->add_option("--results", results_path, "results.csv from a run")->required();
    plot->add_option("--out", out_path, "output CSV path");

    SynthSpec spec;
    std::string gen_out = "synthetic.csv";
    CLI::App* gen = app.add_subcommand("gen", "generate a synthetic dataset");
    gen->add_option("--benign", spec.n_benign, "benign sample count")->required();
    gen->add_option("--malicious", spec.n_malicious, "malicious sample count")->required();
    gen->add_option("--dim", spec.dim, "feature dimensionality")->required();
    gen->add_option("--sep", spec.separation, "class mean separation in sigma units")->required();
    gen->add_option("--seed", spec.seed, "generator seed")->required();
    gen->add_option("--out", gen_out, "output CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (run->parsed()) {
            if (workers < 1) throw Error(Errc::config_error, "workers: must be >= 1");
            std::string summary;
            const RunOutputs outputs = cmd_run(config_path, out_dir, workers, &summary);
            std::cout << summary;
            std::cout << "results: " << outputs.results_csv << '\n'
                      << "stats: " << outputs.stats_csv << '\n'
                      << "transparency: " << outputs.transparency_json << '\n';
        } else if (plot->parsed()) {
            cmd_plotdata(results_path, out_path);
            std::cout << "plot data: " << out_path << '\n';
        } else if (gen->parsed()) {
            cmd_gen(spec, gen_out);
            std::cout << "dataset: " << gen_out << '\n';
        }
    } catch (const Error& e) {
        std::cerr << "error: " << errc_name(e.code()) << ": " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

} // namespace sslbench
