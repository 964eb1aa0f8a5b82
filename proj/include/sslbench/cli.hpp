#pragma once

#include <string>

#include "sslbench/synth.hpp"

namespace sslbench {

struct RunOutputs {
    std::string results_csv;
    std::string stats_csv;
    std::string transparency_json;
};

// run: executes the campaign, writes results.csv / stats.csv /
// transparency.json under out_dir and returns their paths. Baseline
// comparisons cover the best pure pseudo-labelling and the best active
// method against sl_lower.
RunOutputs cmd_run(const std::string& config_path, const std::string& out_dir, int workers,
                   std::string* summary_out = nullptr);

// plotdata: long-format (scenario, budget, method, mean, std, count) CSV.
void cmd_plotdata(const std::string& results_path, const std::string& out_path);

// gen: synthetic dataset CSV.
void cmd_gen(const SynthSpec& spec, const std::string& out_path);

// Full command-line front end; prints "error: ..." one-liners and returns
// nonzero on failure.
int cli_main(int argc, char** argv);

} // namespace sslbench
