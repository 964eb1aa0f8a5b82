#include "sslbench/synth.hpp"

namespace sslbench {

LabeledDataset generate(const SynthSpec& spec) {
    if (spec.n_benign < 1 || spec.n_malicious < 1)
        throw Error(Errc::config_error, "synthetic spec needs at least one sample per class");
    if (spec.dim < 1) throw Error(Errc::config_error, "synthetic spec needs dim >= 1");

    LabeledDataset out("synthetic", spec.dim);
    std::vector<double> row(spec.dim);
    const size_t n = spec.n_benign + spec.n_malicious;
    for (size_t i = 0; i < n; ++i) {
        const bool malicious = i >= spec.n_benign;
        for (size_t d = 0; d < spec.dim; ++d) {
            RandomStream coord(derive_seed(spec.seed, {i, d}));
            row[d] = coord.next_normal();
        }
        if (malicious) row[0] += spec.separation;
        out.add(row, malicious ? 1 : 0, static_cast<int64_t>(i));
    }
    return out;
}

} // namespace sslbench
