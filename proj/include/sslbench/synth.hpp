#pragma once

#include <cstdint>

#include "sslbench/dataset.hpp"

namespace sslbench {

// Two spherical unit-variance Gaussian blobs: benign at the origin,
// malicious at (separation, 0, ..., 0). The gap is measured in units of
// the shared per-axis standard deviation, so the Bayes error of the pair
// is Phi(-separation / 2).
struct SynthSpec {
    size_t n_benign = 0;
    size_t n_malicious = 0;
    size_t dim = 1;
    double separation = 0.0;
    uint64_t seed = 0;
};

// Deterministic: coordinate (i, d) is a Box-Muller transform of a
// counter-based uniform stream keyed by (seed, i, d), so the output is
// independent of generation order.
LabeledDataset generate(const SynthSpec& spec);

} // namespace sslbench
