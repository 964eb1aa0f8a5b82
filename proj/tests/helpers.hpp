#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "sslbench/dataset.hpp"
#include "sslbench/synth.hpp"

namespace testutil {

inline std::string temp_path(const std::string& stem) {
    static std::atomic<int> counter{0};
    const auto dir = std::filesystem::temp_directory_path() / "sslbench_tests";
    std::filesystem::create_directories(dir);
    return (dir / (stem + "_" + std::to_string(counter.fetch_add(1)))).string();
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

// rows of (features..., label), ids assigned in order
inline sslbench::LabeledDataset make_dataset(const std::vector<std::vector<double>>& rows) {
    sslbench::LabeledDataset d("toy", rows.empty() ? 0 : rows.front().size() - 1);
    int64_t id = 0;
    for (const auto& r : rows) {
        std::vector<double> features(r.begin(), r.end() - 1);
        d.add(features, static_cast<int>(r.back()), id++);
    }
    return d;
}

// well-separated 1-D clusters: benign near -center, malicious near +center
inline sslbench::LabeledDataset separated_clusters(size_t per_class, double center = 1.0,
                                                   uint64_t seed = 1) {
    sslbench::SynthSpec spec;
    spec.n_benign = per_class;
    spec.n_malicious = per_class;
    spec.dim = 1;
    spec.separation = 2.0 * center * 10.0; // far apart relative to unit variance
    spec.seed = seed;
    return sslbench::generate(spec);
}

inline std::vector<int64_t> ids_of(const sslbench::LabeledDataset& d) {
    std::vector<int64_t> out;
    out.reserve(d.size());
    for (size_t i = 0; i < d.size(); ++i) out.push_back(d.id(i));
    return out;
}

inline std::vector<int64_t> ids_of(const sslbench::UnlabeledPool& p) {
    std::vector<int64_t> out;
    out.reserve(p.size());
    for (size_t i = 0; i < p.size(); ++i) out.push_back(p.id(i));
    return out;
}

} // namespace testutil
