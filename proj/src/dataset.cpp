#include "sslbench/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace sslbench {

size_t LabeledDataset::count(int label) const {
    size_t n = 0;
    for (uint8_t l : labels_) n += (l == label);
    return n;
}

void LabeledDataset::add(std::span<const double> features, int label, int64_t id) {
    if (dim_ == 0 && empty()) dim_ = features.size();
    if (features.size() != dim_)
        throw Error(Errc::dimension_mismatch,
                    "sample has " + std::to_string(features.size()) + " features, dataset dim is " +
                        std::to_string(dim_));
    features_.insert(features_.end(), features.begin(), features.end());
    labels_.push_back(static_cast<uint8_t>(label));
    ids_.push_back(id);
}

Sample LabeledDataset::sample(size_t i) const {
    auto row = features_of(i);
    return {{row.begin(), row.end()}, label(i), id(i)};
}

LabeledDataset LabeledDataset::subset(const std::vector<uint32_t>& rows) const {
    LabeledDataset out(name_, dim_);
    for (uint32_t r : rows) out.add(features_of(r), label(r), id(r));
    return out;
}

ClassRatio class_ratio(const LabeledDataset& d) {
    if (d.empty()) throw Error(Errc::empty_dataset, "class_ratio on empty dataset");
    const double nb = static_cast<double>(d.n_benign());
    const int benign = static_cast<int>(std::floor(100.0 * nb / static_cast<double>(d.size()) + 0.5));
    return {benign, 100 - benign};
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
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

double parse_double(const std::string& s, size_t line_no, size_t col_no) {
    double v = 0.0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    while (b < e && (*b == ' ' || *b == '\t')) ++b;
    while (e > b && (e[-1] == ' ' || e[-1] == '\t')) --e;
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e || !std::isfinite(v))
        throw Error(Errc::parse_error, "row " + std::to_string(line_no) + ", column " +
                                           std::to_string(col_no) + ": not a finite number: '" + s + "'");
    return v;
}

} // namespace

LabeledDataset load_csv(const std::string& path, const std::string& label_column,
                        bool require_both_classes) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::missing_file, "cannot open dataset file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw Error(Errc::empty_dataset, "no header row in " + path);
    const auto header = split_fields(line);

    size_t label_col = header.size();
    for (size_t i = 0; i < header.size(); ++i)
        if (header[i] == label_column) label_col = i;
    if (label_col == header.size())
        throw Error(Errc::parse_error, "label column '" + label_column + "' not found in " + path);
    if (header.size() < 2)
        throw Error(Errc::parse_error, "dataset needs at least one feature column: " + path);

    const size_t dim = header.size() - 1;
    LabeledDataset d(std::filesystem::path(path).stem().string(), dim);
    std::vector<double> row(dim);

    size_t line_no = 1;
    int64_t next_id = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != header.size())
            throw Error(Errc::parse_error, "row " + std::to_string(line_no) + ": expected " +
                                               std::to_string(header.size()) + " fields, got " +
                                               std::to_string(fields.size()));
        size_t fi = 0;
        int label = 0;
        for (size_t c = 0; c < fields.size(); ++c) {
            const double v = parse_double(fields[c], line_no, c + 1);
            if (c == label_col) {
                if (v != 0.0 && v != 1.0)
                    throw Error(Errc::parse_error, "row " + std::to_string(line_no) + ", column " +
                                                       std::to_string(c + 1) + ": label must be 0 or 1");
                label = static_cast<int>(v);
            } else {
                row[fi++] = v;
            }
        }
        d.add(row, label, next_id++);
    }

    if (d.empty()) throw Error(Errc::empty_dataset, "no data rows in " + path);
    if (require_both_classes && (d.n_benign() == 0 || d.n_malicious() == 0))
        throw Error(Errc::single_class_dataset, "dataset has a single class: " + path);
    return d;
}

void write_csv(const LabeledDataset& d, const std::string& path, const std::string& label_column) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::missing_file, "cannot write dataset file: " + path);

    for (size_t f = 0; f < d.dim(); ++f) out << 'f' << f << ',';
    out << label_column << '\n';

    char buf[40];
    for (size_t i = 0; i < d.size(); ++i) {
        const auto row = d.features_of(i);
        for (double v : row) {
            // %.17g survives a from_chars round trip bit-exactly
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            out << buf << ',';
        }
        out << d.label(i) << '\n';
    }
}

FutureSplit split_future(const LabeledDataset& d, const PartitionSpec& spec, RandomStream& rng) {
    std::vector<uint32_t> by_class[2];
    for (size_t i = 0; i < d.size(); ++i) by_class[d.label(i)].push_back(static_cast<uint32_t>(i));
    for (int c = 0; c < 2; ++c)
        if (by_class[c].size() < 5)
            throw Error(Errc::too_few_samples, std::string("need at least 5 samples of class ") +
                                                   (c == 0 ? "benign" : "malicious") + ", have " +
                                                   std::to_string(by_class[c].size()));

    std::vector<uint8_t> to_future(d.size(), 0);
    for (int c = 0; c < 2; ++c) {
        const size_t take =
            static_cast<size_t>(std::floor(spec.test_fraction * static_cast<double>(by_class[c].size())));
        for (uint32_t pick : sample_indices(by_class[c].size(), take, rng))
            to_future[by_class[c][pick]] = 1;
    }

    FutureSplit out;
    out.future = LabeledDataset(d.name(), d.dim());
    out.trainpool = LabeledDataset(d.name(), d.dim());
    for (size_t i = 0; i < d.size(); ++i) {
        auto& dst = to_future[i] ? out.future : out.trainpool;
        dst.add(d.features_of(i), d.label(i), d.id(i));
    }
    return out;
}

LabelledComposition compose_labelled(const LabeledDataset& trainpool, const PartitionSpec& spec,
                                     RandomStream& rng) {
    const CostScenario& cost = spec.cost_scenario;
    const double floor_cost =
        static_cast<double>(spec.min_benign) * cost.cost_benign + cost.cost_malicious;
    if (spec.budget < floor_cost)
        throw Error(Errc::insufficient_budget,
                    "budget " + std::to_string(spec.budget) + " cannot cover " +
                        std::to_string(spec.min_benign) + " benign labels plus one malicious label");

    std::vector<uint32_t> by_class[2];
    for (size_t i = 0; i < trainpool.size(); ++i)
        by_class[trainpool.label(i)].push_back(static_cast<uint32_t>(i));

    if (by_class[0].size() < spec.min_benign)
        throw Error(Errc::pool_exhausted, "training pool has " + std::to_string(by_class[0].size()) +
                                              " benign samples, need " + std::to_string(spec.min_benign));

    BudgetLedger ledger;
    ledger.budget = spec.budget;
    ledger.spent_benign = static_cast<double>(spec.min_benign) * cost.cost_benign;

    const size_t n_malicious =
        static_cast<size_t>(std::floor((spec.budget - ledger.spent_benign) / cost.cost_malicious));
    if (by_class[1].size() < n_malicious)
        throw Error(Errc::pool_exhausted, "training pool has " + std::to_string(by_class[1].size()) +
                                              " malicious samples, budget affords " +
                                              std::to_string(n_malicious));
    ledger.spent_malicious = static_cast<double>(n_malicious) * cost.cost_malicious;

    std::vector<uint8_t> picked(trainpool.size(), 0);
    for (uint32_t p : sample_indices(by_class[0].size(), spec.min_benign, rng)) picked[by_class[0][p]] = 1;
    for (uint32_t p : sample_indices(by_class[1].size(), n_malicious, rng)) picked[by_class[1][p]] = 1;

    LabelledComposition out;
    out.labelled = LabeledDataset(trainpool.name(), trainpool.dim());
    LabeledDataset rest(trainpool.name(), trainpool.dim());
    for (size_t i = 0; i < trainpool.size(); ++i) {
        auto& dst = picked[i] ? out.labelled : rest;
        dst.add(trainpool.features_of(i), trainpool.label(i), trainpool.id(i));
    }
    out.unlabelled = UnlabeledPool(std::move(rest));
    out.ledger = ledger;
    return out;
}

} // namespace sslbench
