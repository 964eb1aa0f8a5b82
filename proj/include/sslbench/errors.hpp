#pragma once

#include <stdexcept>
#include <string>

namespace sslbench {

enum class Errc {
    missing_file,
    parse_error,
    empty_dataset,
    single_class_dataset,
    too_few_samples,
    insufficient_budget,
    pool_exhausted,
    empty_training_set,
    dimension_mismatch,
    empty_population,
    config_error,
};

// All recoverable failures are thrown as Error; code() lets callers and
// tests branch on the kind without string matching.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::missing_file: return "missing_file";
        case Errc::parse_error: return "parse_error";
        case Errc::empty_dataset: return "empty_dataset";
        case Errc::single_class_dataset: return "single_class_dataset";
        case Errc::too_few_samples: return "too_few_samples";
        case Errc::insufficient_budget: return "insufficient_budget";
        case Errc::pool_exhausted: return "pool_exhausted";
        case Errc::empty_training_set: return "empty_training_set";
        case Errc::dimension_mismatch: return "dimension_mismatch";
        case Errc::empty_population: return "empty_population";
        case Errc::config_error: return "config_error";
    }
    return "unknown";
}

} // namespace sslbench
