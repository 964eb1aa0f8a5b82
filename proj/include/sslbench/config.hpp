#pragma once

#include <string>

#include "sslbench/engine.hpp"

namespace sslbench {

inline constexpr const char* kFrameworkVersion = "0.1.0";

// JSON campaign description; see README for the schema. A relative
// dataset path is resolved against the config file's directory. Throws
// Errc::config_error naming the offending field.
CampaignConfig load_campaign_config(const std::string& path);

std::string campaign_config_summary(const CampaignConfig& cfg);

} // namespace sslbench
