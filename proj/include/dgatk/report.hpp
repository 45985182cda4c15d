#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace dgatk {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Outcome of one command.
struct RunReport {
  int schema_version = kSchemaVersion;
  std::string command;
  std::vector<std::string> inputs;
  int validity = -1;  // certification degree, -1 when not applicable
  Json results = Json::object();
  std::vector<std::string> warnings;
  std::optional<double> timing_ms;  // only exported on request

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

Json to_json(const RunReport& r);
RunReport report_from_json(const Json& j);
/// "text" or "json"; throws std::invalid_argument otherwise.
std::string export_report(const RunReport& r, const std::string& format);
RunReport parse_report(const std::string& text);

}  // namespace dgatk
