#include "dgatk/report.hpp"

#include <sstream>
#include <stdexcept>

namespace dgatk {

Json to_json(const RunReport& r) {
  Json j;
  j["schema_version"] = r.schema_version;
  j["command"] = r.command;
  j["inputs"] = r.inputs;
  j["validity"] = r.validity;
  j["results"] = r.results;
  j["warnings"] = r.warnings;
  if (r.timing_ms) j["timing_ms"] = *r.timing_ms;
  return j;
}

RunReport report_from_json(const Json& j) {
  RunReport r;
  r.schema_version = j.at("schema_version").get<int>();
  if (r.schema_version != kSchemaVersion) throw std::invalid_argument("unsupported schema_version " + std::to_string(r.schema_version));
  r.command = j.at("command").get<std::string>();
  r.inputs = j.at("inputs").get<std::vector<std::string>>();
  r.validity = j.at("validity").get<int>();
  r.results = j.at("results");
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  if (j.contains("timing_ms")) r.timing_ms = j.at("timing_ms").get<double>();
  return r;
}

RunReport parse_report(const std::string& text) { return report_from_json(Json::parse(text)); }

namespace {

bool simple(const Json& v) {
  if (!v.is_structured()) return true;
  if (!v.is_array()) return false;
  for (const auto& x : v)
    if (x.is_structured()) return false;
  return true;
}

std::string scalar(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string s = "[";
    for (const auto& x : v) s += (s.size() > 1 ? "," : "") + scalar(x);
    return s + "]";
  }
  return v.dump();
}

bool flat(const Json& v) {
  for (const auto& x : v)
    if (!simple(x)) return false;
  return true;
}

void render(std::ostream& out, const Json& v, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (v.is_object()) {
    for (const auto& [k, x] : v.items()) {
      if (simple(x)) out << pad << k << ": " << scalar(x) << "\n";
      else {
        out << pad << k << ":\n";
        render(out, x, indent + 2);
      }
    }
  } else if (v.is_array()) {
    for (const auto& x : v) {
      if (x.is_object() && flat(x)) {
        out << pad << "-";
        for (const auto& [k, y] : x.items()) out << " " << k << "=" << scalar(y);
        out << "\n";
      } else if (x.is_structured()) {
        out << pad << "-\n";
        render(out, x, indent + 2);
      } else {
        out << pad << "- " << scalar(x) << "\n";
      }
    }
  } else {
    out << pad << scalar(v) << "\n";
  }
}

}  // namespace

std::string export_report(const RunReport& r, const std::string& format) {
  if (format == "json" || format == "json-like") return to_json(r).dump(2) + "\n";
  if (format != "text") throw std::invalid_argument("unsupported format: " + format);
  std::ostringstream out;
  out << "command: " << r.command << "\n";
  if (!r.inputs.empty()) {
    out << "inputs:";
    for (const auto& i : r.inputs) out << " " << i;
    out << "\n";
  }
  if (r.validity >= 0) out << "valid through degree: " << r.validity << "\n";
  render(out, r.results, 0);
  for (const auto& w : r.warnings) out << "warning: " << w << "\n";
  if (r.timing_ms) out << "time: " << *r.timing_ms << " ms\n";
  return out.str();
}

}  // namespace dgatk
