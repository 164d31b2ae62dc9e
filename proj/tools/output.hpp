// Rendering of command payloads as json, csv or text.
#ifndef SNM_TOOLS_OUTPUT_HPP
#define SNM_TOOLS_OUTPUT_HPP

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <json.hpp>

namespace snm::cli {

using json = nlohmann::ordered_json;

/// Rounds to 12 significant digits so that the shortest round-trip form
/// printed by the json writer carries at most 12 digits.
inline double round12(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

inline std::string fmt12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// Rounds every floating value in place.
inline void round_numbers(json& j) {
  if (j.is_number_float()) {
    j = round12(j.get<double>());
  } else if (j.is_structured()) {
    for (auto& v : j) round_numbers(v);
  }
}

inline std::string scalar_text(const json& v) {
  if (v.is_number_float()) return fmt12(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

/// Payloads are objects; an optional "rows" array of flat objects becomes
/// the csv body, other keys are emitted as leading '#' lines.
inline std::string render(const json& payload, const std::string& format) {
  if (format == "json") {
    json copy = payload;
    round_numbers(copy);
    return copy.dump(2) + "\n";
  }
  std::string out;
  if (format == "csv") {
    for (const auto& [k, v] : payload.items()) {
      if (k == "rows") continue;
      out += "# " + k + " = " + scalar_text(v) + "\n";
    }
    if (payload.contains("rows") && !payload["rows"].empty()) {
      const auto& rows = payload["rows"];
      bool first = true;
      for (const auto& [k, v] : rows.front().items()) {
        (void)v;
        out += (first ? "" : ",") + k;
        first = false;
      }
      out += "\n";
      for (const auto& row : rows) {
        first = true;
        for (const auto& [k, v] : row.items()) {
          (void)k;
          out += (first ? "" : ",") + scalar_text(v);
          first = false;
        }
        out += "\n";
      }
    }
    return out;
  }
  // text
  for (const auto& [k, v] : payload.items()) {
    if (k == "rows") continue;
    out += k + " = " + scalar_text(v) + "\n";
  }
  if (payload.contains("rows")) {
    for (const auto& row : payload["rows"]) {
      std::string line;
      for (const auto& [k, v] : row.items()) line += (line.empty() ? "" : "  ") + k + "=" + scalar_text(v);
      out += line + "\n";
    }
  }
  return out;
}

}  // namespace snm::cli

#endif  // SNM_TOOLS_OUTPUT_HPP
