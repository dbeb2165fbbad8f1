#include "extenso/report.hpp"

#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace extenso {
namespace {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::ordered_json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

std::string to_json(const BatchReport& report) {
  nlohmann::ordered_json doc;
  doc["density"] = report.density;
  doc["check"] = report.check;
  doc["instances"] = report.instances;
  doc["pass_count"] = report.pass_count;
  doc["fail_count"] = report.fail_count;
  doc["worst_slack"] = number_or_null(report.worst_slack);
  doc["divergent_count"] = report.divergent_count;
  doc["seed"] = report.seed;
  doc["notes"] = report.notes;
  if (!report.rows.empty()) {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : report.rows) {
      nlohmann::ordered_json obj = nlohmann::ordered_json::object();
      for (const auto& [key, value] : row) obj[key] = number_or_null(value);
      rows.push_back(std::move(obj));
    }
    doc["rows"] = std::move(rows);
  }
  return doc.dump(2) + "\n";
}

std::string to_csv(const BatchReport& report) {
  if (!report.rows.empty()) {
    std::string out;
    const auto& head = report.rows.front();
    for (std::size_t c = 0; c < head.size(); ++c) out += (c ? "," : "") + head[c].first;
    out += '\n';
    for (const auto& row : report.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + format_double(row[c].second);
      out += '\n';
    }
    return out;
  }
  std::string notes;
  for (const auto& n : report.notes) {
    if (!notes.empty()) notes += ';';
    notes += n;
  }
  return "density,check,instances,pass_count,fail_count,worst_slack,divergent_count,seed,notes\n" +
         report.density + "," + report.check + "," + std::to_string(report.instances) + "," +
         std::to_string(report.pass_count) + "," + std::to_string(report.fail_count) + "," +
         format_double(report.worst_slack) + "," + std::to_string(report.divergent_count) + "," +
         std::to_string(report.seed) + ",\"" + notes + "\"\n";
}

}  // namespace extenso
