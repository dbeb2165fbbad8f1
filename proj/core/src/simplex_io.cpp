#include <charconv>
#include <cstdio>
#include <sstream>

#include "extenso/error.hpp"
#include "extenso/simplex.hpp"
#include "json.hpp"

namespace extenso {
namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <class T>
T parse_number(std::string_view field) {
  field = trim(field);
  T value{};
  // libstdc++ 11 supports floating-point from_chars.
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw Error(Errc::parse_error, "bad number '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

std::string to_csv(const JointMatrix& joint) {
  std::string out = std::to_string(joint.rows()) + "," + std::to_string(joint.cols()) + "\n";
  for (std::size_t i = 0; i < joint.rows(); ++i) {
    for (std::size_t j = 0; j < joint.cols(); ++j) {
      if (j) out += ',';
      out += format_double(joint(i, j));
    }
    out += '\n';
  }
  return out;
}

JointMatrix joint_from_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  for (auto line : split(text, '\n')) {
    line = trim(line);
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.empty()) throw Error(Errc::parse_error, "empty CSV");
  const auto header = split(lines.front(), ',');
  if (header.size() != 2) throw Error(Errc::parse_error, "CSV header must be 'm,n'");
  const auto m = parse_number<std::size_t>(header[0]);
  const auto n = parse_number<std::size_t>(header[1]);
  if (lines.size() != m + 1) throw Error(Errc::parse_error, "CSV row count does not match header");
  std::vector<double> flat;
  flat.reserve(m * n);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split(lines[i], ',');
    if (fields.size() != n) throw Error(Errc::parse_error, "CSV row " + std::to_string(i) + " has wrong width");
    for (auto f : fields) flat.push_back(parse_number<double>(f));
  }
  return JointMatrix(m, n, std::move(flat));
}

std::string to_json(const JointMatrix& joint) {
  // Hand-written so that every value carries 17 significant digits.
  std::string out = "{\"m\":" + std::to_string(joint.rows()) + ",\"n\":" + std::to_string(joint.cols()) +
                    ",\"entries\":[";
  for (std::size_t i = 0; i < joint.rows(); ++i) {
    if (i) out += ',';
    out += '[';
    for (std::size_t j = 0; j < joint.cols(); ++j) {
      if (j) out += ',';
      out += format_double(joint(i, j));
    }
    out += ']';
  }
  out += "]}";
  return out;
}

JointMatrix joint_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_error, e.what());
  }
  try {
    const auto m = doc.at("m").get<std::size_t>();
    const auto n = doc.at("n").get<std::size_t>();
    const auto& rows = doc.at("entries");
    if (rows.size() != m) throw Error(Errc::parse_error, "entries has wrong number of rows");
    std::vector<double> flat;
    flat.reserve(m * n);
    for (const auto& row : rows) {
      if (row.size() != n) throw Error(Errc::parse_error, "entries row has wrong width");
      for (const auto& v : row) flat.push_back(v.get<double>());
    }
    return JointMatrix(m, n, std::move(flat));
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_error, e.what());
  }
}

}  // namespace extenso
