#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace extenso {

/// One row of a detail table; columns keep their insertion order.
using ReportRow = std::vector<std::pair<std::string, double>>;

/// Summary of a batch of checks over seeded random instances.
///
/// JSON form (keys in this order):
///   {"density","check","instances","pass_count","fail_count","worst_slack",
///    "divergent_count","seed","notes","rows"}
/// `worst_slack` is the smallest margin to failure over the batch; negative
/// means at least one instance failed. `rows` is present only when non-empty.
/// Non-finite numbers are written as null.
struct BatchReport {
  std::string density;
  std::string check;
  std::size_t instances = 0;
  std::size_t pass_count = 0;
  std::size_t fail_count = 0;
  double worst_slack = 0.0;
  std::size_t divergent_count = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> notes;
  std::vector<ReportRow> rows;
};

std::string to_json(const BatchReport& report);

/// Without rows: one header line and one summary line, notes joined with ';'.
/// With rows: the detail table, header taken from the first row.
std::string to_csv(const BatchReport& report);

}  // namespace extenso
