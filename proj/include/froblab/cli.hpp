#pragma once

#include <cstdint>
#include <exception>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace froblab::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Key order is kept as written, so echoed jobs are stable.
using Json = nlohmann::ordered_json;

/// Command-line values that take precedence over the job file.
struct Overrides {
  std::optional<std::uint64_t> budget;
  std::optional<unsigned> workers;
  std::optional<std::uint64_t> seed;
};

struct Job {
  std::string command;
  Json params;
  std::uint64_t budget = 0;
  unsigned workers = 1;
  std::uint64_t seed = 1;

  /// The resolved job as echoed into output headers. Workers are left out:
  /// output does not depend on them.
  Json echo() const;
};

/// Either {"command", "params", ...} or flat, with every key other than
/// command/budget/workers/seed taken as a parameter. Unknown keys are rejected.
Job parse_job(const Json& j, const Overrides& o = {});
Job load_job(const std::string& path, const Overrides& o = {});
/// Throws ValidationError on empty or malformed text.
Json parse_json_text(const std::string& text, const std::string& what);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct JobResult {
  /// Everything the command computed; the JSON output body.
  Json result = Json::object();
  Table table;
  /// "# key: value" lines in CSV output.
  std::vector<std::pair<std::string, std::string>> notes;
  /// Flat one-row digest used by grid.
  Json summary = Json::object();
  /// Set when a verification command found a violated invariant; output is
  /// still written and the process exits with code 4.
  std::optional<std::string> property_failure;
};

JobResult execute(const Job& job);

enum class Format { csv, json };
Format parse_format(const std::string& s);
std::string render(const Job& job, const JobResult& r, Format f);

/// Columns of the grid digest for a command, in order.
std::vector<std::string> summary_columns(const std::string& command);

struct GridReport {
  std::size_t computed = 0;
  std::size_t skipped = 0;
  std::size_t failed = 0;
  int exit_code = 0;
};

/// Runs the cartesian product of spec["ranges"] over spec["template"],
/// substituting "{name}" in template strings. With an output path, rows
/// already in the file are skipped and new rows are appended one at a time.
GridReport run_grid(const Json& spec, const Overrides& o, const std::optional<std::string>& out_path,
                    std::ostream& fallback);

/// 2 validation, 3 budget, 4 property violation, 1 anything else.
int exit_code_for(const std::exception& e);
std::string error_json(const std::exception& e);

std::string csv_escape(const std::string& field);
std::vector<std::string> csv_split(const std::string& line);

}  // namespace froblab::cli
