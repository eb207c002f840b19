#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lmoment {

enum class Status { pass, fail, report_only };
enum class Format { json, csv };

struct Record {
  std::string name;
  double value = 0;
  std::optional<double> tolerance;  // absent for report-only records
  Status status = Status::report_only;
};

// pass iff |value| <= tolerance (NaN fails)
Record bounded(const std::string& name, double value, double tolerance);
Record report_only(const std::string& name, double value);
Record flag(const std::string& name, bool ok);

const char* status_name(Status s);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string subcommand;
  std::map<std::string, double> params;  // q, d, x, k, cmax, nmax, pmax, tol
  std::vector<double> rungs;
  std::string output_path;  // empty: standard output
  Format format = Format::json;
  bool timing = true;
};

const std::vector<std::string>& subcommands();

// throws ConfigError naming the offending field
void validate(const ExperimentConfig& cfg);
// the json schema written by emit_report; errors carry line and field
ExperimentConfig parse_config_json(const std::string& text);

// 17 significant digits; non-finite numbers become null (json) or nan (csv)
std::string format_number(double x);
std::string emit_report(const ExperimentConfig& cfg, const std::vector<Record>& records, Format format,
                        std::optional<double> runtime_seconds);

// write to a sibling temporary file, then rename over path
void write_atomic(const std::string& path, const std::string& bytes);

// evaluates the subcommand; throws ConfigError, std::length_error (budget)
std::vector<Record> run_experiment(const ExperimentConfig& cfg);

// full pipeline: validate, run, emit, write. Returns the process exit status:
// 0 all pass, 1 some record failed, 2 bad config, 3 budget rejection.
int run(const ExperimentConfig& cfg, std::string* error = nullptr);

}  // namespace lmoment
