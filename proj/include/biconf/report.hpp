#pragma once

// Verification runs over a scenario and their JSON / CSV / text reports.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "biconf/biconformal.hpp"

namespace biconf {

enum class ReportFormat { kJson, kCsv, kText };
ReportFormat parse_format(const std::string& text);
std::string to_string(ReportFormat f);

struct RunConfig {
  std::string scenario;
  std::optional<std::string> sigma;
  std::optional<std::string> rho;
  std::optional<std::string> special_sigma;
  int samples = 100;
  std::uint64_t seed = 42;
  double tol_ad = 1e-8;
  double tol_fd = 1e-5;
  double fd_step = 1e-4;
  std::vector<std::string> identities;  // empty: all
  std::string report_path;              // empty: stdout
  ReportFormat format = ReportFormat::kJson;

  // Throws ConfigError.
  void validate() const;
};

// In report order.
const std::vector<std::string>& identity_names();

enum class SampleStatus { kPass, kFail, kError };
std::string to_string(SampleStatus s);

struct SampleRecord {
  int index = 0;
  Vec point;
  SampleStatus status = SampleStatus::kPass;
  double abs_residual = 0.0;
  double rel_residual = 0.0;
  std::optional<double> rel_residual_full;
  std::string message;
};

struct IdentitySummary {
  std::string name;
  bool applicable = true;
  bool skipped = false;
  std::string note;
  DerivativeStrategy strategy = DerivativeStrategy::kAutomatic;
  double tolerance = 0.0;
  std::vector<SampleRecord> records;

  int count(SampleStatus s) const;
  double max_abs_residual() const;
  double max_rel_residual() const;
  std::optional<double> max_rel_residual_full() const;
  // Point of the largest relative residual among non-errored samples.
  std::optional<Vec> worst_point() const;
  bool failed() const { return count(SampleStatus::kFail) > 0; }
};

struct FlagCheck {
  std::string flag;
  std::optional<bool> expected;  // nullopt: measured only
  bool observed = false;
  double max_value = 0.0;
  double tolerance = 0.0;
  int samples_error = 0;
  bool confirmed = true;
};

struct RunReport {
  RunConfig config;
  std::string sigma_text;
  std::string rho_text;
  bool special_change = false;
  std::vector<std::string> warnings;
  std::vector<IdentitySummary> identities;
  std::vector<FlagCheck> flags;

  bool flags_confirmed() const;
  // Non-errored samples exist and none of them fail.
  bool passed() const;
  int exit_code() const { return passed() ? 0 : 1; }
};

// Throws ConfigError / ParseError for invalid input; per-sample problems are
// recorded as errored samples.
RunReport run_verification(const RunConfig& config);

std::string render_json(const RunReport& report);
std::string render_csv(const RunReport& report);
std::string render_text(const RunReport& report);
std::string render(const RunReport& report, ReportFormat format);

// Writes to a temporary file next to `path`, then renames it into place.
void write_atomic(const std::string& path, const std::string& content);

std::string list_text();
std::string list_json();

// Exit codes: 0 pass, 1 identity or flag failure, 2 configuration error.
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace biconf
