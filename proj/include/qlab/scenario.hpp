#pragma once

// Scenario files ("qlab.scenarios/1"), reports ("qlab.report/1"), the batch
// runner and the seeded sweeps.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qlab/circle.hpp"
#include "qlab/json_io.hpp"
#include "qlab/tolerance.hpp"

namespace qlab {

inline constexpr const char* kScenarioSchema = "qlab.scenarios/1";
inline constexpr const char* kReportSchema = "qlab.report/1";

struct Scenario {
  std::string id;
  std::string kind;
  std::uint64_t seed = 0;
  json::Json payload;
  /// Verdict the scenario is expected to produce.
  std::string expect = "pass";
};

struct Report {
  std::string id;
  std::string kind;
  std::string verdict;  // pass | fail | hypothesis-violated | counterexample
  std::string expected = "pass";
  json::Json residuals = json::Json::object();
  json::Json artifacts = json::Json::object();
  std::optional<json::Json> error;  // {"kind", "message"}
  double runtime_seconds = 0.0;

  bool as_expected() const { return verdict == expected; }
  json::Json to_json(bool timing) const;
};

/// Validates the document envelope; throws SchemaError.
std::vector<Scenario> parse_scenarios(const json::Json& doc);

using Job = std::function<Report()>;

/// Validates every payload and binds it to its checker. Nothing is computed
/// until a job runs. Throws SchemaError with the path of the first bad field.
std::vector<Job> prepare(const std::vector<Scenario>& scenarios, const Tolerances& tol);

/// Runs jobs on up to `workers` threads; reports keep the input order.
std::vector<Report> run_jobs(const std::vector<Job>& jobs, unsigned workers);

json::Json report_document(const std::vector<Report>& reports, bool timing);

/// 0 when every verdict matches its expectation, 1 otherwise.
int exit_code(const std::vector<Report>& reports);

// -- sweeps -----------------------------------------------------------------

struct SweepRequest {
  std::string kind;  // remark6 | convolution | fourier | heyde-grid
  std::uint64_t seed = 42;
  /// Instances per group (remark6, convolution, fourier) or pairs examined
  /// (heyde-grid). At most 10^6.
  std::size_t count = 0;
  /// Largest group order; the kind's default when absent.
  std::optional<std::int64_t> max_order;
};

Report run_sweep(const SweepRequest& request, const Tolerances& tol, unsigned workers);

/// Every list of cyclic factor orders n_1 >= n_2 >= ... >= 2 with product at
/// most `max_order`, plus the trivial group, ordered by size.
std::vector<FiniteAbelianGroup> groups_up_to(std::int64_t max_order);

}  // namespace qlab
