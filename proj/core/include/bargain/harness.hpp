#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bargain/agent_spec.hpp"
#include "bargain/catalog.hpp"
#include "bargain/metrics.hpp"

namespace bargain {

struct RunConfig {
  std::filesystem::path catalog_path;
  double budget_factor = kDefaultBudgetFactor;
  int max_turns = kDefaultMaxTurns;
  Money sigma = kDefaultSigma;
  std::string buyer_spec = "scripted-buyer:r0=0.5,r1=1.0";
  std::string seller_spec = "scripted-seller:m=0.0,s0=1.0";
  std::uint64_t seed = 0;
  int parallelism = 1;
  int repeats = 1;
  std::filesystem::path output_dir = "out";
  bool resume = false;
};

struct RunResult {
  BenchmarkSummary summary;
  std::filesystem::path log_path;      ///< <out>/sessions.jsonl
  std::filesystem::path summary_path;  ///< <out>/summary.csv
  std::filesystem::path report_path;   ///< <out>/summary.txt
  std::size_t sessions_total = 0;      ///< records in the final log
  std::size_t sessions_run = 0;        ///< sessions played by this invocation
  std::size_t sessions_valid = 0;
};

/// Stable per-session seed derived from the run seed and session id.
std::uint64_t session_seed(std::uint64_t run_seed, const std::string& session_id);

/// "<codename>" for a single repetition, "<codename>#<k>" (k from 1) otherwise.
std::string session_id_for(const std::string& codename, int repetition, int repeats);

/// Plays one session per product (times `repeats`) with up to `parallelism`
/// concurrent sessions. The log is written in catalog order regardless of
/// completion order. Catalog or agent-spec problems throw; per-session
/// failures are recorded as Invalid.
RunResult run_benchmark(const RunConfig& cfg);

/// Same as run_benchmark but over an in-memory catalog.
RunResult run_benchmark(const RunConfig& cfg, const Catalog& catalog);

}  // namespace bargain
