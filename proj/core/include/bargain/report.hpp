#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "bargain/metrics.hpp"

namespace bargain {

/// Header and one row per role:
/// role,agent,#ALL,Avg.FBR,SNP,Share,#MI,deal_rate_MI,SNP_MI,#CI,deal_rate_CI,SNP_CI
/// Share is in percent; undefined values are written as "undef", missing ones as "-".
std::string summary_to_csv(const BenchmarkSummary& summary);
BenchmarkSummary summary_from_csv(std::string_view csv);

void write_summary(const BenchmarkSummary& summary, const std::filesystem::path& path);
BenchmarkSummary read_summary(const std::filesystem::path& path);

/// Fixed-width Buyer and Seller tables, each sorted by its ALL-scope SNP descending.
std::string render_report(std::vector<BenchmarkSummary> summaries);
std::string render_report(const BenchmarkSummary& summary);

}  // namespace bargain
