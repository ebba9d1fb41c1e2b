#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bargain/protocol.hpp"

namespace bargain {

class LogError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One JSON object per session, no trailing newline. Field names: session_id, codename,
/// B, C, L, f, t_m, scenario, status, deal_price, valid, first_buyer_bid, history
/// [{role, thought, talk, action, raw}], plus sigma, title, quit_by, reason,
/// failed_attempts, buyer and seller.
std::string record_to_json(const SessionRecord& record);

/// Inverse of record_to_json. Throws LogError on malformed input.
SessionRecord record_from_json(std::string_view line);

struct LogContents {
  std::vector<SessionRecord> records;
  std::size_t discarded_lines = 0;  ///< unparseable lines, e.g. a torn final write
};

/// Reads a line-delimited log, skipping blank and unparseable lines.
LogContents read_log(const std::filesystem::path& path);

/// Reads a log and fails on the first unparseable line.
std::vector<SessionRecord> load_log(const std::filesystem::path& path);

}  // namespace bargain
