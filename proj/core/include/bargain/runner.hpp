#pragma once

#include <string>

#include "bargain/agent.hpp"

namespace bargain {

struct RunnerOptions {
  int retries = kDefaultRetries;
  std::string session_id;
  std::string buyer_spec;
  std::string seller_spec;
};

/// Plays one session buyer-first until DEAL, QUIT or t_m rounds. A half-move
/// that is still refused after the retry budget ends the session as Invalid.
SessionRecord run_session(const SessionConfig& config, Agent& buyer, Agent& seller,
                          const RunnerOptions& options = {});

}  // namespace bargain
