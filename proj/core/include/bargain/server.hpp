#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>

#include "bargain/catalog.hpp"

namespace bargain {

struct ServerConfig {
  Catalog catalog;
  double budget_factor = kDefaultBudgetFactor;
  int max_turns = kDefaultMaxTurns;
  Money sigma = kDefaultSigma;
  /// Machine counterpart used when a session request names no agent.
  std::string machine_buyer = "og:narrator=template";
  std::string machine_seller = "scripted-seller:m=0.0,s0=1.0";
  std::chrono::seconds idle_timeout{30 * 60};
  std::uint64_t seed = 0;
};

/// HTTP service for live human-vs-agent sessions.
///
///   POST /sessions            {codename | "random", human_role, agent?}
///   GET  /sessions/{id}
///   POST /sessions/{id}/turn  {talk, action}
///   GET  /sessions/{id}/score
///
/// Responses only ever carry the human's own private value.
class Server {
 public:
  explicit Server(ServerConfig config);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds and serves on a background thread. Port 0 picks a free port.
  /// Returns the bound port; throws std::runtime_error when binding fails.
  int start(const std::string& host, int port);
  /// Binds and serves on the calling thread until stop().
  void run(const std::string& host, int port);
  void stop();

  std::size_t live_sessions() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Splits "host:port"; throws std::invalid_argument on malformed input.
std::pair<std::string, int> parse_bind_address(const std::string& bind);

}  // namespace bargain
