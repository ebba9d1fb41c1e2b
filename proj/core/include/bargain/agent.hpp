#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bargain/protocol.hpp"

namespace bargain {

/// Public product info plus the holder's private value. Never carries the
/// counterpart's value.
struct Briefing {
  Role role = Role::Buyer;
  std::string codename;
  std::string title;
  std::string description;
  Money list_price;
  Money private_value;  ///< budget for the buyer, cost for the seller
  int max_turns = kDefaultMaxTurns;
};

Briefing briefing_for(const SessionConfig& config, Role role);

/// A transmitted half-move: talk and action only.
struct VisibleMove {
  Role role = Role::Buyer;
  std::string talk;
  Action action = Action::reject();
};

struct Observation {
  Briefing briefing;
  std::vector<VisibleMove> history;
  int turns_remaining = 0;

  Role role() const { return briefing.role; }
  /// Number of half-moves this role has already made.
  int own_moves() const;
  /// Most recent BUY/SELL of `who` in the visible history.
  std::optional<Offer> latest_offer(Role who) const;
};

Observation observe(const SessionState& state, Role role);

/// A bargaining participant. `respond` returns the raw reply text
/// ("Thought: ...\nTalk: ...\nAction: ..."). When the previous reply for the same
/// half-move was refused, `correction` carries the notice explaining why.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual std::string respond(const Observation& obs, const std::optional<std::string>& correction) = 0;
  /// Called once the runner has accepted the reply.
  virtual void on_accepted(const Turn& /*turn*/, const std::string& /*raw*/) {}
};

inline constexpr int kDefaultRetries = 2;

struct AcceptedMove {
  Turn turn;
  std::string raw;
  std::vector<FailedAttempt> failed;
};

struct RefusedMove {
  std::string reason;  ///< error category of the last attempt, e.g. "no_action"
  std::vector<FailedAttempt> failed;
};

using HalfMove = std::variant<AcceptedMove, RefusedMove>;

/// Asks the next mover for a reply, re-prompting up to `retries` times on a
/// parse error or legality violation. Transport failures end the half-move
/// immediately with reason "transport".
HalfMove request_half_move(Agent& agent, const SessionState& state, int retries = kDefaultRetries);

struct ScriptedBuyerParams {
  double open_ratio = 0.5;   ///< r0, share of budget bid first
  double close_ratio = 1.0;  ///< r1, share of budget bid on the last move
};

/// Linear bidder from r0*B to r1*B across its t_m moves. Accepts any standing
/// ask at or below the current target and quits on the last move otherwise.
class ScriptedBuyer final : public Agent {
 public:
  explicit ScriptedBuyer(ScriptedBuyerParams params = {});
  std::string respond(const Observation& obs, const std::optional<std::string>& correction) override;

  Turn decide(const Observation& obs) const;
  static Money target(const ScriptedBuyerParams& p, Money budget, int move, int max_turns);

 private:
  ScriptedBuyerParams params_;
};

struct ScriptedSellerParams {
  double margin = 0.0;      ///< m, reservation = C * (1 + m)
  double open_ratio = 1.0;  ///< s0, share of list price asked first
};

/// Time-dependent conceder: asks max(R, s0*L*(1 - k/t_m)) at its k-th move and
/// deals on any standing bid at or above the current ask.
class ScriptedSeller final : public Agent {
 public:
  /// Throws std::invalid_argument when the reservation exceeds the opening ask.
  ScriptedSeller(ScriptedSellerParams params, const Briefing& briefing);
  std::string respond(const Observation& obs, const std::optional<std::string>& correction) override;

  Turn decide(const Observation& obs) const;
  static Money reservation(const ScriptedSellerParams& p, Money cost);
  static Money ask(const ScriptedSellerParams& p, Money cost, Money list_price, int move, int max_turns);

 private:
  ScriptedSellerParams params_;
};

/// Replays a fixed list of raw replies, one per call; repeats the last when exhausted.
class CannedAgent final : public Agent {
 public:
  explicit CannedAgent(std::vector<std::string> replies);
  std::string respond(const Observation& obs, const std::optional<std::string>& correction) override;
  std::size_t calls() const { return next_; }

 private:
  std::vector<std::string> replies_;
  std::size_t next_ = 0;
};

}  // namespace bargain
