#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bargain/action.hpp"
#include "bargain/catalog.hpp"

namespace bargain {

enum class Role { Buyer, Seller };

std::string_view to_string(Role r);
Role role_from_string(std::string_view s);
constexpr Role counterpart(Role r) { return r == Role::Buyer ? Role::Seller : Role::Buyer; }

/// One half-move. Thought is private to the author; only talk and action are transmitted.
struct Turn {
  Role role = Role::Buyer;
  std::string thought;
  std::string talk;
  Action action = Action::reject();
};

using TurnParse = std::variant<Turn, ParseError>;

/// Splits an agent reply into Thought / Talk / Action sections. Labels are matched
/// case-insensitively at line starts and the last Action label wins. The first
/// grammatical bracketed action after it is taken; without one, NoAction.
TurnParse parse_turn(std::string_view raw, Role role);

/// "Thought: ...\nTalk: ...\nAction: [..]" -- the reply format agents are asked for.
std::string format_turn(const Turn& turn);

enum class ViolationKind {
  WrongVerbForRole,
  PrematureDeal,
  DealMismatch,
  BadQuantity,
  BadCodename,
  FirstAction,
  OutOfTurn,
  SessionClosed,
};

std::string_view to_string(ViolationKind k);

struct Violation {
  ViolationKind kind;
  std::string detail;
};

namespace status {
struct Open {
  friend bool operator==(const Open&, const Open&) = default;
};
struct Deal {
  Money price;
  friend bool operator==(const Deal&, const Deal&) = default;
};
struct Quit {
  Role by;
  friend bool operator==(const Quit&, const Quit&) = default;
};
struct Exhausted {
  friend bool operator==(const Exhausted&, const Exhausted&) = default;
};
struct Invalid {
  std::string reason;
  friend bool operator==(const Invalid&, const Invalid&) = default;
};
}  // namespace status

using SessionStatus =
    std::variant<status::Open, status::Deal, status::Quit, status::Exhausted, status::Invalid>;

/// "open", "deal", "quit", "exhausted" or "invalid".
std::string_view status_name(const SessionStatus& s);
bool is_open(const SessionStatus& s);

class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct SessionState {
  SessionConfig config;
  std::vector<Turn> history;
  int round = 0;  ///< completed buyer+seller rounds
  Role next_mover = Role::Buyer;
  SessionStatus status = status::Open{};

  explicit SessionState(SessionConfig cfg) : config(std::move(cfg)) {}

  /// Most recent BUY/SELL by `who`, if any. REJECT leaves it standing.
  std::optional<Offer> standing_offer(Role who) const;
};

std::optional<Violation> check_legality(const SessionState& state, const Turn& turn);

/// Applies a legal turn. Throws ProtocolError("move_on_closed_session") on a closed session.
SessionState advance(SessionState state, Turn turn);

/// A half-move that was tried and refused.
struct FailedAttempt {
  Role role = Role::Buyer;
  std::string raw;
  std::string error;
};

struct SessionRecord {
  std::string session_id;
  SessionConfig config;
  std::vector<Turn> history;
  std::vector<std::string> raw;  ///< accepted agent output per history entry
  std::vector<FailedAttempt> failed_attempts;
  SessionStatus status = status::Open{};
  std::string buyer_spec;
  std::string seller_spec;

  bool valid() const;
  std::optional<Money> deal_price() const;
  std::optional<Money> first_buyer_bid() const;
};

/// Re-runs the recorded history through check_legality/advance.
/// Returns the reproduced status, or Invalid describing the first refused move.
SessionStatus replay(const SessionConfig& config, const std::vector<Turn>& history);

}  // namespace bargain
