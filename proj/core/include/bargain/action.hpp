#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "bargain/money.hpp"

namespace bargain {

enum class Verb { Buy, Sell, Reject, Deal, Quit };

std::string_view to_string(Verb v);

/// Payload of BUY, SELL and DEAL: "$<price> (<quantity>x <codename>)".
struct Offer {
  Money price;
  int quantity = 1;
  std::string codename;

  friend bool operator==(const Offer&, const Offer&) = default;
};

/// One of the five bargaining actions. REJECT and QUIT carry no offer.
class Action {
 public:
  static Action buy(Offer o) { return Action(Verb::Buy, std::move(o)); }
  static Action sell(Offer o) { return Action(Verb::Sell, std::move(o)); }
  static Action deal(Offer o) { return Action(Verb::Deal, std::move(o)); }
  static Action reject() { return Action(Verb::Reject, std::nullopt); }
  static Action quit() { return Action(Verb::Quit, std::nullopt); }

  Verb verb() const { return verb_; }
  bool priced() const { return offer_.has_value(); }
  /// Precondition: priced().
  const Offer& offer() const { return *offer_; }

  friend bool operator==(const Action&, const Action&) = default;

 private:
  Action(Verb v, std::optional<Offer> o) : verb_(v), offer_(std::move(o)) {}
  Verb verb_;
  std::optional<Offer> offer_;
};

enum class ParseErrorKind { UnknownVerb, MissingPrice, MalformedPayload, NoAction };

std::string_view to_string(ParseErrorKind k);

struct ParseError {
  ParseErrorKind kind;
  std::string detail;
};

using ActionParse = std::variant<Action, ParseError>;

/// Parses a complete action string; surrounding whitespace is ignored.
ActionParse parse_action(std::string_view text);

/// Parses an action at the start of `text` (leading whitespace skipped) and reports
/// how many characters it consumed. Trailing text is left alone.
ActionParse parse_action_prefix(std::string_view text, std::size_t& consumed);

/// Canonical form, e.g. "[BUY] $30 (1x electronics_203)" or "[QUIT]".
std::string render_action(const Action& a);

}  // namespace bargain
