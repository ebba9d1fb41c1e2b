#include "bargain/protocol.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace bargain {

std::string_view to_string(Role r) { return r == Role::Buyer ? "buyer" : "seller"; }

Role role_from_string(std::string_view s) {
  if (s == "buyer") return Role::Buyer;
  if (s == "seller") return Role::Seller;
  throw std::invalid_argument("unknown role: " + std::string(s));
}

std::string_view to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::WrongVerbForRole: return "wrong_verb_for_role";
    case ViolationKind::PrematureDeal: return "premature_deal";
    case ViolationKind::DealMismatch: return "deal_mismatch";
    case ViolationKind::BadQuantity: return "bad_quantity";
    case ViolationKind::BadCodename: return "bad_codename";
    case ViolationKind::FirstAction: return "first_action";
    case ViolationKind::OutOfTurn: return "out_of_turn";
    case ViolationKind::SessionClosed: return "session_closed";
  }
  return "?";
}

std::string_view status_name(const SessionStatus& s) {
  static constexpr std::array<std::string_view, 5> kNames = {"open", "deal", "quit", "exhausted",
                                                             "invalid"};
  return kNames[s.index()];
}

bool is_open(const SessionStatus& s) { return std::holds_alternative<status::Open>(s); }

// ---------------------------------------------------------------------------
// Reply parsing

namespace {

enum class Label { Thought, Talk, Action };

struct LabelHit {
  Label label;
  std::size_t line_start;
  std::size_t content_start;
};

bool istarts_with(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[i])) != prefix[i]) return false;
  }
  return true;
}

std::vector<LabelHit> find_labels(std::string_view raw) {
  static constexpr std::array<std::pair<std::string_view, Label>, 3> kLabels = {{
      {"thought:", Label::Thought},
      {"talk:", Label::Talk},
      {"action:", Label::Action},
  }};
  std::vector<LabelHit> hits;
  std::size_t line = 0;
  while (line <= raw.size()) {
    std::size_t i = line;
    while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t')) ++i;
    for (const auto& [text, label] : kLabels) {
      if (istarts_with(raw.substr(i), text)) {
        hits.push_back({label, line, i + text.size()});
        break;
      }
    }
    const std::size_t nl = raw.find('\n', line);
    if (nl == std::string_view::npos) break;
    line = nl + 1;
  }
  return hits;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

TurnParse parse_turn(std::string_view raw, Role role) {
  const auto hits = find_labels(raw);

  auto last_before = [&](Label label, std::size_t limit) -> const LabelHit* {
    const LabelHit* found = nullptr;
    for (const auto& h : hits) {
      if (h.line_start >= limit) break;
      if (h.label == label) found = &h;
    }
    return found;
  };
  auto section = [&](const LabelHit& h) {
    std::size_t end = raw.size();
    for (const auto& other : hits) {
      if (other.line_start > h.line_start) {
        end = other.line_start;
        break;
      }
    }
    return trim(raw.substr(h.content_start, end - h.content_start));
  };

  const LabelHit* action_hit = last_before(Label::Action, raw.size() + 1);
  if (action_hit == nullptr) {
    return ParseError{ParseErrorKind::NoAction, "reply has no 'Action:' line"};
  }

  std::optional<Action> action;
  std::string first_error;
  const std::string_view tail = raw.substr(action_hit->content_start);
  for (std::size_t pos = tail.find('['); pos != std::string_view::npos;
       pos = tail.find('[', pos + 1)) {
    std::size_t consumed = 0;
    auto parsed = parse_action_prefix(tail.substr(pos), consumed);
    if (auto* a = std::get_if<Action>(&parsed)) {
      action = std::move(*a);
      break;
    }
    if (first_error.empty()) {
      const auto& e = std::get<ParseError>(parsed);
      first_error = std::string(to_string(e.kind)) + ": " + e.detail;
    }
  }
  if (!action) {
    return ParseError{ParseErrorKind::NoAction,
                      first_error.empty() ? "no bracketed action after 'Action:'" : first_error};
  }

  Turn turn;
  turn.role = role;
  turn.action = std::move(*action);
  const LabelHit* talk_hit = last_before(Label::Talk, action_hit->line_start);
  if (talk_hit != nullptr) turn.talk = section(*talk_hit);
  const std::size_t thought_limit = talk_hit ? talk_hit->line_start : action_hit->line_start;
  if (const LabelHit* thought_hit = last_before(Label::Thought, thought_limit)) {
    turn.thought = section(*thought_hit);
  }
  return turn;
}

std::string format_turn(const Turn& turn) {
  return "Thought: " + turn.thought + "\nTalk: " + turn.talk +
         "\nAction: " + render_action(turn.action);
}

// ---------------------------------------------------------------------------
// State machine

std::optional<Offer> SessionState::standing_offer(Role who) const {
  for (auto it = history.rbegin(); it != history.rend(); ++it) {
    if (it->role != who) continue;
    const Verb v = it->action.verb();
    if (v == Verb::Buy || v == Verb::Sell) return it->action.offer();
  }
  return std::nullopt;
}

std::optional<Violation> check_legality(const SessionState& state, const Turn& turn) {
  auto violation = [](ViolationKind k, std::string detail) {
    return std::optional<Violation>(Violation{k, std::move(detail)});
  };
  if (!is_open(state.status)) {
    return violation(ViolationKind::SessionClosed, "session is already closed");
  }
  if (turn.role != state.next_mover) {
    return violation(ViolationKind::OutOfTurn,
                     "it is the " + std::string(to_string(state.next_mover)) + "'s turn");
  }

  const Action& a = turn.action;
  const Verb own_offer_verb = turn.role == Role::Buyer ? Verb::Buy : Verb::Sell;
  if (a.verb() == Verb::Buy || a.verb() == Verb::Sell) {
    if (a.verb() != own_offer_verb) {
      return violation(ViolationKind::WrongVerbForRole,
                       "the " + std::string(to_string(turn.role)) + " may not use [" +
                           std::string(to_string(a.verb())) + "]");
    }
  }
  // QUIT is always available; the opening restriction targets DEAL.
  const bool buyer_opening = turn.role == Role::Buyer && state.history.empty();
  if (buyer_opening && a.verb() == Verb::Deal) {
    return violation(ViolationKind::FirstAction, "the buyer's first action must be [BUY] or [REJECT]");
  }
  if (a.priced()) {
    const Offer& o = a.offer();
    if (o.quantity != state.config.quantity) {
      return violation(ViolationKind::BadQuantity,
                       "quantity must be " + std::to_string(state.config.quantity));
    }
    if (o.codename != state.config.codename()) {
      return violation(ViolationKind::BadCodename,
                       "codename must be " + state.config.codename());
    }
  }
  if (a.verb() == Verb::Deal) {
    const auto target = state.standing_offer(counterpart(turn.role));
    if (!target) {
      return violation(ViolationKind::PrematureDeal,
                       "no " + std::string(to_string(counterpart(turn.role))) + " offer to accept");
    }
    if (!(a.offer() == *target)) {
      const Verb cv = turn.role == Role::Buyer ? Verb::Sell : Verb::Buy;
      return violation(ViolationKind::DealMismatch,
                       "[DEAL] must copy the standing offer " + render_action(cv == Verb::Sell
                                                                                  ? Action::sell(*target)
                                                                                  : Action::buy(*target)));
    }
  }
  return std::nullopt;
}

SessionState advance(SessionState state, Turn turn) {
  if (!is_open(state.status)) throw ProtocolError("move_on_closed_session");
  const Role mover = turn.role;
  const Verb verb = turn.action.verb();
  std::optional<Money> price;
  if (verb == Verb::Deal) price = turn.action.offer().price;
  state.history.push_back(std::move(turn));

  if (verb == Verb::Deal) {
    state.status = status::Deal{*price};
    return state;
  }
  if (verb == Verb::Quit) {
    state.status = status::Quit{mover};
    return state;
  }
  state.next_mover = counterpart(mover);
  if (mover == Role::Seller) {
    ++state.round;
    if (state.round >= state.config.max_turns) state.status = status::Exhausted{};
  }
  return state;
}

SessionStatus replay(const SessionConfig& config, const std::vector<Turn>& history) {
  SessionState state(config);
  for (std::size_t i = 0; i < history.size(); ++i) {
    if (const auto v = check_legality(state, history[i])) {
      return status::Invalid{"move " + std::to_string(i) + ": " + std::string(to_string(v->kind))};
    }
    state = advance(std::move(state), history[i]);
  }
  return state.status;
}

// ---------------------------------------------------------------------------

bool SessionRecord::valid() const {
  return !is_open(status) && !std::holds_alternative<status::Invalid>(status);
}

std::optional<Money> SessionRecord::deal_price() const {
  if (const auto* d = std::get_if<status::Deal>(&status)) return d->price;
  return std::nullopt;
}

std::optional<Money> SessionRecord::first_buyer_bid() const {
  for (const auto& t : history) {
    if (t.role == Role::Buyer && t.action.verb() == Verb::Buy) return t.action.offer().price;
  }
  return std::nullopt;
}

}  // namespace bargain
