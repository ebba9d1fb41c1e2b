#include "bargain/agent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bargain/llm.hpp"

namespace bargain {

Briefing briefing_for(const SessionConfig& config, Role role) {
  Briefing b;
  b.role = role;
  b.codename = config.codename();
  b.title = config.product->title;
  b.description = config.product->description;
  b.list_price = config.list_price;
  b.private_value = role == Role::Buyer ? config.budget : config.cost;
  b.max_turns = config.max_turns;
  return b;
}

int Observation::own_moves() const {
  return static_cast<int>(std::count_if(history.begin(), history.end(),
                                        [&](const VisibleMove& m) { return m.role == role(); }));
}

std::optional<Offer> Observation::latest_offer(Role who) const {
  for (auto it = history.rbegin(); it != history.rend(); ++it) {
    if (it->role != who) continue;
    const Verb v = it->action.verb();
    if (v == Verb::Buy || v == Verb::Sell) return it->action.offer();
  }
  return std::nullopt;
}

Observation observe(const SessionState& state, Role role) {
  Observation obs;
  obs.briefing = briefing_for(state.config, role);
  obs.history.reserve(state.history.size());
  for (const auto& t : state.history) obs.history.push_back({t.role, t.talk, t.action});
  obs.turns_remaining = std::max(0, state.config.max_turns - state.round);
  return obs;
}

HalfMove request_half_move(Agent& agent, const SessionState& state, int retries) {
  const Role role = state.next_mover;
  const Observation obs = observe(state, role);
  std::vector<FailedAttempt> failed;
  std::optional<std::string> correction;
  std::string reason = "no_action";

  for (int attempt = 0; attempt <= retries; ++attempt) {
    std::string raw;
    try {
      raw = agent.respond(obs, correction);
    } catch (const TransportError& e) {
      failed.push_back({role, "", std::string("transport: ") + e.what()});
      return RefusedMove{"transport", std::move(failed)};
    } catch (const std::exception& e) {
      failed.push_back({role, "", std::string("agent_error: ") + e.what()});
      return RefusedMove{"agent_error", std::move(failed)};
    }

    auto parsed = parse_turn(raw, role);
    if (auto* err = std::get_if<ParseError>(&parsed)) {
      reason = std::string(to_string(err->kind));
      failed.push_back({role, raw, reason + ": " + err->detail});
      correction = "Your reply could not be used (" + reason + ": " + err->detail +
                   "). Reply again with Thought, Talk, and Action in the required format.";
      continue;
    }
    Turn turn = std::move(std::get<Turn>(parsed));
    if (const auto v = check_legality(state, turn)) {
      reason = std::string(to_string(v->kind));
      failed.push_back({role, raw, reason + ": " + v->detail});
      correction = "Your action is not allowed (" + reason + ": " + v->detail +
                   "). Reply again with Thought, Talk, and a permitted Action.";
      continue;
    }
    agent.on_accepted(turn, raw);
    return AcceptedMove{std::move(turn), std::move(raw), std::move(failed)};
  }
  return RefusedMove{reason, std::move(failed)};
}

// ---------------------------------------------------------------------------

namespace {

Offer offer_for(const Observation& obs, Money price) {
  return Offer{price, 1, obs.briefing.codename};
}

std::string offer_talk(Money price, const std::string& codename) {
  return "Offering $" + price.to_string() + " for 1x " + codename + ".";
}

std::string deal_talk(Money price, const std::string& codename) {
  return "Deal at $" + price.to_string() + " for 1x " + codename + ".";
}

}  // namespace

ScriptedBuyer::ScriptedBuyer(ScriptedBuyerParams params) : params_(params) {
  if (!(params_.open_ratio > 0.0 && params_.open_ratio <= 1.0) ||
      !(params_.close_ratio >= params_.open_ratio && params_.close_ratio <= 1.0)) {
    throw std::invalid_argument("scripted buyer needs 0 < r0 <= r1 <= 1");
  }
}

Money ScriptedBuyer::target(const ScriptedBuyerParams& p, Money budget, int move, int max_turns) {
  if (max_turns <= 1) return budget.scaled(p.open_ratio);
  const double ratio =
      p.open_ratio + (p.close_ratio - p.open_ratio) * static_cast<double>(move) / (max_turns - 1);
  return budget.scaled(ratio);
}

Turn ScriptedBuyer::decide(const Observation& obs) const {
  const int k = obs.own_moves();
  const Briefing& b = obs.briefing;
  const Money goal = target(params_, b.private_value, k, b.max_turns);

  Turn t;
  t.role = Role::Buyer;
  t.thought = "Move " + std::to_string(k) + ", target $" + goal.to_string() + ".";
  const auto ask = obs.latest_offer(Role::Seller);
  if (ask && ask->price <= goal) {
    t.action = Action::deal(*ask);
    t.talk = deal_talk(ask->price, b.codename);
  } else if (k >= b.max_turns - 1) {
    t.action = Action::quit();
    t.talk = "I cannot go any higher, so I will stop here.";
  } else {
    t.action = Action::buy(offer_for(obs, goal));
    t.talk = offer_talk(goal, b.codename);
  }
  return t;
}

std::string ScriptedBuyer::respond(const Observation& obs, const std::optional<std::string>&) {
  return format_turn(decide(obs));
}

ScriptedSeller::ScriptedSeller(ScriptedSellerParams params, const Briefing& briefing)
    : params_(params) {
  if (params_.margin < 0.0 || !(params_.open_ratio > 0.0 && params_.open_ratio <= 1.0)) {
    throw std::invalid_argument("scripted seller needs m >= 0 and 0 < s0 <= 1");
  }
  const Money r = reservation(params_, briefing.private_value);
  if (static_cast<double>(r.cents()) > params_.open_ratio * static_cast<double>(briefing.list_price.cents())) {
    throw std::invalid_argument("scripted seller reservation " + r.to_string() +
                                " exceeds its opening ask for " + briefing.codename);
  }
}

Money ScriptedSeller::reservation(const ScriptedSellerParams& p, Money cost) {
  return cost.scaled(1.0 + p.margin);
}

Money ScriptedSeller::ask(const ScriptedSellerParams& p, Money cost, Money list_price, int move,
                          int max_turns) {
  const double reserve = static_cast<double>(reservation(p, cost).cents());
  const double schedule = p.open_ratio * static_cast<double>(list_price.cents()) *
                          (1.0 - static_cast<double>(move) / max_turns);
  return Money::from_double(std::max(reserve, schedule) / 100.0);
}

Turn ScriptedSeller::decide(const Observation& obs) const {
  const int k = obs.own_moves();
  const Briefing& b = obs.briefing;
  const Money current = ask(params_, b.private_value, b.list_price, k, b.max_turns);
  const Money floor = reservation(params_, b.private_value);
  const bool last_move = k >= b.max_turns - 1;

  Turn t;
  t.role = Role::Seller;
  t.thought = "Move " + std::to_string(k) + ", asking $" + current.to_string() + ".";
  const auto bid = obs.latest_offer(Role::Buyer);
  if (bid && (bid->price >= current || (last_move && bid->price >= floor))) {
    t.action = Action::deal(*bid);
    t.talk = deal_talk(bid->price, b.codename);
  } else {
    t.action = Action::sell(offer_for(obs, current));
    t.talk = offer_talk(current, b.codename);
  }
  return t;
}

std::string ScriptedSeller::respond(const Observation& obs, const std::optional<std::string>&) {
  return format_turn(decide(obs));
}

CannedAgent::CannedAgent(std::vector<std::string> replies) : replies_(std::move(replies)) {
  if (replies_.empty()) throw std::invalid_argument("canned agent needs at least one reply");
}

std::string CannedAgent::respond(const Observation&, const std::optional<std::string>&) {
  const std::size_t i = std::min(next_, replies_.size() - 1);
  ++next_;
  return replies_[i];
}

}  // namespace bargain
