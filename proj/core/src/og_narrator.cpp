#include "bargain/og_narrator.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace bargain {

Money offer_price(int t, int max_turns, Money budget, const OfferSchedule& schedule) {
  if (max_turns < 1 || t < 0 || t > max_turns) {
    throw std::invalid_argument("offer_price needs 0 <= t <= t_m and t_m >= 1");
  }
  if (budget <= Money{}) throw std::invalid_argument("offer_price needs a positive budget");
  const double a = schedule.floor_ratio;
  const double b = schedule.ceiling_ratio;
  if (t == max_turns) return budget.scaled(b);
  return budget.scaled(a + (b - a) * static_cast<double>(t) / max_turns);
}

Action og_decide(const std::optional<Offer>& standing_seller_offer, Money price,
                 const std::string& codename) {
  if (standing_seller_offer && standing_seller_offer->price <= price) {
    return Action::deal(*standing_seller_offer);
  }
  return Action::buy(Offer{price, 1, codename});
}

// ---------------------------------------------------------------------------

std::string TemplateNarrator::sentence(const Action& action) {
  switch (action.verb()) {
    case Verb::Buy:
      return "I can offer $" + action.offer().price.to_string() + " for " +
             std::to_string(action.offer().quantity) + "x " + action.offer().codename + ".";
    case Verb::Sell:
      return "I can sell " + std::to_string(action.offer().quantity) + "x " +
             action.offer().codename + " for $" + action.offer().price.to_string() + ".";
    case Verb::Deal:
      return "Deal. $" + action.offer().price.to_string() + " for " +
             std::to_string(action.offer().quantity) + "x " + action.offer().codename + " works for me.";
    case Verb::Reject: return "I can't accept that offer.";
    case Verb::Quit: return "I don't think we can reach a deal.";
  }
  return {};
}

std::optional<std::string> TemplateNarrator::narrate(const Observation&, const Action& action) {
  return sentence(action);
}

namespace {

constexpr std::string_view kNarratorSystem =
    "You are good at business negotiating. You can fully understand the meaning of the Actions.\n"
    "Write some short talks for the bargaining dialogue between the buyer and seller based on the "
    "given actions.\n"
    "You should generate authentic and diverse sentences, avoiding repeating sentences that have "
    "already appeared in the dialogue.\n"
    "Speak concisely and cut to the chase. The talks must align with the intention of the "
    "corresponding Action.\n"
    "\n"
    "Action: one of the limited actions that define your actual intention. The type of an Action "
    "must be one of \"[BUY],[SELL],[REJECT],[DEAL],[QUIT]\".\n"
    "1. '[BUY] $M (N codename_1)' if you wish to offer the seller $M to purchase N items of the "
    "product with the codename \"codename_1\".\n"
    "2. '[SELL] $M (N codename_1)' if you want to propose selling N items of the product with the "
    "codename \"codename_1\" to the buyer for $M or you propose a new discounted offer $M for N "
    "codename_1 to the buyer.\n"
    "3. '[REJECT]' if you choose to reject the other side's offer and await a new offer from the "
    "seller.\n"
    "4. '[DEAL] $M (N codename_1)' if you finally agree on a former offer proposed by the seller to "
    "exchange N items of the product with the codename \"codename_1\" for $M. Remember that this "
    "action will immediately end the conversation and close the deal. You should ensure both sides "
    "agree on this price.\n"
    "5. '[QUIT]' if you believe that a mutually acceptable deal cannot be reached. This action will "
    "immediately end the conversation.\n"
    "\n"
    "Given Dialogue, Final Role, and Final Action, generate the corresponding sentences for the "
    "Final Role and Final Action.\n"
    "Utilize the information from the Inventory List. Don't involve products that are not in the "
    "actions. Focus on the specific product in the Final Action.\n"
    "\n"
    "Response format: Repeat the given Final Action and Final Role, and then generate reasonable "
    "sentences. For example:\n"
    "\n"
    "Final Role: \"BUYER\"\n"
    "Final Action: \"[REJECT]\"\n"
    "Sentences: \"I can't afford that price.\"";

constexpr std::string_view kDemoUser =
    "Inventory List:\n"
    "Product1 (codename: charger_1)\n"
    "Title: \"Verizon Car Charger with Dual Output Micro USB and LED Light\"\n"
    "Description: \"Charge two devices simultaneously on the go. This vehicle charger with an "
    "additional USB port delivers enough power to charge two devices at once. The push-button "
    "activated LED connector light means no more fumbling in the dark trying to connect your "
    "device. Auto Detect IC Technology automatically detects the device type and its specific "
    "charging needs for improved compatibility. And the built-in indicator light illuminates red to "
    "let you know the charger is receiving power and the power socket is working properly.\"\n"
    "Available Quantity: 1\n"
    "Listing Price: $10 per item\n"
    "\n"
    "Dialogue:\n"
    "\"[BUY] $5 (1 charger)\": \"BUYER: Hi, not sure if the charger would work for my car. Can you "
    "sell it to me for $5?\",\n"
    "\"[SELL] $8 (1 charger)\": \"SELLER: I think the lowest I would want to go is 8. \",\n"
    "\"[BUY] $6 (1 charger)\": \"BUYER: How about $6 and I pick it up myself? It'll save you "
    "shipping to me.\",\n"
    "\"[SELL] $7 (1 charger)\": \"SELLER: At least $7.\",\n"
    "\n"
    "Final Role: \"BUYER\"\n"
    "Final Action: \"[DEAL] $7 (1 charger)\"";

constexpr std::string_view kDemoAssistant =
    "Final Role: \"BUYER\"\n"
    "Final Action: \"[DEAL] $7 (1 charger)\"\n"
    "Sentences: \"Eh, fine. Deal, $7, here you are.\"";

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

LlmNarrator::LlmNarrator(LlmAgentConfig config, std::shared_ptr<ChatClient> client)
    : config_(std::move(config)), client_(std::move(client)) {
  if (!client_) throw std::invalid_argument("LlmNarrator needs a chat client");
}

std::vector<ChatMessage> LlmNarrator::build_messages(const Observation& obs, const Action& action) {
  std::string live = inventory_block(obs.briefing) + "\n\nDialogue:\n";
  for (const auto& move : obs.history) {
    live += "\"" + render_action(move.action) + "\": \"" + upper(to_string(move.role)) + ": " +
            move.talk + "\",\n";
  }
  live += "\nFinal Role: \"" + upper(to_string(obs.role())) + "\"\n";
  live += "Final Action: \"" + render_action(action) + "\"";
  return {{"system", std::string(kNarratorSystem)},
          {"user", std::string(kDemoUser)},
          {"assistant", std::string(kDemoAssistant)},
          {"user", std::move(live)}};
}

std::optional<std::string> LlmNarrator::extract_sentences(const std::string& reply) {
  std::size_t found = std::string::npos;
  for (std::size_t line = 0; line < reply.size();) {
    std::size_t i = line;
    while (i < reply.size() && (reply[i] == ' ' || reply[i] == '\t')) ++i;
    if (upper(std::string_view(reply).substr(i, 10)) == "SENTENCES:") found = i + 10;
    const auto nl = reply.find('\n', line);
    if (nl == std::string::npos) break;
    line = nl + 1;
  }
  if (found == std::string::npos) return std::nullopt;
  std::string text = trim(std::string_view(reply).substr(found));
  if (text.size() >= 2 && text.front() == '"' && text.back() == '"') {
    text = trim(std::string_view(text).substr(1, text.size() - 2));
  }
  if (text.empty()) return std::nullopt;
  return text;
}

std::optional<std::string> LlmNarrator::narrate(const Observation& obs, const Action& action) {
  ChatRequest request{config_.model, build_messages(obs, action), config_.temperature};
  return extract_sentences(client_->complete(request));
}

// ---------------------------------------------------------------------------

OgBuyer::OgBuyer(OfferSchedule schedule, std::unique_ptr<Narrator> narrator)
    : schedule_(schedule), narrator_(std::move(narrator)) {
  if (!(schedule_.floor_ratio > 0.0 && schedule_.floor_ratio <= schedule_.ceiling_ratio &&
        schedule_.ceiling_ratio <= 1.0)) {
    throw std::invalid_argument("offer schedule needs 0 < floor <= ceiling <= 1");
  }
  if (!narrator_) narrator_ = std::make_unique<TemplateNarrator>();
}

Turn OgBuyer::decide(const Observation& obs) {
  const Briefing& b = obs.briefing;
  const int t = std::min(obs.own_moves(), b.max_turns);
  const Money p = offer_price(t, b.max_turns, b.private_value, schedule_);

  Turn turn;
  turn.role = Role::Buyer;
  turn.action = og_decide(obs.latest_offer(Role::Seller), p, b.codename);
  std::optional<std::string> talk;
  try {
    talk = narrator_->narrate(obs, turn.action);
  } catch (const std::exception&) {
    talk.reset();
  }
  turn.talk = talk ? *talk : TemplateNarrator::sentence(turn.action);
  // Talk is a single line so it can never carry a label that shadows the action.
  for (auto& c : turn.talk) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return turn;
}

std::string OgBuyer::respond(const Observation& obs, const std::optional<std::string>&) {
  return format_turn(decide(obs));
}

}  // namespace bargain
