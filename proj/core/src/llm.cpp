#include "bargain/llm.hpp"

#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace bargain {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Wire format

std::string chat_request_json(const ChatRequest& request) {
  json messages = json::array();
  for (const auto& m : request.messages) messages.push_back({{"role", m.role}, {"content", m.content}});
  return json{{"model", request.model}, {"messages", messages}, {"temperature", request.temperature}}
      .dump();
}

ChatRequest chat_request_from_json(std::string_view body) {
  const json doc = json::parse(body);
  ChatRequest r;
  r.model = doc.value("model", "");
  r.temperature = doc.value("temperature", 0.0);
  for (const auto& m : doc.at("messages")) {
    r.messages.push_back({m.at("role").get<std::string>(), m.at("content").get<std::string>()});
  }
  return r;
}

std::string chat_response_content(std::string_view body) {
  try {
    const json doc = json::parse(body);
    return doc.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& e) {
    throw TransportError(std::string("malformed chat response: ") + e.what(), false);
  }
}

std::string chat_response_json(std::string_view content) {
  return json{{"choices", json::array({{{"index", 0},
                                        {"message", {{"role", "assistant"}, {"content", content}}},
                                        {"finish_reason", "stop"}}})}}
      .dump();
}

// ---------------------------------------------------------------------------
// HTTP client

namespace {

std::pair<std::string, std::string> split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw std::invalid_argument("base url needs a scheme: " + url);
  const auto slash = url.find('/', scheme + 3);
  std::string origin = slash == std::string::npos ? url : url.substr(0, slash);
  std::string path = slash == std::string::npos ? "" : url.substr(slash);
  while (!path.empty() && path.back() == '/') path.pop_back();
  return {std::move(origin), path + "/chat/completions"};
}

}  // namespace

HttpChatClient::HttpChatClient(HttpChatConfig config) : config_(std::move(config)) {
  std::tie(origin_, path_) = split_url(config_.base_url);
  if (config_.max_attempts < 1) config_.max_attempts = 1;
}

std::string HttpChatClient::complete(const ChatRequest& request) {
  const std::string body = chat_request_json(request);
  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

  auto backoff = config_.initial_backoff;
  std::string last_error;
  for (int attempt = 0; attempt < config_.max_attempts; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    httplib::Client client(origin_);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout).count();
    client.set_connection_timeout(static_cast<time_t>(secs), 0);
    client.set_read_timeout(static_cast<time_t>(secs), 0);
    auto res = client.Post(path_, headers, body, "application/json");
    if (!res) {
      last_error = "connection failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 200) return chat_response_content(res->body);
    last_error = "HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200);
    const bool retriable = res->status == 429 || res->status >= 500;
    if (!retriable) throw TransportError(last_error, false);
  }
  throw TransportError(last_error + " (after " + std::to_string(config_.max_attempts) + " attempts)",
                       true);
}

// ---------------------------------------------------------------------------
// Replay

ReplayChatClient::ReplayChatClient(std::vector<std::string> completions)
    : completions_(std::move(completions)) {}

std::string ReplayChatClient::complete(const ChatRequest& request) {
  requests_.push_back(request);
  if (next_ >= completions_.size()) {
    throw TransportError("replay fixture exhausted after " + std::to_string(completions_.size()) +
                             " completions",
                         false);
  }
  return completions_[next_++];
}

ReplayFixture ReplayFixture::parse(std::string_view json_text) {
  const json doc = json::parse(json_text);
  ReplayFixture f;
  if (doc.is_array()) {
    f.default_ = doc.get<std::vector<std::string>>();
    return f;
  }
  if (const auto it = doc.find("default"); it != doc.end()) {
    f.default_ = it->get<std::vector<std::string>>();
  }
  if (const auto it = doc.find("sessions"); it != doc.end()) {
    for (const auto& [name, script] : it->items()) {
      f.sessions_[name] = script.get<std::vector<std::string>>();
    }
  }
  return f;
}

ReplayFixture ReplayFixture::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open replay fixture " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::vector<std::string> ReplayFixture::script_for(const std::string& codename) const {
  if (const auto it = sessions_.find(codename); it != sessions_.end()) return it->second;
  if (!default_.empty()) return default_;
  throw std::runtime_error("replay fixture has no script for " + codename);
}

// ---------------------------------------------------------------------------
// Prompts

namespace {

constexpr std::string_view kBuyerSystem =
    "You are a buyer looking forward to buying things on your Shopping List from me, the seller.\n"
    "You have access to the seller's Inventory List and you can bargain about the prices.\n"
    "Your task is to bargain with the seller and reach a deal with the price as low as possible in "
    "limited turns.\n"
    "You can only buy things on the Shopping List in the limited quantity. Use the codename of the "
    "product instead of the title.\n"
    "You can only buy things that cost less than your budget; otherwise, you should quit "
    "negotiating.\n"
    "\n"
    "Your Reply should include 3 parts: Thought, Talk, and Action.\n"
    "Thought: your inner strategic thinking of this bargaining session;\n"
    "Talk: short talk that you are going to say to the seller. Speak concisely and cut to the chase. "
    "Generate authentic and diverse sentences, avoiding repetition of sentences that have already "
    "appeared in the conversation;\n"
    "Action: one of the limited actions that define the real intention of your Talk. The type of "
    "your Action must be one of \"[BUY],[REJECT],[DEAL],[QUIT]\".\n"
    "1. '[BUY] $M (N codename_1)' if you wish to offer the seller $M to purchase all N items of the "
    "product with the codename \"codename_1\".\n"
    "2. '[REJECT]' if you choose to reject the other side's offer and await a new offer from the "
    "seller.\n"
    "3. '[DEAL] $M (N codename_1)' if you finally accept a former offer proposed by the seller. $M "
    "(N codename_1) is an exact copy of the seller's previous offer. You should not use this action "
    "to propose a new price. This action will immediately end the conversation and close the deal.\n"
    "4. '[QUIT]' if you believe that a mutually acceptable deal cannot be reached in limited turns. "
    "This action will immediately end the conversation.\n"
    "You shouldn't choose action '[DEAL] $M' before seller's action '[SELL] $M'. Your first action "
    "should be '[BUY] $M (N codename_1)' or '[REJECT]'.\n"
    "'[DEAL] $M (N codename_1)' can only be chosen to accept the seller's previous offer '[SELL] $M "
    "(N codename_1)'. Otherwise, you always choose from '[BUY]', '[REJECT]' and '[QUIT]'.\n"
    "\n"
    "Your reply should strictly follow this format, for example:\n"
    "Thought: I'm a buyer, and I want to bargain. The listing price of codename \"apple_1\" is $15, "
    "which is too expensive, so I try to buy an apple for $10.\n"
    "Talk: Hello, I'm tight on budget. can you sell it for 10$?\n"
    "Action: [BUY] $10 (1x apple_1)";

constexpr std::string_view kSellerSystem =
    "You are a seller looking forward to selling things on your Inventory List to me, the buyer.\n"
    "Your task is to bargain with the buyer and reach a deal with the price as high as possible in "
    "limited turns.\n"
    "You can only sell things that are on. the Inventory List. Use the codename of the product "
    "instead of the title.\n"
    "You have access to private information: the cost price of each product in the Inventory List, "
    "and do not disclose the real cost to the buyer.\n"
    "You should only agree on a deal when the selling price is higher than the cost; otherwise, you "
    "should quit negotiating.\n"
    "\n"
    "Your Reply should include 3 parts: Thought, Talk, and Action.\n"
    "Thought: your inner strategic thinking of this bargaining session;\n"
    "Talk: short talk that you are going to say to the buyer. Speak concisely and cut to the chase. "
    "Generate authentic and diverse sentences, avoiding repetition of sentences that have already "
    "appeared in the conversation;\n"
    "Action: one of the limited actions that define the real intention of your Talk. The type of "
    "your Action must be one of \"[SELL],[REJECT],[DEAL],[QUIT]\".\n"
    "1. '[SELL] $M (N codename_1)' if you want to propose selling N items of the product with the "
    "codename \"codename_1\" to the buyer for the total price of $M.\n"
    "2. '[REJECT]' if you choose to reject the other side's offer and await a new offer from the "
    "buyer.\n"
    "3. '[DEAL] $M (N codename_1)' if you finally agree on a former offer proposed by the buyer and "
    "sell N items of the product with the codename \"codename_1\" to the buyer for the total price "
    "of $M. $M (N codename_1) is an exact copy of the buyer's previous offer. You should not use "
    "this action to propose a new price. This action will immediately end the conversation and "
    "close the deal.\n"
    "4. '[QUIT]' if you believe that a mutually acceptable deal cannot be reached in limited turns. "
    "This action will immediately end the conversation.\n"
    "You shouldn't choose action '[DEAL]' before buyer's action '[BUY]'.\n"
    "'[DEAL] $M (N codename_1)' can only be chosen to accept the buyer's previous offer '[BUY] $M "
    "(N codename_1)'. Otherwise, you always choose from '[SELL]', '[REJECT]' and '[QUIT]'.\n"
    "\n"
    "Your reply should strictly follow this format, for example:\n"
    "Thought: I'm a seller, so I must sell the product with the codename \"apple_1\" higher than "
    "its cost.\n"
    "Talk: blah, blah...\n"
    "Action: [SELL] $15 (1x apple_1)";

// The user prompt is written from the point of view of `speaker`, the model's counterpart.
std::string negotiate_line(Role speaker, int max_turns) {
  const std::string_view me = to_string(speaker);
  const std::string_view you = to_string(counterpart(speaker));
  return "Now, I play the role of " + std::string(me) + " and you play the role of " +
         std::string(you) + ". We are going to negotiate based on the Inventory List in " +
         std::to_string(max_turns) + " turns.";
}

}  // namespace

std::string inventory_block(const Briefing& b) {
  std::string out = "Inventory List:\n";
  out += "Product1 (codename: " + b.codename + ")\n";
  out += "Title: \"" + b.title + "\"\n";
  out += "Description: \"" + b.description + "\"\n";
  out += "Available Quantity: 1\n";
  out += "Listing Price: $" + b.list_price.to_string() + " per item";
  if (b.role == Role::Seller) out += "\nCost: $" + b.private_value.to_string() + " per item";
  return out;
}

std::string shopping_list(const Briefing& b) {
  return "Product1 (codename: " + b.codename + ")\nQuantity: 1\nBudget: $" +
         b.private_value.to_string();
}

Prompt build_buyer_prompt(const Briefing& b) {
  return {std::string(kBuyerSystem), inventory_block(b) + "\n\nShopping List\n" + shopping_list(b) +
                                         "\n\n" + negotiate_line(Role::Seller, b.max_turns)};
}

Prompt build_seller_prompt(const Briefing& b) {
  return {std::string(kSellerSystem),
          inventory_block(b) + "\n\n" + negotiate_line(Role::Buyer, b.max_turns)};
}

Prompt build_prompt(const Briefing& b) {
  return b.role == Role::Buyer ? build_buyer_prompt(b) : build_seller_prompt(b);
}

// ---------------------------------------------------------------------------
// Agent

std::string counterpart_message(const VisibleMove& move) {
  return "Talk: " + move.talk + "\nAction: " + render_action(move.action);
}

LlmAgent::LlmAgent(LlmAgentConfig config, std::shared_ptr<ChatClient> client)
    : config_(std::move(config)), client_(std::move(client)) {
  if (!client_) throw std::invalid_argument("LlmAgent needs a chat client");
}

std::vector<ChatMessage> LlmAgent::conversation(const Observation& obs) const {
  const Prompt prompt = build_prompt(obs.briefing);
  std::vector<ChatMessage> messages{{"system", prompt.system}, {"user", prompt.user}};
  std::size_t own = 0;
  for (const auto& move : obs.history) {
    if (move.role == obs.role()) {
      // Fall back to the transmitted part if this agent did not author the move itself.
      messages.push_back({"assistant", own < own_replies_.size() ? own_replies_[own]
                                                                : counterpart_message(move)});
      ++own;
    } else {
      messages.push_back({"user", counterpart_message(move)});
    }
  }
  return messages;
}

std::string LlmAgent::respond(const Observation& obs, const std::optional<std::string>& correction) {
  ChatRequest request;
  request.model = config_.model;
  request.temperature = config_.temperature;
  request.messages = conversation(obs);
  if (correction) {
    pending_.push_back({"user", *correction});
  } else {
    pending_.clear();
  }
  request.messages.insert(request.messages.end(), pending_.begin(), pending_.end());
  std::string reply = client_->complete(request);
  pending_.push_back({"assistant", reply});
  return reply;
}

void LlmAgent::on_accepted(const Turn&, const std::string& raw) {
  own_replies_.push_back(raw);
  pending_.clear();
}

}  // namespace bargain
