#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bargain/agent.hpp"

namespace bargain {

struct ChatMessage {
  std::string role;  ///< "system", "user" or "assistant"
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
};

/// Network or protocol failure talking to a chat endpoint.
class TransportError : public std::runtime_error {
 public:
  TransportError(const std::string& what, bool retriable)
      : std::runtime_error(what), retriable_(retriable) {}
  bool retriable() const { return retriable_; }

 private:
  bool retriable_;
};

/// {"model": ..., "messages": [{"role", "content"}...], "temperature": ...}
std::string chat_request_json(const ChatRequest& request);
ChatRequest chat_request_from_json(std::string_view body);
/// Extracts choices[0].message.content. Throws TransportError (not retriable) on a bad body.
std::string chat_response_content(std::string_view body);
std::string chat_response_json(std::string_view content);

class ChatClient {
 public:
  virtual ~ChatClient() = default;
  virtual std::string complete(const ChatRequest& request) = 0;
};

struct HttpChatConfig {
  std::string base_url = "https://api.openai.com/v1";
  std::string api_key;
  std::chrono::milliseconds timeout{60'000};
  int max_attempts = 4;
  std::chrono::milliseconds initial_backoff{500};
};

/// Environment variable consulted for the endpoint API key.
inline constexpr const char* kApiKeyEnv = "BARGAIN_API_KEY";

/// POSTs to <base_url>/chat/completions. Connection failures, 429 and 5xx are
/// retried with exponential backoff up to max_attempts.
class HttpChatClient final : public ChatClient {
 public:
  explicit HttpChatClient(HttpChatConfig config);
  std::string complete(const ChatRequest& request) override;

 private:
  HttpChatConfig config_;
  std::string origin_;
  std::string path_;
};

/// Serves recorded completions in order; every request is kept for inspection.
class ReplayChatClient final : public ChatClient {
 public:
  explicit ReplayChatClient(std::vector<std::string> completions);
  std::string complete(const ChatRequest& request) override;

  const std::vector<ChatRequest>& requests() const { return requests_; }

 private:
  std::vector<std::string> completions_;
  std::size_t next_ = 0;
  std::vector<ChatRequest> requests_;
};

/// Recorded completions file. Either a JSON array of strings (one script for
/// every session) or an object {"default": [...], "sessions": {codename: [...]}}.
class ReplayFixture {
 public:
  static ReplayFixture load(const std::filesystem::path& path);
  static ReplayFixture parse(std::string_view json_text);

  /// Script for a codename, falling back to the default one. Throws if neither exists.
  std::vector<std::string> script_for(const std::string& codename) const;

 private:
  std::vector<std::string> default_;
  std::map<std::string, std::vector<std::string>> sessions_;
};

/// The inventory block substituted for {inv}. The cost line appears only for the seller.
std::string inventory_block(const Briefing& briefing);
/// The shopping list substituted for {need} (buyer only).
std::string shopping_list(const Briefing& briefing);

struct Prompt {
  std::string system;
  std::string user;
};

Prompt build_buyer_prompt(const Briefing& briefing);
Prompt build_seller_prompt(const Briefing& briefing);
Prompt build_prompt(const Briefing& briefing);

struct LlmAgentConfig {
  std::string model;
  double temperature = 0.0;
};

/// Chat-model participant. Its own earlier replies (Thought included) go back as
/// assistant messages; the counterpart's talk and action arrive as user messages.
class LlmAgent final : public Agent {
 public:
  LlmAgent(LlmAgentConfig config, std::shared_ptr<ChatClient> client);
  std::string respond(const Observation& obs, const std::optional<std::string>& correction) override;
  void on_accepted(const Turn& turn, const std::string& raw) override;

  /// Messages that a fresh (uncorrected) reply would be requested with.
  std::vector<ChatMessage> conversation(const Observation& obs) const;

 private:
  LlmAgentConfig config_;
  std::shared_ptr<ChatClient> client_;
  std::vector<std::string> own_replies_;
  std::vector<ChatMessage> pending_;  ///< refused attempts and notices for the current half-move
};

/// "Talk: ...\nAction: ..." as sent for the counterpart's move.
std::string counterpart_message(const VisibleMove& move);

}  // namespace bargain
