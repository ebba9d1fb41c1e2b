#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bargain/agent.hpp"
#include "bargain/llm.hpp"

namespace bargain {

struct OfferSchedule {
  double floor_ratio = 0.5;    ///< share of budget offered on the first move
  double ceiling_ratio = 1.0;  ///< share of budget reached at t = t_m
};

/// round((a + (b - a) * t / t_m) * B). With the default ratios this is (0.5 + 0.5 t/t_m) B.
/// Throws std::invalid_argument outside 0 <= t <= t_m, t_m >= 1, B > 0.
Money offer_price(int t, int max_turns, Money budget, const OfferSchedule& schedule = {});

/// BUY at `price` unless the standing seller offer is at or below it, in which
/// case DEAL on exactly that offer.
Action og_decide(const std::optional<Offer>& standing_seller_offer, Money price,
                 const std::string& codename);

/// Phrases a fixed action as talk. Returning nullopt means "could not narrate".
class Narrator {
 public:
  virtual ~Narrator() = default;
  virtual std::optional<std::string> narrate(const Observation& obs, const Action& action) = 0;
};

/// Deterministic one-line talk per verb, e.g. "I can offer $50 for 1x beauty_10.".
class TemplateNarrator final : public Narrator {
 public:
  std::optional<std::string> narrate(const Observation& obs, const Action& action) override;
  static std::string sentence(const Action& action);
};

/// Chat-model narrator driven by a fixed instruction and a one-shot demonstration.
class LlmNarrator final : public Narrator {
 public:
  LlmNarrator(LlmAgentConfig config, std::shared_ptr<ChatClient> client);
  std::optional<std::string> narrate(const Observation& obs, const Action& action) override;

  static std::vector<ChatMessage> build_messages(const Observation& obs, const Action& action);
  /// Text of the `Sentences:` field with surrounding quotes removed.
  static std::optional<std::string> extract_sentences(const std::string& reply);

 private:
  LlmAgentConfig config_;
  std::shared_ptr<ChatClient> client_;
};

/// Buyer whose prices come from the offer schedule; the narrator only supplies talk.
/// Never quits; a failed narration falls back to the template sentence.
class OgBuyer final : public Agent {
 public:
  OgBuyer(OfferSchedule schedule, std::unique_ptr<Narrator> narrator);
  std::string respond(const Observation& obs, const std::optional<std::string>& correction) override;

  Turn decide(const Observation& obs);

 private:
  OfferSchedule schedule_;
  std::unique_ptr<Narrator> narrator_;
};

}  // namespace bargain
