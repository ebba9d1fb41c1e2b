#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <random>

#include <httplib.h>

#include "bargain/agent_spec.hpp"
#include "bargain/llm.hpp"
#include "bargain/metrics.hpp"
#include "bargain/runner.hpp"
#include "support.hpp"

using namespace bargain;
using testing_support::usd;

namespace {

Offer offer(double price, std::string code = "electronics_203") {
  return Offer{usd(price), 1, std::move(code)};
}

SessionState with_history(SessionConfig cfg, const std::vector<Turn>& turns) {
  SessionState s(std::move(cfg));
  for (const auto& t : turns) s = advance(std::move(s), t);
  return s;
}

Observation buyer_obs(double budget, int max_turns, std::vector<VisibleMove> history) {
  Observation o;
  o.briefing = {Role::Buyer, "a_1", "item", "", usd(200), usd(budget), max_turns};
  o.history = std::move(history);
  return o;
}

Observation seller_obs(double cost, double list, int max_turns, std::vector<VisibleMove> history) {
  Observation o;
  o.briefing = {Role::Seller, "a_1", "item", "", usd(list), usd(cost), max_turns};
  o.history = std::move(history);
  return o;
}

VisibleMove seen(Role r, Action a) { return {r, "", std::move(a)}; }

// Cents arithmetic on rationals, rounding half away from zero; independent of Money.
std::int64_t div_round(std::int64_t num, std::int64_t den) { return (2 * num + den) / (2 * den); }

struct CrossOutcome {
  std::string status;
  std::int64_t price = 0;
};

// Exhaustive walk of scripted buyer (r0 = 1/2, r1 = 1) against scripted seller
// (m = 0, s0 = 1), written against the schedule definitions only.
CrossOutcome brute_force_cross(std::int64_t b, std::int64_t c, std::int64_t l, int tm) {
  std::optional<std::int64_t> ask;
  for (int k = 0; k < tm; ++k) {
    const std::int64_t target = tm == 1 ? div_round(b, 2) : div_round(b * (tm - 1 + k), 2 * (tm - 1));
    if (ask && *ask <= target) return {"deal", *ask};
    if (k == tm - 1) return {"quit", 0};
    const std::int64_t bid = target;
    const std::int64_t a = std::max(c, div_round(l * (tm - k), tm));
    if (bid >= a || (k == tm - 1 && bid >= c)) return {"deal", bid};
    ask = a;
  }
  return {"exhausted", 0};
}

}  // namespace

TEST(Observe, BuyerViewHidesCostAndThoughts) {
  auto cfg = testing_support::config(319.2, 329, 399, "electronics_284");
  const auto s = with_history(cfg, {{Role::Buyer, "secret buyer plan", "hi", Action::buy(offer(29, "electronics_284"))},
                                    {Role::Seller, "cost is 329, hold", "no", Action::reject()}});
  const Observation o = observe(s, Role::Buyer);
  EXPECT_EQ(o.briefing.private_value, usd(319.2));
  EXPECT_EQ(o.history.size(), 2u);
  const std::string visible = build_prompt(o.briefing).system + build_prompt(o.briefing).user +
                              counterpart_message(o.history[0]) + counterpart_message(o.history[1]);
  EXPECT_EQ(visible.find("329"), std::string::npos);
  EXPECT_EQ(visible.find("secret buyer plan"), std::string::npos);
  EXPECT_EQ(visible.find("cost is"), std::string::npos);
}

TEST(Observe, InitialView) {
  const SessionState s(testing_support::config(80, 60, 100));
  const Observation o = observe(s, Role::Seller);
  EXPECT_TRUE(o.history.empty());
  EXPECT_EQ(o.turns_remaining, 10);
  EXPECT_EQ(o.briefing.private_value, usd(60));
}

// Property: no role's prompts or transmitted messages contain the other side's value or any thought.
TEST(Observe, NeverLeaksProperty) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    const std::int64_t cost = 1000 + static_cast<std::int64_t>(rng() % 90000);
    const std::int64_t budget = cost + 1 + static_cast<std::int64_t>(rng() % 5000);
    auto cfg = testing_support::config(budget / 100.0, cost / 100.0, (budget + 5000) / 100.0, "a_1");
    ScriptedBuyer buyer;
    ScriptedSeller seller({}, briefing_for(cfg, Role::Seller));
    const SessionRecord rec = run_session(cfg, buyer, seller);
    SessionState s(cfg);
    for (const auto& t : rec.history) {
      s = advance(std::move(s), t);
      for (const Role role : {Role::Buyer, Role::Seller}) {
        const Observation o = observe(s, role);
        const Prompt prompt = build_prompt(o.briefing);
        // Offers may legitimately quote any price, so the value check covers the briefing only.
        const Money hidden = role == Role::Buyer ? cfg.cost : cfg.budget;
        const Money own = role == Role::Buyer ? cfg.budget : cfg.cost;
        if (hidden != own && hidden != cfg.list_price) {
          ASSERT_EQ(prompt.user.find("$" + hidden.to_string()), std::string::npos) << prompt.user;
        }
        ASSERT_EQ(prompt.user.find(role == Role::Buyer ? "Cost:" : "Budget:"), std::string::npos);
        std::string view = prompt.user;
        for (const auto& m : o.history) view += counterpart_message(m);
        for (const auto& t : rec.history) {
          if (!t.thought.empty()) ASSERT_EQ(view.find(t.thought), std::string::npos);
        }
      }
    }
  }
}

TEST(ScriptedBuyer, ScheduleExamples) {
  const ScriptedBuyerParams p{0.5, 1.0};
  EXPECT_EQ(ScriptedBuyer::target(p, usd(100), 0, 10), usd(50));
  EXPECT_EQ(ScriptedBuyer::target(p, usd(100), 9, 10), usd(100));
  EXPECT_EQ(ScriptedBuyer::target(p, usd(100), 0, 1), usd(50));

  ScriptedBuyer b(p);
  EXPECT_EQ(b.decide(buyer_obs(100, 10, {})).action, Action::buy(offer(50, "a_1")));
  // Target 62.50 needs B = 100, t_m = 5, k = 1: 0.5 + 0.5 / 4 = 0.625.
  const auto obs = buyer_obs(100, 5, {seen(Role::Buyer, Action::buy(offer(50, "a_1"))),
                                      seen(Role::Seller, Action::sell(offer(60, "a_1")))});
  EXPECT_EQ(b.decide(obs).action, Action::deal(offer(60, "a_1")));
  const auto high = buyer_obs(100, 5, {seen(Role::Buyer, Action::buy(offer(50, "a_1"))),
                                       seen(Role::Seller, Action::sell(offer(90, "a_1")))});
  EXPECT_EQ(b.decide(high).action, Action::buy(offer(62.5, "a_1")));
  EXPECT_EQ(b.decide(high).talk, "Offering $62.50 for 1x a_1.");
}

TEST(ScriptedBuyer, QuitsOnFinalMoveWithoutAcceptableOffer) {
  ScriptedBuyer b;
  const auto obs = buyer_obs(100, 2, {seen(Role::Buyer, Action::buy(offer(50, "a_1"))),
                                      seen(Role::Seller, Action::sell(offer(150, "a_1")))});
  EXPECT_EQ(b.decide(obs).action, Action::quit());
}

TEST(ScriptedSeller, ScheduleExamples) {
  const ScriptedSellerParams p{0.0, 1.0};
  ScriptedSeller s(p, seller_obs(60, 100, 10, {}).briefing);
  const auto opening = seller_obs(60, 100, 10, {seen(Role::Buyer, Action::buy(offer(50, "a_1")))});
  EXPECT_EQ(s.decide(opening).action, Action::sell(offer(100, "a_1")));
  EXPECT_EQ(ScriptedSeller::ask(p, usd(60), usd(100), 3, 10), usd(70));
  std::vector<VisibleMove> h;
  for (int k = 0; k < 3; ++k) {
    h.push_back(seen(Role::Buyer, Action::buy(offer(50, "a_1"))));
    h.push_back(seen(Role::Seller, Action::sell(Offer{ScriptedSeller::ask(p, usd(60), usd(100), k, 10), 1, "a_1"})));
  }
  h.push_back(seen(Role::Buyer, Action::buy(offer(70, "a_1"))));
  EXPECT_EQ(s.decide(seller_obs(60, 100, 10, h)).action, Action::deal(offer(70, "a_1")));
  EXPECT_EQ(ScriptedSeller::ask(p, usd(60), usd(100), 9, 10), usd(60));
}

TEST(ScriptedSeller, RejectsReservationAboveOpeningAsk) {
  Briefing b{Role::Seller, "a_1", "", "", usd(100), usd(95), 10};
  EXPECT_THROW(ScriptedSeller({0.1, 1.0}, b), std::invalid_argument);
  EXPECT_THROW(ScriptedSeller({0.0, 0.9}, b), std::invalid_argument);
  EXPECT_NO_THROW(ScriptedSeller({0.0, 1.0}, b));
}

TEST(ScriptedAgents, MonotoneSchedulesProperty) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 2000; ++i) {
    const double r0 = 0.05 + 0.95 * static_cast<double>(rng() % 1000) / 1000.0;
    const double r1 = r0 + (1.0 - r0) * static_cast<double>(rng() % 1000) / 1000.0;
    const ScriptedBuyerParams bp{r0, r1};
    const ScriptedSellerParams sp{static_cast<double>(rng() % 50) / 100.0, 1.0};
    const Money budget = Money::from_cents(1 + static_cast<std::int64_t>(rng() % 500000));
    const Money list = Money::from_cents(100 + static_cast<std::int64_t>(rng() % 500000));
    const Money cost = Money::from_cents(static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(list.cents())));
    const int tm = 1 + static_cast<int>(rng() % 15);
    const Money reserve = ScriptedSeller::reservation(sp, cost);
    for (int k = 0; k < tm; ++k) {
      const Money bk = ScriptedBuyer::target(bp, budget, k, tm);
      ASSERT_LE(bk, budget);
      if (k > 0) ASSERT_GE(bk, ScriptedBuyer::target(bp, budget, k - 1, tm));
      const Money ak = ScriptedSeller::ask(sp, cost, list, k, tm);
      ASSERT_GE(ak, reserve);
      if (k > 0) ASSERT_LE(ak, ScriptedSeller::ask(sp, cost, list, k - 1, tm));
    }
  }
}

TEST(ScriptedAgents, CrossMatchesBruteForce) {
  // The spec's cross example, then a randomized sweep.
  {
    auto cfg = testing_support::config(100, 60, 100, "a_1", 10);
    ScriptedBuyer buyer;
    ScriptedSeller seller({}, briefing_for(cfg, Role::Seller));
    const auto rec = run_session(cfg, buyer, seller);
    const auto oracle = brute_force_cross(10000, 6000, 10000, 10);
    ASSERT_EQ(oracle.status, "deal");
    EXPECT_EQ(rec.deal_price(), Money::from_cents(oracle.price));
  }
  std::mt19937_64 rng(99);
  for (int i = 0; i < 3000; ++i) {
    const std::int64_t l = 100 + static_cast<std::int64_t>(rng() % 450000);
    const std::int64_t c = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(l));
    const std::int64_t b = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(l));
    const int tm = 1 + static_cast<int>(rng() % 12);
    auto cfg = testing_support::config(b / 100.0, c / 100.0, l / 100.0, "a_1", tm);
    ScriptedBuyer buyer;
    ScriptedSeller seller({}, briefing_for(cfg, Role::Seller));
    const auto rec = run_session(cfg, buyer, seller);
    const auto oracle = brute_force_cross(b, c, l, tm);
    ASSERT_EQ(status_name(rec.status), oracle.status) << b << " " << c << " " << l << " " << tm;
    if (oracle.status == "deal") ASSERT_EQ(rec.deal_price(), Money::from_cents(oracle.price));
    ASSERT_TRUE(rec.valid());
  }
}

TEST(Prompts, BuyerAndSellerTemplates) {
  const auto cfg = testing_support::config(319.2, 329, 399, "electronics_284");
  const Prompt buyer = build_buyer_prompt(briefing_for(cfg, Role::Buyer));
  const Prompt seller = build_seller_prompt(briefing_for(cfg, Role::Seller));
  EXPECT_NE(buyer.system.find("You can only buy things that cost less than your budget; otherwise, "
                              "you should quit negotiating."),
            std::string::npos);
  EXPECT_NE(seller.system.find("do not disclose the real cost to the buyer."), std::string::npos);
  const std::string tail = "negotiate based on the Inventory List in 10 turns.";
  EXPECT_EQ(seller.user.substr(seller.user.size() - tail.size()), tail);
  EXPECT_NE(seller.user.find("Now, I play the role of buyer and you play the role of seller."), std::string::npos);
  EXPECT_NE(buyer.user.find("Now, I play the role of seller and you play the role of buyer."), std::string::npos);
  EXPECT_NE(buyer.user.find("Shopping List\n"), std::string::npos);
  EXPECT_NE(buyer.user.find("Budget: $319.20"), std::string::npos);
  EXPECT_NE(seller.user.find("Cost: $329 per item"), std::string::npos);
  EXPECT_EQ((buyer.system + buyer.user).find("329"), std::string::npos);
  EXPECT_EQ((seller.system + seller.user).find("319.2"), std::string::npos);
  EXPECT_EQ(seller.user.find("Shopping List"), std::string::npos);
  EXPECT_NE(buyer.user.find("codename: electronics_284"), std::string::npos);
  EXPECT_NE(buyer.user.find("Listing Price: $399 per item"), std::string::npos);
}

TEST(ChatJson, RequestAndResponseShapes) {
  ChatRequest r{"m", {{"system", "s"}, {"user", "u"}}, 0.0};
  const ChatRequest back = chat_request_from_json(chat_request_json(r));
  EXPECT_EQ(back.model, "m");
  EXPECT_EQ(back.messages, r.messages);
  EXPECT_EQ(back.temperature, 0.0);
  EXPECT_EQ(chat_response_content(chat_response_json("hello")), "hello");
  EXPECT_THROW(chat_response_content("{}"), TransportError);
}

TEST(LlmAgent, WellFormedCompletionBecomesTurn) {
  auto cfg = testing_support::config(864.93, 959, 1081.16, "toys-games_22");
  auto client = std::make_shared<ReplayChatClient>(std::vector<std::string>{
      "Thought: start low.\nTalk: Would you sell it for $800?\nAction: [BUY] $800 (1x toys-games_22)"});
  LlmAgent agent({"model-x"}, client);
  const SessionState s(cfg);
  const HalfMove hm = request_half_move(agent, s);
  ASSERT_TRUE(std::holds_alternative<AcceptedMove>(hm));
  EXPECT_EQ(std::get<AcceptedMove>(hm).turn.action, Action::buy(Offer{usd(800), 1, "toys-games_22"}));
  ASSERT_EQ(client->requests().size(), 1u);
  const ChatRequest& req = client->requests()[0];
  EXPECT_EQ(req.model, "model-x");
  EXPECT_EQ(req.temperature, 0.0);
  ASSERT_EQ(req.messages.size(), 2u);
  EXPECT_EQ(req.messages[0].role, "system");
  EXPECT_EQ(req.messages[1].role, "user");
}

TEST(LlmAgent, RetriesThenGivesUp) {
  auto cfg = testing_support::config(80, 60, 100, "a_1");
  auto client = std::make_shared<ReplayChatClient>(std::vector<std::string>{"no idea", "still none", "nope"});
  LlmAgent agent({"m"}, client);
  const HalfMove hm = request_half_move(agent, SessionState(cfg), 2);
  ASSERT_TRUE(std::holds_alternative<RefusedMove>(hm));
  EXPECT_EQ(std::get<RefusedMove>(hm).reason, "no_action");
  EXPECT_EQ(std::get<RefusedMove>(hm).failed.size(), 3u);
  ASSERT_EQ(client->requests().size(), 3u);
  // The third request carries both refused replies and both notices.
  const auto& msgs = client->requests()[2].messages;
  ASSERT_EQ(msgs.size(), 6u);
  EXPECT_EQ(msgs[2].content, "no idea");
  EXPECT_EQ(msgs[3].role, "user");
  EXPECT_NE(msgs[3].content.find("no_action"), std::string::npos);
}

TEST(LlmAgent, CorrectionAfterViolation) {
  auto cfg = testing_support::config(80, 60, 100, "a_1");
  auto client = std::make_shared<ReplayChatClient>(std::vector<std::string>{
      "Talk: deal!\nAction: [DEAL] $70 (1x a_1)", "Talk: ok\nAction: [BUY] $40 (1x a_1)"});
  LlmAgent agent({"m"}, client);
  const HalfMove hm = request_half_move(agent, SessionState(cfg), 2);
  ASSERT_TRUE(std::holds_alternative<AcceptedMove>(hm));
  const auto& ok = std::get<AcceptedMove>(hm);
  ASSERT_EQ(ok.failed.size(), 1u);
  EXPECT_EQ(ok.failed[0].error.rfind("first_action", 0), 0u);
  EXPECT_NE(client->requests()[1].messages.back().content.find("first_action"), std::string::npos);
}

TEST(LlmAgent, OwnRepliesKeepThoughtCounterpartsDoNot) {
  auto cfg = testing_support::config(80, 60, 100, "a_1");
  auto buyer_client = std::make_shared<ReplayChatClient>(std::vector<std::string>{
      "Thought: open at 40.\nTalk: 40?\nAction: [BUY] $40 (1x a_1)",
      "Thought: fine.\nTalk: 45 then.\nAction: [BUY] $45 (1x a_1)"});
  auto seller_client = std::make_shared<ReplayChatClient>(std::vector<std::string>{
      "Thought: my cost is 60 so refuse.\nTalk: too low\nAction: [SELL] $90 (1x a_1)",
      "Thought: quit.\nTalk: bye\nAction: [QUIT]"});
  LlmAgent buyer({"m"}, buyer_client);
  LlmAgent seller({"m"}, seller_client);
  const auto rec = run_session(cfg, buyer, seller);
  EXPECT_EQ(rec.status, SessionStatus(status::Quit{Role::Seller}));
  const auto& second = buyer_client->requests()[1].messages;
  ASSERT_EQ(second.size(), 4u);
  EXPECT_EQ(second[2].role, "assistant");
  EXPECT_NE(second[2].content.find("Thought: open at 40."), std::string::npos);
  EXPECT_EQ(second[3].role, "user");
  EXPECT_EQ(second[3].content, "Talk: too low\nAction: [SELL] $90 (1x a_1)");
  for (const auto& m : second) EXPECT_EQ(m.content.find("my cost is"), std::string::npos);
}

TEST(LlmAgent, DeterministicWithReplay) {
  const std::vector<std::string> script = {"Thought: a\nTalk: b\nAction: [BUY] $41 (1x a_1)",
                                           "Thought: a\nTalk: b\nAction: [QUIT]"};
  auto run_once = [&] {
    auto cfg = testing_support::config(80, 60, 100, "a_1");
    LlmAgent buyer({"m"}, std::make_shared<ReplayChatClient>(script));
    ScriptedSeller seller({}, briefing_for(cfg, Role::Seller));
    return run_session(cfg, buyer, seller);
  };
  const auto a = run_once();
  const auto b = run_once();
  ASSERT_EQ(a.history.size(), b.history.size());
  EXPECT_EQ(a.raw, b.raw);
  EXPECT_EQ(a.status, b.status);
}

TEST(ReplayFixture, ArrayAndPerSessionForms) {
  const auto flat = ReplayFixture::parse(R"(["x","y"])");
  EXPECT_EQ(flat.script_for("anything"), (std::vector<std::string>{"x", "y"}));
  const auto keyed = ReplayFixture::parse(R"({"default":["d"],"sessions":{"a_1":["s"]}})");
  EXPECT_EQ(keyed.script_for("a_1"), std::vector<std::string>{"s"});
  EXPECT_EQ(keyed.script_for("b_1"), std::vector<std::string>{"d"});
  EXPECT_THROW(ReplayFixture::parse(R"({"sessions":{}})").script_for("z"), std::runtime_error);
}

class HttpChat : public ::testing::Test {
 protected:
  void SetUp() override {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      const int n = calls_++;
      last_auth_ = req.get_header_value("Authorization");
      last_body_ = req.body;
      if (n < fail_first_) {
        res.status = fail_status_;
        res.set_content("busy", "text/plain");
        return;
      }
      res.set_content(chat_response_json("Talk: hi\nAction: [QUIT]"), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    thread_.join();
  }
  HttpChatConfig config() const {
    HttpChatConfig c;
    c.base_url = "http://127.0.0.1:" + std::to_string(port_) + "/v1/";
    c.api_key = "k-123";
    c.initial_backoff = std::chrono::milliseconds(1);
    c.max_attempts = 3;
    c.timeout = std::chrono::seconds(5);
    return c;
  }

  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> calls_{0};
  int fail_first_ = 0;
  int fail_status_ = 503;
  std::string last_auth_;
  std::string last_body_;
};

TEST_F(HttpChat, PostsRequestAndReadsContent) {
  HttpChatClient client(config());
  const std::string out = client.complete({"gpt-x", {{"user", "hello"}}, 0.0});
  EXPECT_EQ(out, "Talk: hi\nAction: [QUIT]");
  EXPECT_EQ(last_auth_, "Bearer k-123");
  const ChatRequest sent = chat_request_from_json(last_body_);
  EXPECT_EQ(sent.model, "gpt-x");
  EXPECT_EQ(sent.messages.at(0).content, "hello");
}

TEST_F(HttpChat, RetriesRetriableStatuses) {
  fail_first_ = 2;
  fail_status_ = 429;
  HttpChatClient client(config());
  EXPECT_EQ(client.complete({"m", {{"user", "x"}}, 0.0}), "Talk: hi\nAction: [QUIT]");
  EXPECT_EQ(calls_.load(), 3);
}

TEST_F(HttpChat, GivesUpAfterMaxAttempts) {
  fail_first_ = 10;
  HttpChatClient client(config());
  try {
    client.complete({"m", {{"user", "x"}}, 0.0});
    FAIL();
  } catch (const TransportError& e) {
    EXPECT_TRUE(e.retriable());
  }
  EXPECT_EQ(calls_.load(), 3);
}

TEST_F(HttpChat, ClientErrorIsNotRetried) {
  fail_first_ = 10;
  fail_status_ = 401;
  HttpChatClient client(config());
  EXPECT_THROW(client.complete({"m", {{"user", "x"}}, 0.0}), TransportError);
  EXPECT_EQ(calls_.load(), 1);
}

TEST(HttpChatClient, UnreachableEndpointIsTransportError) {
  HttpChatConfig c;
  c.base_url = "http://127.0.0.1:1/v1";
  c.max_attempts = 2;
  c.initial_backoff = std::chrono::milliseconds(1);
  c.timeout = std::chrono::seconds(1);
  HttpChatClient client(c);
  EXPECT_THROW(client.complete({"m", {{"user", "x"}}, 0.0}), TransportError);
}

TEST(RunSession, TransportFailureMarksInvalid) {
  auto cfg = testing_support::config(80, 60, 100, "a_1");
  LlmAgent buyer({"m"}, std::make_shared<ReplayChatClient>(std::vector<std::string>{}));
  ScriptedSeller seller({}, briefing_for(cfg, Role::Seller));
  const auto rec = run_session(cfg, buyer, seller);
  EXPECT_EQ(rec.status, SessionStatus(status::Invalid{"transport"}));
  EXPECT_FALSE(rec.valid());
}

TEST(RunSession, ImmediateQuitIsValidWithZeroScores) {
  auto cfg = testing_support::config(80, 60, 100, "a_1");
  CannedAgent buyer({"Thought: no.\nTalk: bye\nAction: [QUIT]"});
  ScriptedSeller seller({}, briefing_for(cfg, Role::Seller));
  const auto rec = run_session(cfg, buyer, seller);
  EXPECT_EQ(rec.status, SessionStatus(status::Quit{Role::Buyer}));
  EXPECT_TRUE(rec.valid());
  const auto sc = score_session(rec);
  EXPECT_EQ(sc.np.buyer, 0.0);
  EXPECT_EQ(sc.np.seller, 0.0);
}

TEST(RunSession, UnparseableThriceIsInvalid) {
  auto cfg = testing_support::config(80, 60, 100, "a_1");
  CannedAgent buyer({"gibberish"});
  ScriptedSeller seller({}, briefing_for(cfg, Role::Seller));
  const auto rec = run_session(cfg, buyer, seller);
  EXPECT_EQ(rec.status, SessionStatus(status::Invalid{"no_action"}));
  EXPECT_EQ(buyer.calls(), 3u);
  EXPECT_EQ(rec.failed_attempts.size(), 3u);
  EXPECT_TRUE(rec.history.empty());
}

TEST(AgentSpec, ParsesKindsAndParams) {
  const auto a = AgentSpec::parse("scripted-buyer:r0=0.4,r1=0.9");
  EXPECT_EQ(a.kind, AgentKind::ScriptedBuyer);
  EXPECT_EQ(a.params.at("r0"), "0.4");
  EXPECT_TRUE(a.can_play(Role::Buyer));
  EXPECT_FALSE(a.can_play(Role::Seller));
  EXPECT_EQ(AgentSpec::parse("og").kind, AgentKind::OgNarrator);
  EXPECT_EQ(AgentSpec::parse("og-narrator:narrator=template").kind, AgentKind::OgNarrator);
  EXPECT_EQ(AgentSpec::parse("llm:model=gpt-4,base-url=http://h/v1").params.at("base-url"), "http://h/v1");
  EXPECT_TRUE(AgentSpec::parse("human").can_play(Role::Seller));
  EXPECT_THROW(AgentSpec::parse("wizard"), AgentSpecError);
  EXPECT_THROW(AgentSpec::parse("scripted-buyer:bogus=1"), AgentSpecError);
  EXPECT_THROW(AgentSpec::parse("scripted-buyer:r0"), AgentSpecError);
  EXPECT_THROW(AgentFactory(AgentSpec::parse("scripted-buyer:r0=abc")), AgentSpecError);
  EXPECT_THROW(AgentFactory(AgentSpec::parse("scripted-buyer:r0=0.9,r1=0.5")), std::invalid_argument);
}

TEST(AgentFactory, CreatesAgentsAndChecksRoles) {
  auto cfg = testing_support::config(80, 60, 100, "a_1");
  const AgentFactory sellers(AgentSpec::parse("scripted-seller:m=0.1"));
  EXPECT_NE(sellers.create(briefing_for(cfg, Role::Seller), 0), nullptr);
  EXPECT_THROW(sellers.create(briefing_for(cfg, Role::Buyer), 0), std::invalid_argument);
  const AgentFactory greedy(AgentSpec::parse("scripted-seller:m=1.0"));
  EXPECT_THROW(greedy.create(briefing_for(cfg, Role::Seller), 0), std::invalid_argument);
}

TEST(AgentFactory, LlmFromReplayFixture) {
  testing_support::TempDir dir;
  testing_support::spit(dir / "f.json", R"j({"sessions":{"a_1":["Talk: x\nAction: [BUY] $41 (1x a_1)","Talk: y\nAction: [QUIT]"]}})j");
  const AgentFactory f(AgentSpec::parse("llm:replay=" + (dir / "f.json").string()));
  auto cfg = testing_support::config(80, 60, 100, "a_1");
  auto buyer = f.create(briefing_for(cfg, Role::Buyer), 1);
  ScriptedSeller seller({}, briefing_for(cfg, Role::Seller));
  const auto rec = run_session(cfg, *buyer, seller);
  EXPECT_EQ(rec.status, SessionStatus(status::Quit{Role::Buyer}));
  EXPECT_EQ(rec.first_buyer_bid(), usd(41));
}
