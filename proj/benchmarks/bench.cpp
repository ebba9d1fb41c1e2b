#include <benchmark/benchmark.h>

#include <random>

#include "bargain/metrics.hpp"
#include "bargain/runner.hpp"

using namespace bargain;

static void BM_ParseAction(benchmark::State& state) {
  const std::string text = "[SELL] $1,234.50 (1x toys-games_22)";
  for (auto _ : state) benchmark::DoNotOptimize(parse_action(text));
}
BENCHMARK(BM_ParseAction);

static void BM_ParseTurn(benchmark::State& state) {
  const std::string raw =
      "Thought: The ask is still above my target, so I will raise a little.\n"
      "Talk: Could you do $32 instead?\nAction: [BUY] $32 (1x electronics_203)";
  for (auto _ : state) benchmark::DoNotOptimize(parse_turn(raw, Role::Buyer));
}
BENCHMARK(BM_ParseTurn);

// Full scripted session, t_m rounds at most.
static void BM_ScriptedSession(benchmark::State& state) {
  auto product = std::make_shared<Product>();
  product->title = "Portable speaker";
  product->category = "Electronics";
  product->codename = "electronics_1";
  product->highest_price = Money::from_cents(39999);
  product->lowest_price = Money::from_cents(32900);
  const SessionConfig cfg = configure_session(product, 0.9, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    ScriptedBuyer buyer;
    ScriptedSeller seller({}, briefing_for(cfg, Role::Seller));
    benchmark::DoNotOptimize(run_session(cfg, buyer, seller));
  }
}
BENCHMARK(BM_ScriptedSession)->Arg(10)->Arg(40);

static void BM_Aggregate(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::vector<SessionScore> scores(static_cast<std::size_t>(state.range(0)));
  for (auto& s : scores) {
    s.valid = rng() % 10 != 0;
    s.dealt = rng() % 2 == 0;
    s.scenario = rng() % 20 == 0 ? Scenario::CI : Scenario::MI;
    s.np = {0.3, s.scenario == Scenario::MI ? 0.7 : -1.3};
    s.fbr = 0.5;
  }
  for (auto _ : state) benchmark::DoNotOptimize(aggregate(scores));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Aggregate)->Arg(930)->Arg(100000);
BENCHMARK_MAIN();
