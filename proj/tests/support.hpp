#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <string>

#include <unistd.h>

#include "bargain/catalog.hpp"
#include "bargain/protocol.hpp"

namespace testing_support {

inline std::shared_ptr<const bargain::Product> product(double list, double cost,
                                                       std::string codename = "electronics_203",
                                                       std::string title = "micro SD card") {
  auto p = std::make_shared<bargain::Product>();
  p->title = std::move(title);
  p->description = "test item";
  p->category = "Electronics";
  p->highest_price = bargain::Money::from_double(list);
  p->lowest_price = bargain::Money::from_double(cost);
  p->current_price = p->highest_price;
  p->codename = std::move(codename);
  return p;
}

/// Session where B and C are set directly, bypassing the budget factor.
inline bargain::SessionConfig config(double budget, double cost, double list,
                                     std::string codename = "electronics_203", int max_turns = 10) {
  bargain::SessionConfig c;
  c.product = product(list, cost, codename);
  c.list_price = bargain::Money::from_double(list);
  c.cost = bargain::Money::from_double(cost);
  c.budget = bargain::Money::from_double(budget);
  c.max_turns = max_turns;
  c.scenario = c.budget > c.cost ? bargain::Scenario::MI : bargain::Scenario::CI;
  return c;
}

inline bargain::Money usd(double d) { return bargain::Money::from_double(d); }

/// Finished session with random B != C, an opening bid, and a random outcome.
/// Roughly one in ten is invalid. The history is not replayable; only metrics read it.
inline bargain::SessionRecord random_record(std::mt19937_64& rng, int index = 0) {
  using namespace bargain;
  const std::int64_t list = 100 + static_cast<std::int64_t>(rng() % 400'000);
  const std::int64_t cost = 1 + static_cast<std::int64_t>(rng() % list);
  std::int64_t budget = 1 + static_cast<std::int64_t>(rng() % (2 * list));
  if (budget == cost) budget = cost - 1 > 0 ? cost - 1 : cost + 1;
  SessionRecord r;
  r.session_id = "synthetic_" + std::to_string(index + 1);
  r.config.product = product(static_cast<double>(list) / 100, static_cast<double>(cost) / 100,
                             r.session_id);
  r.config.list_price = Money::from_cents(list);
  r.config.cost = Money::from_cents(cost);
  r.config.budget = Money::from_cents(budget);
  r.config.scenario = budget > cost ? Scenario::MI : Scenario::CI;
  r.buyer_spec = "buyer";
  r.seller_spec = "seller";
  const Money bid = Money::from_cents(1 + static_cast<std::int64_t>(rng() % budget));
  r.history.push_back(Turn{Role::Buyer, "", "", Action::buy({bid, 1, r.session_id})});
  switch (rng() % 10) {
    case 0: r.status = status::Invalid{"no_action"}; break;
    case 1: r.status = status::Quit{Role::Seller}; break;
    case 2: r.status = status::Exhausted{}; break;
    default: {
      const std::int64_t lo = std::min(budget, cost) / 2;
      const std::int64_t hi = std::max(budget, cost) * 3 / 2;
      r.status = status::Deal{Money::from_cents(1 + lo + static_cast<std::int64_t>(rng() % (hi - lo)))};
    }
  }
  return r;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("bargain-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary | std::ios::trunc) << text;
}

}  // namespace testing_support
