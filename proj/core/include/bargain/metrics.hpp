#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bargain/protocol.hpp"

namespace bargain {

struct Profits {
  Money buyer;   ///< B - D
  Money seller;  ///< D - C
};

Profits profits(Money budget, Money cost, Money deal_price);

struct Utilities {
  double buyer = 0.0;
  double seller = 0.0;
};

/// u_b = (B-D)/(B-C), u_s = (D-C)/(B-C). Not used in aggregates: in conflicting-interest
/// sessions a loss can show up as positive utility. Throws std::domain_error when B == C.
Utilities rubinstein_utilities(Money budget, Money cost, Money deal_price);

struct NormalizedProfits {
  double buyer = 0.0;
  double seller = 0.0;
};

/// Zero without a deal; otherwise profits divided by |B - C|.
NormalizedProfits normalized_profits(Money budget, Money cost, std::optional<Money> deal_price);
NormalizedProfits normalized_profits(const SessionConfig& config, std::optional<Money> deal_price);

/// First BUY price over B, if the buyer ever bid.
std::optional<double> first_bid_ratio(const SessionRecord& record);

struct SessionScore {
  Scenario scenario = Scenario::MI;
  bool valid = false;
  bool dealt = false;
  std::optional<Money> deal_price;
  std::optional<Profits> profit;
  NormalizedProfits np;
  std::optional<double> fbr;
};

SessionScore score_session(const SessionRecord& record);

/// Counts and sums over the valid sessions of one scope.
struct ScopeStats {
  int count = 0;
  int deals = 0;
  double snp_buyer = 0.0;
  double snp_seller = 0.0;

  std::optional<double> deal_rate() const;
};

enum class Scope { All, MI, CI };

struct BenchmarkSummary {
  std::string buyer_label;
  std::string seller_label;
  ScopeStats all;
  ScopeStats mi;
  ScopeStats ci;
  int fbr_count = 0;
  double fbr_sum = 0.0;

  const ScopeStats& scope(Scope s) const;
  std::optional<double> avg_fbr() const;
  /// Fractions, undefined when SNP_b + SNP_s <= 0.
  std::optional<double> share_buyer() const;
  std::optional<double> share_seller() const;

  /// Folds one session in. Invalid sessions are ignored.
  void add(const SessionScore& score);
  void merge(const BenchmarkSummary& other);
};

BenchmarkSummary aggregate(std::span<const SessionScore> scores);
BenchmarkSummary aggregate(const std::vector<SessionRecord>& records);

/// (SNP_b + SNP_s) - (#MI deals - #CI deals) over valid sessions; zero up to rounding.
double identity_residual(std::span<const SessionScore> scores);
double identity_residual(const std::vector<SessionRecord>& records);

}  // namespace bargain
