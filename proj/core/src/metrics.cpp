#include "bargain/metrics.hpp"

#include <cstdlib>

namespace bargain {

Profits profits(Money budget, Money cost, Money deal_price) {
  return {budget - deal_price, deal_price - cost};
}

Utilities rubinstein_utilities(Money budget, Money cost, Money deal_price) {
  if (budget == cost) throw std::domain_error("Rubinstein utilities undefined for B == C");
  const auto span = static_cast<double>((budget - cost).cents());
  return {static_cast<double>((budget - deal_price).cents()) / span,
          static_cast<double>((deal_price - cost).cents()) / span};
}

NormalizedProfits normalized_profits(Money budget, Money cost, std::optional<Money> deal_price) {
  if (!deal_price) return {};
  const auto gap = static_cast<double>(std::llabs((budget - cost).cents()));
  if (gap == 0.0) throw std::domain_error("normalized profits undefined for B == C");
  return {static_cast<double>((budget - *deal_price).cents()) / gap,
          static_cast<double>((*deal_price - cost).cents()) / gap};
}

NormalizedProfits normalized_profits(const SessionConfig& config, std::optional<Money> deal_price) {
  return normalized_profits(config.budget, config.cost, deal_price);
}

std::optional<double> first_bid_ratio(const SessionRecord& record) {
  const auto bid = record.first_buyer_bid();
  if (!bid || record.config.budget <= Money{}) return std::nullopt;
  return static_cast<double>(bid->cents()) / static_cast<double>(record.config.budget.cents());
}

SessionScore score_session(const SessionRecord& record) {
  SessionScore s;
  s.scenario = record.config.scenario;
  s.valid = record.valid();
  if (!s.valid) return s;
  s.deal_price = record.deal_price();
  s.dealt = s.deal_price.has_value();
  if (s.dealt) s.profit = profits(record.config.budget, record.config.cost, *s.deal_price);
  s.np = normalized_profits(record.config, s.deal_price);
  s.fbr = first_bid_ratio(record);
  return s;
}

std::optional<double> ScopeStats::deal_rate() const {
  if (count == 0) return std::nullopt;
  return static_cast<double>(deals) / count;
}

const ScopeStats& BenchmarkSummary::scope(Scope s) const {
  switch (s) {
    case Scope::MI: return mi;
    case Scope::CI: return ci;
    case Scope::All: break;
  }
  return all;
}

std::optional<double> BenchmarkSummary::avg_fbr() const {
  if (fbr_count == 0) return std::nullopt;
  return fbr_sum / fbr_count;
}

std::optional<double> BenchmarkSummary::share_buyer() const {
  const double total = all.snp_buyer + all.snp_seller;
  if (!(total > 0.0)) return std::nullopt;
  return all.snp_buyer / total;
}

std::optional<double> BenchmarkSummary::share_seller() const {
  const double total = all.snp_buyer + all.snp_seller;
  if (!(total > 0.0)) return std::nullopt;
  return all.snp_seller / total;
}

namespace {

void add_to(ScopeStats& stats, const SessionScore& score) {
  ++stats.count;
  if (score.dealt) ++stats.deals;
  stats.snp_buyer += score.np.buyer;
  stats.snp_seller += score.np.seller;
}

void merge_into(ScopeStats& into, const ScopeStats& from) {
  into.count += from.count;
  into.deals += from.deals;
  into.snp_buyer += from.snp_buyer;
  into.snp_seller += from.snp_seller;
}

}  // namespace

void BenchmarkSummary::add(const SessionScore& score) {
  if (!score.valid) return;
  add_to(all, score);
  add_to(score.scenario == Scenario::MI ? mi : ci, score);
  if (score.fbr) {
    ++fbr_count;
    fbr_sum += *score.fbr;
  }
}

void BenchmarkSummary::merge(const BenchmarkSummary& other) {
  merge_into(all, other.all);
  merge_into(mi, other.mi);
  merge_into(ci, other.ci);
  fbr_count += other.fbr_count;
  fbr_sum += other.fbr_sum;
}

BenchmarkSummary aggregate(std::span<const SessionScore> scores) {
  BenchmarkSummary summary;
  for (const auto& s : scores) summary.add(s);
  return summary;
}

BenchmarkSummary aggregate(const std::vector<SessionRecord>& records) {
  BenchmarkSummary summary;
  for (const auto& r : records) summary.add(score_session(r));
  if (!records.empty()) {
    summary.buyer_label = records.front().buyer_spec;
    summary.seller_label = records.front().seller_spec;
  }
  return summary;
}

double identity_residual(std::span<const SessionScore> scores) {
  const BenchmarkSummary summary = aggregate(scores);
  return (summary.all.snp_buyer + summary.all.snp_seller) -
         static_cast<double>(summary.mi.deals - summary.ci.deals);
}

double identity_residual(const std::vector<SessionRecord>& records) {
  std::vector<SessionScore> scores;
  scores.reserve(records.size());
  for (const auto& r : records) scores.push_back(score_session(r));
  return identity_residual(scores);
}

}  // namespace bargain
