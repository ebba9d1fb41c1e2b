#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bargain/money.hpp"

namespace bargain {

struct Product {
  std::string title;
  std::string description;
  std::vector<std::string> features;
  std::string category;
  Money highest_price;
  Money lowest_price;
  Money current_price;
  std::string image_url;
  std::string codename;
};

using Catalog = std::vector<Product>;

/// Mutual Interest (B > C) or Conflicting Interest (B <= C).
enum class Scenario { MI, CI };

std::string_view to_string(Scenario s);
Scenario scenario_from_string(std::string_view s);

inline constexpr double kDefaultBudgetFactor = 0.8;
inline constexpr int kDefaultMaxTurns = 10;
inline constexpr Money kDefaultSigma = Money::from_cents(1);

/// Frozen per-session game parameters. Quantity is always 1.
struct SessionConfig {
  std::shared_ptr<const Product> product;
  Money list_price;
  Money cost;
  Money budget;
  double budget_factor = kDefaultBudgetFactor;
  int max_turns = kDefaultMaxTurns;
  Money sigma = kDefaultSigma;
  Scenario scenario = Scenario::MI;
  int quantity = 1;

  const std::string& codename() const { return product->codename; }
};

class CatalogError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lowercased category with runs of spaces, '&' and ',' collapsed to one hyphen.
/// "Toys & Games" -> "toys-games".
std::string category_slug(std::string_view category);

/// Reads a JSON array of product records. Codenames are assigned per category
/// in order of appearance unless a record carries its own `codename`.
Catalog load_catalog(const std::filesystem::path& path);
Catalog parse_catalog(std::string_view json_text);

std::string catalog_to_json(const Catalog& catalog);
void save_catalog(const Catalog& catalog, const std::filesystem::path& path);

Scenario classify_interest(Money budget, Money cost);

/// L = highest price, C = lowest price, B = round(f * L); B == C is nudged to C - sigma.
/// Throws std::invalid_argument on f <= 0, max_turns < 1 or sigma <= 0.
SessionConfig configure_session(std::shared_ptr<const Product> product,
                                double budget_factor = kDefaultBudgetFactor,
                                int max_turns = kDefaultMaxTurns,
                                Money sigma = kDefaultSigma);

/// Deterministic pseudo-catalog with prices in [1, 4500] USD.
Catalog synth_catalog(std::uint64_t seed, std::size_t n);

}  // namespace bargain
