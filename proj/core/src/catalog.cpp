#include "bargain/catalog.hpp"

#include <array>
#include <cctype>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace bargain {

using nlohmann::json;

std::string_view to_string(Scenario s) { return s == Scenario::MI ? "MI" : "CI"; }

Scenario scenario_from_string(std::string_view s) {
  if (s == "MI") return Scenario::MI;
  if (s == "CI") return Scenario::CI;
  throw std::invalid_argument("unknown scenario: " + std::string(s));
}

std::string category_slug(std::string_view category) {
  std::string out;
  bool pending_hyphen = false;
  for (const char raw : category) {
    const auto c = static_cast<unsigned char>(raw);
    if (std::isspace(c) || raw == '&' || raw == ',' || raw == '-' || raw == '_') {
      pending_hyphen = !out.empty();
      continue;
    }
    if (pending_hyphen) out += '-';
    pending_hyphen = false;
    out += static_cast<char>(std::tolower(c));
  }
  return out.empty() ? "product" : out;
}

namespace {

[[noreturn]] void record_error(std::size_t index, const std::string& what) {
  throw CatalogError("catalog record " + std::to_string(index) + ": " + what);
}

Money read_price(const json& rec, std::size_t index, const char* field, bool required) {
  const auto it = rec.find(field);
  if (it == rec.end() || it->is_null()) {
    if (required) record_error(index, std::string("missing required field '") + field + "'");
    return Money{};
  }
  if (it->is_number()) {
    const double v = it->get<double>();
    if (v < 0) record_error(index, std::string("negative price in '") + field + "'");
    return Money::from_double(v);
  }
  if (it->is_string()) {
    std::string s = it->get<std::string>();
    std::erase_if(s, [](char c) { return c == '$' || std::isspace(static_cast<unsigned char>(c)); });
    if (const auto m = Money::parse(s)) return *m;
    // Fall back to plain decimal text with more than two decimals.
    try {
      std::size_t used = 0;
      std::erase(s, ',');
      const double v = std::stod(s, &used);
      if (used == s.size() && v >= 0) return Money::from_double(v);
    } catch (const std::exception&) {
    }
  }
  record_error(index, std::string("field '") + field + "' is not a price");
}

std::string read_text(const json& rec, std::size_t index, const char* field, bool required) {
  const auto it = rec.find(field);
  if (it == rec.end() || it->is_null()) {
    if (required) record_error(index, std::string("missing required field '") + field + "'");
    return {};
  }
  if (!it->is_string()) record_error(index, std::string("field '") + field + "' must be a string");
  return it->get<std::string>();
}

bool valid_codename(std::string_view name) {
  if (name.empty()) return false;
  for (const char c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
  }
  return true;
}

}  // namespace

Catalog parse_catalog(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw CatalogError(std::string("catalog is not valid JSON: ") + e.what());
  }
  if (doc.is_object() && doc.contains("products")) doc = doc.at("products");
  if (!doc.is_array()) throw CatalogError("catalog document must be an array of records");

  Catalog catalog;
  catalog.reserve(doc.size());
  std::set<std::string> taken;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& rec = doc[i];
    if (!rec.is_object()) record_error(i, "not an object");
    Product p;
    p.title = read_text(rec, i, "title", true);
    p.description = read_text(rec, i, "description", false);
    p.category = read_text(rec, i, "category", true);
    p.highest_price = read_price(rec, i, "highest_price", true);
    p.lowest_price = read_price(rec, i, "lowest_price", true);
    p.current_price = read_price(rec, i, "current_price", false);
    p.image_url = read_text(rec, i, "image_url", false);
    if (const auto it = rec.find("features"); it != rec.end() && !it->is_null()) {
      if (!it->is_array()) record_error(i, "field 'features' must be an array");
      for (const auto& f : *it) {
        if (!f.is_string()) record_error(i, "field 'features' must hold strings");
        p.features.push_back(f.get<std::string>());
      }
    }
    if (p.lowest_price > p.highest_price) {
      record_error(i, "lowest_price " + p.lowest_price.to_fixed() + " exceeds highest_price " +
                          p.highest_price.to_fixed());
    }
    p.codename = read_text(rec, i, "codename", false);
    if (!p.codename.empty()) {
      if (!valid_codename(p.codename)) record_error(i, "codename '" + p.codename + "' is malformed");
      if (!taken.insert(p.codename).second) record_error(i, "duplicate codename '" + p.codename + "'");
    }
    catalog.push_back(std::move(p));
  }

  // Auto-assigned indices skip names reserved by explicit overrides.
  std::map<std::string, int> next_index;
  for (auto& p : catalog) {
    if (!p.codename.empty()) continue;
    const std::string slug = category_slug(p.category);
    int& idx = next_index[slug];
    std::string name;
    do {
      name = slug + "_" + std::to_string(++idx);
    } while (taken.count(name) != 0);
    taken.insert(name);
    p.codename = std::move(name);
  }
  return catalog;
}

Catalog load_catalog(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CatalogError("cannot open catalog file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_catalog(buf.str());
}

std::string catalog_to_json(const Catalog& catalog) {
  json doc = json::array();
  for (const auto& p : catalog) {
    doc.push_back({{"title", p.title},
                   {"description", p.description},
                   {"features", p.features},
                   {"category", p.category},
                   {"highest_price", p.highest_price.dollars()},
                   {"lowest_price", p.lowest_price.dollars()},
                   {"current_price", p.current_price.dollars()},
                   {"image_url", p.image_url},
                   {"codename", p.codename}});
  }
  return doc.dump(2);
}

void save_catalog(const Catalog& catalog, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CatalogError("cannot write catalog file " + path.string());
  out << catalog_to_json(catalog) << '\n';
}

Scenario classify_interest(Money budget, Money cost) {
  return budget > cost ? Scenario::MI : Scenario::CI;
}

SessionConfig configure_session(std::shared_ptr<const Product> product, double budget_factor,
                                int max_turns, Money sigma) {
  if (!product) throw std::invalid_argument("configure_session: null product");
  if (!(budget_factor > 0.0)) throw std::invalid_argument("budget factor must be positive");
  if (max_turns < 1) throw std::invalid_argument("max turns must be at least 1");
  if (sigma <= Money{}) throw std::invalid_argument("sigma must be positive");

  SessionConfig cfg;
  cfg.list_price = product->highest_price;
  cfg.cost = product->lowest_price;
  cfg.budget = cfg.list_price.scaled(budget_factor);
  if (cfg.budget == cfg.cost) cfg.budget = cfg.cost - sigma;
  cfg.budget_factor = budget_factor;
  cfg.max_turns = max_turns;
  cfg.sigma = sigma;
  cfg.scenario = classify_interest(cfg.budget, cfg.cost);
  cfg.product = std::move(product);
  return cfg;
}

Catalog synth_catalog(std::uint64_t seed, std::size_t n) {
  static constexpr std::array<const char*, 8> kCategories = {
      "Electronics",       "Beauty",         "Toys & Games",   "Home & Kitchen",
      "Sports & Outdoors", "Office Products", "Tools & Home Improvement", "Video Games"};
  static constexpr std::array<const char*, 6> kNouns = {"Headphones", "Charger", "Blender",
                                                        "Backpack",   "Monitor", "Drone"};

  // Raw engine output only: distributions are not portable across standard libraries.
  std::mt19937_64 rng(seed);
  auto below = [&rng](std::uint64_t bound) { return rng() % bound; };

  Catalog catalog;
  catalog.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Product p;
    p.category = kCategories[below(kCategories.size())];
    const char* noun = kNouns[below(kNouns.size())];
    p.title = std::string("Synthetic ") + noun + " #" + std::to_string(i + 1);
    p.description = std::string("A generated ") + noun + " used for harness testing.";
    p.features = {"generated", p.category};
    p.highest_price = Money::from_cents(100 + static_cast<std::int64_t>(below(450'000 - 100 + 1)));
    // Cost ratio in [0.20, 0.86]: lands a few percent of sessions above f = 0.8.
    const auto permille = 200 + static_cast<std::int64_t>(below(661));
    auto low = Money::from_cents((p.highest_price.cents() * permille + 500) / 1000);
    if (low < Money::from_cents(100)) low = Money::from_cents(100);
    p.lowest_price = low;
    p.current_price = Money::from_cents(
        low.cents() + static_cast<std::int64_t>(below(
                          static_cast<std::uint64_t>(p.highest_price.cents() - low.cents()) + 1)));
    catalog.push_back(std::move(p));
  }

  std::map<std::string, int> next_index;
  for (auto& p : catalog) {
    const std::string slug = category_slug(p.category);
    p.codename = slug + "_" + std::to_string(++next_index[slug]);
  }
  return catalog;
}

}  // namespace bargain
