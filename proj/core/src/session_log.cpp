#include "bargain/session_log.hpp"

#include <fstream>

#include <json.hpp>

namespace bargain {

using nlohmann::json;

namespace {

json money_or_null(const std::optional<Money>& m) {
  return m ? json(m->dollars()) : json(nullptr);
}

Money money_at(const json& doc, const char* key) {
  const auto& v = doc.at(key);
  if (!v.is_number()) throw LogError(std::string("field '") + key + "' must be a number");
  return Money::from_double(v.get<double>());
}

}  // namespace

std::string record_to_json(const SessionRecord& r) {
  const SessionConfig& cfg = r.config;
  json history = json::array();
  for (std::size_t i = 0; i < r.history.size(); ++i) {
    const Turn& t = r.history[i];
    history.push_back({{"role", to_string(t.role)},
                       {"thought", t.thought},
                       {"talk", t.talk},
                       {"action", render_action(t.action)},
                       {"raw", i < r.raw.size() ? r.raw[i] : std::string()}});
  }
  json failed = json::array();
  for (const auto& f : r.failed_attempts) {
    failed.push_back({{"role", to_string(f.role)}, {"raw", f.raw}, {"error", f.error}});
  }

  json doc;
  doc["session_id"] = r.session_id;
  doc["codename"] = cfg.codename();
  doc["title"] = cfg.product->title;
  doc["B"] = cfg.budget.dollars();
  doc["C"] = cfg.cost.dollars();
  doc["L"] = cfg.list_price.dollars();
  doc["f"] = cfg.budget_factor;
  doc["t_m"] = cfg.max_turns;
  doc["sigma"] = cfg.sigma.dollars();
  doc["scenario"] = to_string(cfg.scenario);
  doc["buyer"] = r.buyer_spec;
  doc["seller"] = r.seller_spec;
  doc["status"] = status_name(r.status);
  if (const auto* q = std::get_if<status::Quit>(&r.status)) doc["quit_by"] = to_string(q->by);
  if (const auto* inv = std::get_if<status::Invalid>(&r.status)) doc["reason"] = inv->reason;
  doc["deal_price"] = money_or_null(r.deal_price());
  doc["valid"] = r.valid();
  doc["first_buyer_bid"] = money_or_null(r.first_buyer_bid());
  doc["history"] = std::move(history);
  doc["failed_attempts"] = std::move(failed);
  return doc.dump();
}

SessionRecord record_from_json(std::string_view line) {
  try {
    const json doc = json::parse(line);
    auto product = std::make_shared<Product>();
    product->codename = doc.at("codename").get<std::string>();
    product->title = doc.value("title", "");
    product->highest_price = money_at(doc, "L");
    product->lowest_price = money_at(doc, "C");

    SessionConfig cfg;
    cfg.list_price = product->highest_price;
    cfg.cost = product->lowest_price;
    cfg.budget = money_at(doc, "B");
    cfg.budget_factor = doc.at("f").get<double>();
    cfg.max_turns = doc.at("t_m").get<int>();
    if (doc.contains("sigma")) cfg.sigma = money_at(doc, "sigma");
    cfg.scenario = scenario_from_string(doc.at("scenario").get<std::string>());
    cfg.product = std::move(product);

    SessionRecord r;
    r.session_id = doc.at("session_id").get<std::string>();
    r.config = std::move(cfg);
    r.buyer_spec = doc.value("buyer", "");
    r.seller_spec = doc.value("seller", "");
    for (const auto& h : doc.at("history")) {
      Turn t;
      t.role = role_from_string(h.at("role").get<std::string>());
      t.thought = h.value("thought", "");
      t.talk = h.value("talk", "");
      auto parsed = parse_action(h.at("action").get<std::string>());
      if (auto* e = std::get_if<ParseError>(&parsed)) {
        throw LogError("history action does not parse: " + e->detail);
      }
      t.action = std::get<Action>(std::move(parsed));
      r.history.push_back(std::move(t));
      r.raw.push_back(h.value("raw", ""));
    }
    if (const auto it = doc.find("failed_attempts"); it != doc.end()) {
      for (const auto& f : *it) {
        r.failed_attempts.push_back({role_from_string(f.at("role").get<std::string>()),
                                     f.value("raw", ""), f.value("error", "")});
      }
    }

    const std::string st = doc.at("status").get<std::string>();
    if (st == "deal") {
      r.status = status::Deal{money_at(doc, "deal_price")};
    } else if (st == "quit") {
      r.status = status::Quit{role_from_string(doc.at("quit_by").get<std::string>())};
    } else if (st == "exhausted") {
      r.status = status::Exhausted{};
    } else if (st == "invalid") {
      r.status = status::Invalid{doc.value("reason", "")};
    } else {
      throw LogError("unexpected status '" + st + "'");
    }
    if (doc.at("valid").get<bool>() != r.valid()) throw LogError("valid flag disagrees with status");
    return r;
  } catch (const LogError&) {
    throw;
  } catch (const std::exception& e) {
    throw LogError(std::string("malformed session record: ") + e.what());
  }
}

LogContents read_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LogError("cannot open session log " + path.string());
  LogContents out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.records.push_back(record_from_json(line));
    } catch (const LogError&) {
      ++out.discarded_lines;
    }
  }
  return out;
}

std::vector<SessionRecord> load_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LogError("cannot open session log " + path.string());
  std::vector<SessionRecord> records;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(record_from_json(line));
    } catch (const LogError& e) {
      throw LogError(path.string() + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  return records;
}

}  // namespace bargain
