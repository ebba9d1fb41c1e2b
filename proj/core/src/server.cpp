#include "bargain/server.hpp"

#include <map>
#include <mutex>
#include <random>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "bargain/agent_spec.hpp"
#include "bargain/metrics.hpp"

namespace bargain {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

struct HttpError {
  int code;
  std::string error;
  std::string detail;
};

struct LiveSession {
  std::string id;
  SessionState state;
  Role human = Role::Buyer;
  std::string machine_spec;
  std::unique_ptr<Agent> machine;
  std::vector<FailedAttempt> machine_failures;
  Clock::time_point created;
  Clock::time_point touched;
  std::mutex mu;

  explicit LiveSession(SessionConfig cfg) : state(std::move(cfg)) {}
};

json status_json(const SessionStatus& st) {
  json j = {{"status", status_name(st)}};
  if (const auto* d = std::get_if<status::Deal>(&st)) j["deal_price"] = d->price.dollars();
  if (const auto* q = std::get_if<status::Quit>(&st)) j["quit_by"] = to_string(q->by);
  if (const auto* inv = std::get_if<status::Invalid>(&st)) j["reason"] = inv->reason;
  return j;
}

// The human's view: public product data, their own value, talk and actions only.
json observation_json(const LiveSession& s) {
  const Observation obs = observe(s.state, s.human);
  const Briefing& b = obs.briefing;
  json history = json::array();
  for (const auto& m : obs.history) {
    history.push_back({{"role", to_string(m.role)}, {"talk", m.talk}, {"action", render_action(m.action)}});
  }
  json j = {{"role", to_string(b.role)},
            {"codename", b.codename},
            {"title", b.title},
            {"description", b.description},
            {"L", b.list_price.dollars()},
            {"t_m", b.max_turns},
            {"turns_remaining", obs.turns_remaining},
            {"history", std::move(history)},
            {"your_turn", is_open(s.state.status) && s.state.next_mover == s.human}};
  j[s.human == Role::Buyer ? "B" : "C"] = b.private_value.dollars();
  if (const auto offer = obs.latest_offer(counterpart(s.human))) {
    j["standing_offer"] = render_action(s.human == Role::Buyer ? Action::sell(*offer) : Action::buy(*offer));
  }
  return j;
}

SessionRecord record_of(const LiveSession& s) {
  SessionRecord r;
  r.session_id = s.id;
  r.config = s.state.config;
  r.history = s.state.history;
  r.status = s.state.status;
  return r;
}

// Own-side projection of the session score.
json score_json(const LiveSession& s) {
  const SessionScore sc = score_session(record_of(s));
  const bool buyer = s.human == Role::Buyer;
  json j = {{"role", to_string(s.human)},
            {"valid", sc.valid},
            {"dealt", sc.dealt},
            {"scenario", to_string(sc.scenario)},
            {"np", buyer ? sc.np.buyer : sc.np.seller}};
  j["deal_price"] = sc.deal_price ? json(sc.deal_price->dollars()) : json(nullptr);
  j["profit"] = sc.profit ? json((buyer ? sc.profit->buyer : sc.profit->seller).dollars()) : json(nullptr);
  if (buyer) j["fbr"] = sc.fbr ? json(*sc.fbr) : json(nullptr);
  return j;
}

json session_json(const LiveSession& s) {
  json j = {{"session_id", s.id}, {"observation", observation_json(s)}};
  j.update(status_json(s.state.status));
  if (!is_open(s.state.status)) j["score"] = score_json(s);
  return j;
}

void machine_moves(LiveSession& s) {
  while (is_open(s.state.status) && s.state.next_mover != s.human) {
    HalfMove hm = request_half_move(*s.machine, s.state);
    if (auto* ok = std::get_if<AcceptedMove>(&hm)) {
      s.machine_failures.insert(s.machine_failures.end(), ok->failed.begin(), ok->failed.end());
      s.state = advance(std::move(s.state), std::move(ok->turn));
    } else {
      auto& refused = std::get<RefusedMove>(hm);
      s.machine_failures.insert(s.machine_failures.end(), refused.failed.begin(), refused.failed.end());
      s.state.status = status::Invalid{refused.reason};
    }
  }
}

json parse_body(const httplib::Request& req) {
  try {
    json body = json::parse(req.body.empty() ? std::string("{}") : req.body);
    if (!body.is_object()) throw HttpError{400, "bad_request", "body must be a JSON object"};
    return body;
  } catch (const json::exception& e) {
    throw HttpError{400, "bad_request", e.what()};
  }
}

std::string string_field(const json& body, const char* key, bool required) {
  const auto it = body.find(key);
  if (it == body.end() || it->is_null()) {
    if (required) throw HttpError{400, "bad_request", std::string("missing field '") + key + "'"};
    return {};
  }
  if (!it->is_string()) throw HttpError{400, "bad_request", std::string("field '") + key + "' must be a string"};
  return it->get<std::string>();
}

}  // namespace

struct Server::Impl {
  ServerConfig cfg;
  std::vector<std::shared_ptr<const Product>> products;
  std::map<std::string, std::size_t> by_codename;

  mutable std::mutex mu;  // guards sessions, factories, rng
  std::map<std::string, std::shared_ptr<LiveSession>> sessions;
  std::map<std::string, std::shared_ptr<AgentFactory>> factories;
  std::mt19937_64 rng;

  httplib::Server http;
  std::thread worker;

  explicit Impl(ServerConfig c) : cfg(std::move(c)), rng(cfg.seed) {
    for (std::size_t i = 0; i < cfg.catalog.size(); ++i) {
      products.push_back(std::make_shared<const Product>(cfg.catalog[i]));
      by_codename.emplace(cfg.catalog[i].codename, i);
    }
    routes();
  }

  void expire_idle() {
    const auto now = Clock::now();
    for (auto it = sessions.begin(); it != sessions.end();) {
      if (now - it->second->touched > cfg.idle_timeout) {
        it = sessions.erase(it);
      } else {
        ++it;
      }
    }
  }

  std::shared_ptr<AgentFactory> factory(const std::string& spec) {
    if (const auto it = factories.find(spec); it != factories.end()) return it->second;
    auto f = std::make_shared<AgentFactory>(AgentSpec::parse(spec));
    factories.emplace(spec, f);
    return f;
  }

  std::string new_id() {
    static constexpr char kHex[] = "0123456789abcdef";
    std::string id;
    for (;;) {
      id.clear();
      std::uint64_t v = rng();
      for (int i = 0; i < 16; ++i, v >>= 4) id.push_back(kHex[v & 15]);
      if (sessions.count(id) == 0) return id;
    }
  }

  std::shared_ptr<LiveSession> find(const std::string& id) {
    std::lock_guard lock(mu);
    expire_idle();
    const auto it = sessions.find(id);
    if (it == sessions.end()) throw HttpError{404, "unknown_session", "no live session '" + id + "'"};
    return it->second;
  }

  json create(const json& body) {
    const std::string codename = string_field(body, "codename", false);
    const std::string role_text = string_field(body, "human_role", true);
    Role human;
    try {
      human = role_from_string(role_text);
    } catch (const std::exception&) {
      throw HttpError{400, "bad_request", "human_role must be 'buyer' or 'seller'"};
    }
    std::string spec = string_field(body, "agent", false);
    if (spec.empty()) spec = human == Role::Buyer ? cfg.machine_seller : cfg.machine_buyer;

    std::shared_ptr<AgentFactory> fac;
    std::shared_ptr<const Product> product;
    std::uint64_t seed = 0;
    {
      std::lock_guard lock(mu);
      expire_idle();
      if (products.empty()) throw HttpError{404, "unknown_codename", "the catalog is empty"};
      if (codename.empty() || codename == "random") {
        product = products[std::uniform_int_distribution<std::size_t>(0, products.size() - 1)(rng)];
      } else {
        const auto it = by_codename.find(codename);
        if (it == by_codename.end()) throw HttpError{404, "unknown_codename", "no product '" + codename + "'"};
        product = products[it->second];
      }
      try {
        fac = factory(spec);
      } catch (const std::exception& e) {
        throw HttpError{400, "bad_agent", e.what()};
      }
      seed = rng();
    }
    const Role machine_role = counterpart(human);
    if (fac->spec().kind == AgentKind::Human || !fac->spec().can_play(machine_role)) {
      throw HttpError{400, "bad_agent", "'" + spec + "' cannot play the " + std::string(to_string(machine_role))};
    }

    SessionConfig config = configure_session(product, cfg.budget_factor, cfg.max_turns, cfg.sigma);
    auto s = std::make_shared<LiveSession>(config);
    s->human = human;
    s->machine_spec = spec;
    try {
      s->machine = fac->create(briefing_for(config, machine_role), seed);
    } catch (const std::exception& e) {
      throw HttpError{400, "bad_agent", e.what()};
    }
    s->created = s->touched = Clock::now();
    {
      std::lock_guard lock(mu);
      s->id = new_id();
      sessions.emplace(s->id, s);
    }
    std::lock_guard lock(s->mu);
    machine_moves(*s);
    return session_json(*s);
  }

  json turn(const std::string& id, const json& body) {
    auto s = find(id);
    std::lock_guard lock(s->mu);
    s->touched = Clock::now();
    if (!is_open(s->state.status)) throw HttpError{409, "session_closed", "the session has ended"};
    if (s->state.next_mover != s->human) throw HttpError{409, "not_your_turn", "waiting for the agent"};

    Turn t;
    t.role = s->human;
    t.talk = string_field(body, "talk", false);
    auto parsed = parse_action(string_field(body, "action", true));
    if (const auto* e = std::get_if<ParseError>(&parsed)) {
      throw HttpError{422, std::string(to_string(e->kind)), e->detail};
    }
    t.action = std::get<Action>(std::move(parsed));
    if (const auto v = check_legality(s->state, t)) {
      const int code = v->kind == ViolationKind::OutOfTurn || v->kind == ViolationKind::SessionClosed ? 409 : 422;
      throw HttpError{code, std::string(to_string(v->kind)), v->detail};
    }
    s->state = advance(std::move(s->state), std::move(t));
    machine_moves(*s);
    return session_json(*s);
  }

  json get(const std::string& id) {
    auto s = find(id);
    std::lock_guard lock(s->mu);
    s->touched = Clock::now();
    return session_json(*s);
  }

  json score(const std::string& id) {
    auto s = find(id);
    std::lock_guard lock(s->mu);
    s->touched = Clock::now();
    if (is_open(s->state.status)) throw HttpError{409, "session_open", "the session has not ended"};
    json j = score_json(*s);
    j["session_id"] = s->id;
    return j;
  }

  template <class F>
  httplib::Server::Handler wrap(F f, int ok_code = 200) {
    return [f, ok_code](const httplib::Request& req, httplib::Response& res) {
      try {
        res.status = ok_code;
        res.set_content(f(req).dump(), "application/json");
      } catch (const HttpError& e) {
        res.status = e.code;
        res.set_content(json{{"error", e.error}, {"detail", e.detail}}.dump(), "application/json");
      } catch (const std::exception& e) {
        res.status = 500;
        res.set_content(json{{"error", "internal"}, {"detail", e.what()}}.dump(), "application/json");
      }
    };
  }

  void routes() {
    http.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Headers", "Content-Type"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
    http.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    http.Post("/sessions", wrap([this](const httplib::Request& r) { return create(parse_body(r)); }, 201));
    http.Get(R"(/sessions/([^/]+))", wrap([this](const httplib::Request& r) { return get(r.matches[1]); }));
    http.Post(R"(/sessions/([^/]+)/turn)",
              wrap([this](const httplib::Request& r) { return turn(r.matches[1], parse_body(r)); }));
    http.Get(R"(/sessions/([^/]+)/score)", wrap([this](const httplib::Request& r) { return score(r.matches[1]); }));
  }
};

Server::Server(ServerConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

Server::~Server() { stop(); }

int Server::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->http.bind_to_any_port(host);
  } else if (!impl_->http.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  impl_->worker = std::thread([this] { impl_->http.listen_after_bind(); });
  impl_->http.wait_until_ready();
  return bound;
}

void Server::run(const std::string& host, int port) {
  if (!impl_->http.listen(host, port)) {
    throw std::runtime_error("cannot serve on " + host + ":" + std::to_string(port));
  }
}

void Server::stop() {
  if (!impl_) return;
  impl_->http.stop();
  if (impl_->worker.joinable()) impl_->worker.join();
}

std::size_t Server::live_sessions() const {
  std::lock_guard lock(impl_->mu);
  return impl_->sessions.size();
}

std::pair<std::string, int> parse_bind_address(const std::string& bind) {
  const auto colon = bind.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == bind.size()) {
    throw std::invalid_argument("bind address must look like host:port, got '" + bind + "'");
  }
  int port = 0;
  try {
    std::size_t used = 0;
    port = std::stoi(bind.substr(colon + 1), &used);
    if (used != bind.size() - colon - 1) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw std::invalid_argument("bad port in '" + bind + "'");
  }
  if (port < 0 || port > 65535) throw std::invalid_argument("port out of range in '" + bind + "'");
  return {bind.substr(0, colon), port};
}

}  // namespace bargain
