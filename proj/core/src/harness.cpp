#include "bargain/harness.hpp"

#include <atomic>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "bargain/report.hpp"
#include "bargain/runner.hpp"
#include "bargain/session_log.hpp"

namespace bargain {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

struct Job {
  std::size_t product;
  std::string session_id;
};

/// Emits lines strictly in job order; out-of-order completions wait in memory.
class OrderedLogSink {
 public:
  explicit OrderedLogSink(const std::filesystem::path& path)
      : out_(path, std::ios::binary | std::ios::app) {
    if (!out_) throw LogError("cannot open session log " + path.string());
  }

  void submit(std::size_t index, std::string line) {
    std::lock_guard lock(mu_);
    pending_.emplace(index, std::move(line));
    while (!pending_.empty() && pending_.begin()->first == next_) {
      out_ << pending_.begin()->second << '\n';
      out_.flush();
      pending_.erase(pending_.begin());
      ++next_;
    }
  }

 private:
  std::mutex mu_;
  std::ofstream out_;
  std::map<std::size_t, std::string> pending_;
  std::size_t next_ = 0;
};

// Keeps the good lines of an existing log (original bytes) keyed by session id.
std::map<std::string, std::string> salvage_log(const std::filesystem::path& path) {
  std::map<std::string, std::string> kept;
  std::ifstream in(path, std::ios::binary);
  if (!in) return kept;
  std::string line;
  while (std::getline(in, line)) {
    try {
      SessionRecord r = record_from_json(line);
      kept.emplace(r.session_id, line);
    } catch (const LogError&) {
      // Torn or foreign line: the session is replayed.
    }
  }
  return kept;
}

void write_lines_atomically(const std::filesystem::path& path, const std::vector<std::string>& lines) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw LogError("cannot write " + tmp);
    for (const auto& l : lines) out << l << '\n';
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

std::uint64_t session_seed(std::uint64_t run_seed, const std::string& session_id) {
  return splitmix64(splitmix64(run_seed) ^ fnv1a(session_id));
}

std::string session_id_for(const std::string& codename, int repetition, int repeats) {
  if (repeats <= 1) return codename;
  return codename + "#" + std::to_string(repetition + 1);
}

RunResult run_benchmark(const RunConfig& cfg) {
  return run_benchmark(cfg, load_catalog(cfg.catalog_path));
}

RunResult run_benchmark(const RunConfig& cfg, const Catalog& catalog) {
  if (cfg.parallelism < 1) throw std::invalid_argument("parallelism must be at least 1");
  if (cfg.repeats < 1) throw std::invalid_argument("repeats must be at least 1");
  const AgentFactory buyers(AgentSpec::parse(cfg.buyer_spec));
  const AgentFactory sellers(AgentSpec::parse(cfg.seller_spec));
  if (!buyers.spec().can_play(Role::Buyer) || buyers.spec().kind == AgentKind::Human) {
    throw AgentSpecError("'" + cfg.buyer_spec + "' cannot play the buyer in a batch run");
  }
  if (!sellers.spec().can_play(Role::Seller) || sellers.spec().kind == AgentKind::Human) {
    throw AgentSpecError("'" + cfg.seller_spec + "' cannot play the seller in a batch run");
  }

  std::vector<std::shared_ptr<const Product>> products;
  products.reserve(catalog.size());
  for (const auto& p : catalog) products.push_back(std::make_shared<const Product>(p));

  std::vector<Job> all_jobs;
  for (std::size_t i = 0; i < products.size(); ++i) {
    for (int k = 0; k < cfg.repeats; ++k) {
      all_jobs.push_back({i, session_id_for(products[i]->codename, k, cfg.repeats)});
    }
  }

  std::filesystem::create_directories(cfg.output_dir);
  RunResult result;
  result.log_path = cfg.output_dir / "sessions.jsonl";
  result.summary_path = cfg.output_dir / "summary.csv";
  result.report_path = cfg.output_dir / "summary.txt";

  std::map<std::string, std::string> done;
  if (cfg.resume) {
    done = salvage_log(result.log_path);
    std::vector<std::string> prefix;
    for (const auto& job : all_jobs) {
      if (const auto it = done.find(job.session_id); it != done.end()) prefix.push_back(it->second);
    }
    write_lines_atomically(result.log_path, prefix);
  } else {
    std::ofstream truncate(result.log_path, std::ios::binary | std::ios::trunc);
    if (!truncate) throw LogError("cannot write session log " + result.log_path.string());
  }

  std::vector<Job> todo;
  for (const auto& job : all_jobs) {
    if (done.count(job.session_id) == 0) todo.push_back(job);
  }

  {
    OrderedLogSink sink(result.log_path);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < todo.size(); i = next++) {
        const Job& job = todo[i];
        const SessionConfig config =
            configure_session(products[job.product], cfg.budget_factor, cfg.max_turns, cfg.sigma);
        const std::uint64_t seed = session_seed(cfg.seed, job.session_id);
        RunnerOptions options;
        options.session_id = job.session_id;
        options.buyer_spec = cfg.buyer_spec;
        options.seller_spec = cfg.seller_spec;
        options.retries = std::max(buyers.retries(), sellers.retries());

        SessionRecord record;
        try {
          auto buyer = buyers.create(briefing_for(config, Role::Buyer), seed);
          auto seller = sellers.create(briefing_for(config, Role::Seller), seed);
          record = run_session(config, *buyer, *seller, options);
        } catch (const std::exception& e) {
          record = SessionRecord{};
          record.session_id = job.session_id;
          record.config = config;
          record.buyer_spec = cfg.buyer_spec;
          record.seller_spec = cfg.seller_spec;
          record.failed_attempts.push_back({Role::Buyer, "", std::string("agent_config: ") + e.what()});
          record.status = status::Invalid{"agent_config"};
        }
        sink.submit(i, record_to_json(record));
      }
    };
    const int width = std::min<int>(cfg.parallelism, static_cast<int>(std::max<std::size_t>(todo.size(), 1)));
    std::vector<std::thread> pool;
    for (int t = 1; t < width; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
  }

  // Resumed sessions were appended after the salvaged ones; restore job order.
  if (cfg.resume && !done.empty() && !todo.empty()) {
    const auto lines = salvage_log(result.log_path);
    std::vector<std::string> ordered;
    ordered.reserve(all_jobs.size());
    for (const auto& job : all_jobs) {
      if (const auto it = lines.find(job.session_id); it != lines.end()) ordered.push_back(it->second);
    }
    write_lines_atomically(result.log_path, ordered);
  }

  // The summary is always recomputed from the log so the two cannot drift apart.
  std::vector<SessionRecord> records = load_log(result.log_path);
  result.sessions_total = records.size();
  result.sessions_run = todo.size();
  for (const auto& r : records) result.sessions_valid += r.valid() ? 1 : 0;
  result.summary = aggregate(records);
  result.summary.buyer_label = cfg.buyer_spec;
  result.summary.seller_label = cfg.seller_spec;
  write_summary(result.summary, result.summary_path);
  std::ofstream(result.report_path, std::ios::binary | std::ios::trunc) << render_report(result.summary);
  return result;
}

}  // namespace bargain
