// bargain: run, score and report buyer/seller bargaining benchmarks.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "bargain/harness.hpp"
#include "bargain/report.hpp"
#include "bargain/server.hpp"
#include "bargain/session_log.hpp"

namespace {

bargain::Money parse_sigma(const std::string& text) {
  const auto m = bargain::Money::parse(text);
  if (!m || m->cents() <= 0) throw CLI::ValidationError("--sigma", "must be a positive dollar amount");
  return *m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Buyer/seller bargaining benchmark harness"};
  app.require_subcommand(1);

  bargain::RunConfig run_cfg;
  std::string run_sigma = "0.01";
  auto* run = app.add_subcommand("run", "Play one session per catalog product and write log and summary");
  run->add_option("--catalog", run_cfg.catalog_path, "Product catalog (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--buyer", run_cfg.buyer_spec, "Buyer agent spec")->capture_default_str();
  run->add_option("--seller", run_cfg.seller_spec, "Seller agent spec")->capture_default_str();
  run->add_option("--budget-factor", run_cfg.budget_factor, "f, budget = f * list price")
      ->capture_default_str()->check(CLI::PositiveNumber);
  run->add_option("--max-turns", run_cfg.max_turns, "t_m, rounds per session")
      ->capture_default_str()->check(CLI::PositiveNumber);
  run->add_option("--sigma", run_sigma, "Budget nudge when B equals C")->capture_default_str();
  run->add_option("--seed", run_cfg.seed, "Run seed")->capture_default_str();
  run->add_option("--parallel", run_cfg.parallelism, "Concurrent sessions")
      ->capture_default_str()->check(CLI::PositiveNumber);
  run->add_option("--repeats", run_cfg.repeats, "Sessions per product")
      ->capture_default_str()->check(CLI::PositiveNumber);
  run->add_option("--out", run_cfg.output_dir, "Output directory")->capture_default_str();
  run->add_flag("--resume", run_cfg.resume, "Skip sessions already in <out>/sessions.jsonl");

  std::string log_path;
  std::string score_out;
  auto* score = app.add_subcommand("score", "Recompute the summary from a session log");
  score->add_option("--log", log_path, "sessions.jsonl")->required()->check(CLI::ExistingFile);
  score->add_option("--out", score_out, "Also write the summary CSV here");

  std::vector<std::string> summaries;
  auto* report = app.add_subcommand("report", "Render summaries as Buyer/Seller tables");
  report->add_option("--summaries", summaries, "summary.csv files")->required()->check(CLI::ExistingFile);

  std::string bind = "127.0.0.1:8080";
  std::string serve_catalog;
  std::string serve_sigma = "0.01";
  int idle_minutes = 30;
  bargain::ServerConfig serve_cfg;
  auto* serve = app.add_subcommand("serve", "Serve the live-session HTTP API");
  serve->add_option("--bind", bind, "host:port")->capture_default_str();
  serve->add_option("--catalog", serve_catalog, "Product catalog (JSON)")->required()->check(CLI::ExistingFile);
  serve->add_option("--budget-factor", serve_cfg.budget_factor)->capture_default_str();
  serve->add_option("--max-turns", serve_cfg.max_turns)->capture_default_str()->check(CLI::PositiveNumber);
  serve->add_option("--sigma", serve_sigma)->capture_default_str();
  serve->add_option("--machine-buyer", serve_cfg.machine_buyer, "Agent facing a human seller")->capture_default_str();
  serve->add_option("--machine-seller", serve_cfg.machine_seller, "Agent facing a human buyer")->capture_default_str();
  serve->add_option("--idle-minutes", idle_minutes, "Live session expiry")->capture_default_str();
  serve->add_option("--seed", serve_cfg.seed)->capture_default_str();

  std::uint64_t synth_seed = 0;
  std::size_t synth_n = 930;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Write a seeded synthetic catalog");
  synth->add_option("--seed", synth_seed)->capture_default_str();
  synth->add_option("--n", synth_n, "Number of products")->capture_default_str();
  synth->add_option("--out", synth_out, "Output JSON path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      run_cfg.sigma = parse_sigma(run_sigma);
      const auto result = bargain::run_benchmark(run_cfg);
      std::cout << bargain::render_report(result.summary) << '\n'
                << result.sessions_total << " sessions (" << result.sessions_run << " played, "
                << result.sessions_valid << " valid)\n"
                << "log:     " << result.log_path.string() << '\n'
                << "summary: " << result.summary_path.string() << '\n';
    } else if (*score) {
      const auto contents = bargain::read_log(log_path);
      if (contents.discarded_lines > 0) {
        std::cerr << "warning: skipped " << contents.discarded_lines << " unreadable line(s)\n";
      }
      const auto summary = bargain::aggregate(contents.records);
      if (!score_out.empty()) bargain::write_summary(summary, score_out);
      std::cout << bargain::summary_to_csv(summary) << '\n' << bargain::render_report(summary);
    } else if (*report) {
      std::vector<bargain::BenchmarkSummary> loaded;
      for (const auto& p : summaries) loaded.push_back(bargain::read_summary(p));
      std::cout << bargain::render_report(loaded);
    } else if (*serve) {
      serve_cfg.catalog = bargain::load_catalog(serve_catalog);
      serve_cfg.sigma = parse_sigma(serve_sigma);
      serve_cfg.idle_timeout = std::chrono::minutes(idle_minutes);
      const auto [host, port] = bargain::parse_bind_address(bind);
      bargain::Server server(std::move(serve_cfg));
      std::cerr << "serving on " << host << ':' << port << '\n';
      server.run(host, port);
    } else if (*synth) {
      bargain::save_catalog(bargain::synth_catalog(synth_seed, synth_n), synth_out);
      std::cout << "wrote " << synth_n << " products to " << synth_out << '\n';
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
