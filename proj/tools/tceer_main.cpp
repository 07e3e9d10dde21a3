// Command-line front end: run one simulation, compare the fuzzy router
// against the greedy baseline over a seed sweep, or trace packets from a
// chosen source node.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tceer/config.hpp"
#include "tceer/sim.hpp"

namespace fs = std::filesystem;
using namespace tceer;

namespace {

bool log_debug() {
  const char* v = std::getenv("TCEER_LOG");
  return v && std::string(v) == "debug";
}

SimConfig load_with_overrides(const std::string& config_path,
                              const std::vector<std::string>& overrides) {
  SimConfig cfg = load_config_file(config_path);
  for (const std::string& ov : overrides) {
    const std::size_t eq = ov.find('=');
    if (eq == std::string::npos)
      throw ConfigError(ov, "override must look like key=value");
    std::string key = ov.substr(0, eq);
    std::string value = ov.substr(eq + 1);
    auto strip = [](std::string& s) {
      while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
      while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
    };
    strip(key);
    strip(value);
    apply_override(cfg, key, value);
  }
  cfg.validate();
  return cfg;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  return f;
}

std::string lifetime_str(const std::optional<int>& r) {
  return r ? std::to_string(*r) : std::string("not_reached");
}

int total_delivered(const std::vector<RoundStats>& rounds) {
  int total = 0;
  for (const RoundStats& r : rounds) total += r.delivered;
  return total;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            const std::vector<std::string>& overrides) {
  const SimConfig cfg = load_with_overrides(config_path, overrides);
  fs::create_directories(out_dir);

  Simulation sim(cfg);
  std::ofstream trust = open_out(fs::path(out_dir) / "trust.csv");
  trust << "round,observer,subject,DT,IT,T,classification\n";
  const RunResult result = sim.run(&trust);

  {
    std::ofstream f = open_out(fs::path(out_dir) / "rounds.csv");
    write_rounds_csv(f, result.rounds);
  }
  {
    std::ofstream f = open_out(fs::path(out_dir) / "routes.txt");
    write_routes(f, result.traces);
  }
  {
    std::ofstream f = open_out(fs::path(out_dir) / "resolved-config.txt");
    f << resolved_config_text(cfg);
    f << "# planted malicious ids:";
    for (int id : sim.malicious_ids()) f << ' ' << id;
    f << '\n';
  }

  std::ostringstream summary;
  summary << "rounds-to-1%-dead: " << lifetime_str(lifetime_round(result.rounds, 1.0)) << '\n'
          << "rounds-to-50%-dead: " << lifetime_str(lifetime_round(result.rounds, 50.0)) << '\n'
          << "rounds-to-100%-dead: " << lifetime_str(lifetime_round(result.rounds, 100.0)) << '\n'
          << "delivered-total: " << total_delivered(result.rounds) << '\n'
          << "blocked-total: " << sim.ledger().blocked_count() << '\n';
  {
    std::ofstream f = open_out(fs::path(out_dir) / "summary.txt");
    f << summary.str();
  }
  std::cout << summary.str();
  return 0;
}

struct SeedOutcome {
  std::uint64_t seed = 0;
  std::optional<int> tceer_r50;
  std::optional<int> baseline_r50;
};

std::optional<int> run_r50(SimConfig cfg, Simulation::Router router) {
  Simulation sim(cfg, router);
  const RunResult result = sim.run(nullptr);
  return lifetime_round(result.rounds, 50.0);
}

int cmd_compare(const std::string& config_path, const std::string& out_dir,
                const std::vector<std::uint64_t>& seeds,
                const std::vector<std::string>& overrides) {
  const SimConfig base = load_with_overrides(config_path, overrides);
  fs::create_directories(out_dir);

  // Runs share no state, so the per-seed pairs can execute concurrently.
  std::vector<std::future<SeedOutcome>> jobs;
  for (std::uint64_t seed : seeds) {
    jobs.push_back(std::async(std::launch::async, [base, seed]() {
      SimConfig cfg = base;
      cfg.seed = seed;
      SeedOutcome o;
      o.seed = seed;
      o.tceer_r50 = run_r50(cfg, Simulation::Router::Tceer);
      o.baseline_r50 = run_r50(cfg, Simulation::Router::Greedy);
      return o;
    }));
  }

  int wins = 0, losses = 0, ties = 0;
  std::ostringstream csv;
  csv << "seed,tceer_r50,baseline_r50\n";
  for (auto& job : jobs) {
    const SeedOutcome o = job.get();
    const int t = o.tceer_r50.value_or(INT32_MAX);
    const int b = o.baseline_r50.value_or(INT32_MAX);
    if (t > b) ++wins;
    else if (t < b) ++losses;
    else ++ties;
    csv << o.seed << ',' << (o.tceer_r50 ? std::to_string(*o.tceer_r50) : "-1") << ','
        << (o.baseline_r50 ? std::to_string(*o.baseline_r50) : "-1") << '\n';
    if (log_debug())
      std::cerr << "seed " << o.seed << ": tceer_r50=" << t << " baseline_r50=" << b
                << '\n';
  }

  {
    std::ofstream f = open_out(fs::path(out_dir) / "compare.csv");
    f << csv.str();
  }
  std::ostringstream tally;
  tally << "tceer-wins: " << wins << '\n'
        << "baseline-wins: " << losses << '\n'
        << "ties: " << ties << '\n';
  {
    std::ofstream f = open_out(fs::path(out_dir) / "compare-summary.txt");
    f << tally.str();
  }
  std::cout << csv.str() << tally.str();
  return 0;
}

int cmd_trace(const std::string& config_path, const std::string& out_dir, int source,
              int packets, bool freeze, const std::vector<std::string>& overrides) {
  const SimConfig cfg = load_with_overrides(config_path, overrides);
  fs::create_directories(out_dir);

  Simulation sim(cfg);
  const std::vector<RouteTrace> traces = sim.trace_packets(source, packets, freeze);

  std::ostringstream text;
  std::map<std::string, int> routes;
  for (const RouteTrace& t : traces) {
    std::string hops;
    for (std::size_t i = 0; i < t.hops.size(); ++i) {
      if (i) hops += '>';
      hops += std::to_string(t.hops[i]);
    }
    if (t.reached_bs) hops += ">BS";
    ++routes[hops];
    text << t.packet_id << ": " << hops << " [" << to_string(t.outcome) << "]\n";
  }
  text << "distinct-routes: " << routes.size() << '\n';

  {
    std::ofstream f = open_out(fs::path(out_dir) / "trace.txt");
    f << text.str();
  }
  std::cout << text.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trust-, congestion- and energy-aware greedy routing simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  std::vector<std::string> overrides;
  std::string seeds_arg = "1,2,3,4,5,6,7,8,9,10";
  int source = 24, packets = 20;
  bool freeze = false;

  CLI::App* run = app.add_subcommand("run", "run one simulation and write CSV outputs");
  run->add_option("config", config_path, "scenario file")->required();
  run->add_option("out", out_dir, "output directory")->required();
  run->add_option("overrides", overrides, "key=value overrides");

  CLI::App* compare =
      app.add_subcommand("compare", "run fuzzy and greedy routers over a seed sweep");
  compare->add_option("config", config_path, "scenario file")->required();
  compare->add_option("out", out_dir, "output directory")->required();
  compare->add_option("--seeds", seeds_arg, "comma-separated seed list");
  compare->add_option("overrides", overrides, "key=value overrides");

  CLI::App* trace = app.add_subcommand("trace", "trace packets from one source node");
  trace->add_option("config", config_path, "scenario file")->required();
  trace->add_option("--out", out_dir, "output directory");
  trace->add_option("--source", source, "source node id");
  trace->add_option("--packets", packets, "number of packets to trace");
  trace->add_flag("--freeze-state", freeze,
                  "route against the initial state without mutating it");
  trace->add_option("overrides", overrides, "key=value overrides");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir, overrides);
    if (compare->parsed()) {
      std::vector<std::uint64_t> seeds;
      std::stringstream ss(seeds_arg);
      std::string item;
      while (std::getline(ss, item, ','))
        if (!item.empty()) seeds.push_back(std::stoull(item));
      if (seeds.empty()) throw std::runtime_error("empty seed list");
      return cmd_compare(config_path, out_dir, seeds, overrides);
    }
    if (trace->parsed())
      return cmd_trace(config_path, out_dir, source, packets, freeze, overrides);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
