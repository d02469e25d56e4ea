#include "eiha/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <numeric>
#include <sstream>

#include "CLI11.hpp"
#include "eiha/live.hpp"
#include "eiha/server.hpp"
#include "eiha/stats.hpp"

namespace eiha {
namespace {

using nlohmann::json;

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string pad(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void write_json(const std::string& path, const json& doc) {
  std::ofstream out(path);
  out << doc.dump() << "\n";
  if (!out) throw std::runtime_error("cannot write " + path);
}

// Registers one --<key> option per config field; values are applied by
// resolve_config after parsing so that --config loads first.
struct ConfigFlags {
  std::string file;
  std::map<std::string, std::string> values;

  void attach(CLI::App* app) {
    app->add_option("--config", file, "JSON object of config keys");
    for (const auto& key : config_keys()) {
      if (key == "mem_length" || key == "rng_seed") continue;  // set by condition and seed
      app->add_option("--" + key, values[key]);
    }
  }

  EihaConfig resolve(const CLI::App* app) const {
    std::string doc;
    if (!file.empty()) doc = read_json(file).dump();
    std::map<std::string, std::string> set;
    for (const auto& [key, v] : values)
      if (app->count("--" + key) > 0) set[key] = v;
    return load_config(doc, set);
  }
};

struct Group {
  Condition condition;
  std::vector<const TrialResult*> trials;

  int successes(Behavior b) const {
    return static_cast<int>(std::count_if(trials.begin(), trials.end(), [b](const TrialResult* r) {
      return r->outcome(b).learned;
    }));
  }

  std::vector<double> times(Behavior b) const {
    std::vector<double> t;
    for (const auto* r : trials)
      if (r->outcome(b).time_to_learn) t.push_back(*r->outcome(b).time_to_learn);
    return t;
  }
};

bool same_replay(const TrialResult& a, const TrialResult& b, std::string& why) {
  if (a.log_hash != b.log_hash) why = "log hash";
  else if (a.ticks != b.ticks) why = "tick count";
  else if (a.behaviors != b.behaviors) why = "learning outcome";
  else if (a.events != b.events) why = "ledger events";
  else if (a.switching != b.switching) why = "switching outcome";
  else if (!a.trace.action.empty() && a.trace != b.trace) why = "score trace";
  else return true;
  return false;
}

int cmd_replay(const std::string& path, std::ostream& out) {
  const json doc = read_json(path);
  if (doc.is_object() && doc.value("format", std::string{}) == kLiveLogFormat) {
    const LiveLog log = LiveLog::from_json(doc);
    const std::uint64_t h = replay_live_log(log);
    if (h != log.log_hash) {
      out << "live episode: MISMATCH (log hash)\n";
      return kExitFailure;
    }
    out << "live episode: ok (" << log.ticks << " ticks)\n";
    return kExitOk;
  }
  const auto stored = results_from_document(doc);
  int bad = 0;
  for (const auto& r : stored) {
    const TrialResult again = run_trial(r.config);
    std::string why;
    out << condition_name(r.config.condition) << " trial " << r.config.trial_index << ": ";
    if (same_replay(r, again, why)) {
      out << "ok\n";
    } else {
      out << "MISMATCH (" << why << ")\n";
      ++bad;
    }
  }
  out << stored.size() - static_cast<std::size_t>(bad) << "/" << stored.size()
      << " trials replayed identically\n";
  return bad == 0 ? kExitOk : kExitFailure;
}

}  // namespace

std::string stats_report(const std::vector<TrialResult>& results, int resamples,
                         std::uint64_t seed) {
  std::vector<Group> groups;
  for (Condition c : kConditions) {
    Group g{c, {}};
    for (const auto& r : results)
      if (r.config.condition == c) g.trials.push_back(&r);
    if (!g.trials.empty()) groups.push_back(std::move(g));
  }

  std::ostringstream os;
  os << "Learning success (at least 3 consecutive robot-human turns)\n";
  os << pad("condition", 11) << pad("trials", 8) << pad("peekaboo", 16) << pad("drumming", 16)
     << pad("ttl peekaboo s", 16) << "ttl drumming s\n";
  for (const auto& g : groups) {
    const int n = static_cast<int>(g.trials.size());
    os << pad(std::string(condition_name(g.condition)), 11) << pad(std::to_string(n), 8);
    for (Behavior b : kBehaviors) {
      const int k = g.successes(b);
      os << pad(std::to_string(k) + "/" + std::to_string(n) + " (" +
                    fmt("%.0f", 100.0 * k / n) + "%)",
                16);
    }
    for (Behavior b : kBehaviors) {
      const auto t = g.times(b);
      const std::string cell =
          t.empty() ? "-" : fmt("%.1f", std::accumulate(t.begin(), t.end(), 0.0) / t.size());
      os << (b == Behavior::peekaboo ? pad(cell, 16) : cell);
    }
    os << "\n";
  }

  const Group* base = nullptr;
  for (const auto& g : groups)
    if (g.condition == Condition::stm4) base = &g;
  if (!base || groups.size() < 2) {
    os << "\nNo comparison: stm4 and at least one other condition are needed.\n";
    return os.str();
  }

  os << "\nFisher exact test, stm4 against each condition (rows: stm4, other; columns: "
        "learned, not learned)\n";
  os << pad("behavior", 10) << pad("other", 7) << pad("table", 18) << pad("one-sided", 11)
     << pad("lower", 11) << pad("two-sided", 11) << "point\n";
  for (Behavior b : kBehaviors) {
    for (const auto& g : groups) {
      if (&g == base) continue;
      const std::int64_t a = base->successes(b), c = g.successes(b);
      const Table2x2 t{{{a, static_cast<std::int64_t>(base->trials.size()) - a},
                        {c, static_cast<std::int64_t>(g.trials.size()) - c}}};
      const auto f = fisher_exact(t);
      const std::string table = "[[" + std::to_string(t[0][0]) + "," + std::to_string(t[0][1]) +
                                "],[" + std::to_string(t[1][0]) + "," +
                                std::to_string(t[1][1]) + "]]";
      os << pad(std::string(behavior_name(b)), 10)
         << pad(std::string(condition_name(g.condition)), 7) << pad(table, 18)
         << pad(fmt("%.6f", f.one_sided()), 11) << pad(fmt("%.6f", f.lower), 11)
         << pad(fmt("%.6f", f.two_sided), 11) << fmt("%.6f", f.point) << "\n";
    }
  }

  os << "\nPermutation test on time to learn, stm4 against each condition (two-sided, "
     << resamples << " resamples when not exhaustive)\n";
  os << pad("behavior", 10) << pad("other", 7) << pad("n", 8) << pad("mean diff s", 13)
     << pad("p", 10) << "mode\n";
  Rng rng(seed);
  for (Behavior b : kBehaviors) {
    for (const auto& g : groups) {
      if (&g == base) continue;
      const auto ta = base->times(b), tb = g.times(b);
      os << pad(std::string(behavior_name(b)), 10)
         << pad(std::string(condition_name(g.condition)), 7)
         << pad(std::to_string(ta.size()) + "/" + std::to_string(tb.size()), 8);
      if (ta.empty() || tb.empty()) {
        os << "- (no learned trials in one group)\n";
        continue;
      }
      const auto p = permutation_test(ta, tb, resamples, rng);
      os << pad(fmt("%.1f", p.observed), 13) << pad(fmt("%.4f", p.p_value), 10)
         << (p.exhaustive ? "exhaustive" : "random") << "\n";
    }
  }
  return os.str();
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Extended interaction history learning on a simulated robot"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run seeded trials and write a results document");
  std::vector<std::string> conditions;
  int trials = 5;
  std::uint64_t seed = 0;
  std::string partner = "dual_teacher";
  std::string out_path;
  bool no_trace = false;
  ConfigFlags run_cfg;
  run->add_option("--condition", conditions, "stm4, stm1, none (repeatable; default all)");
  run->add_option("--trials", trials, "Trials per condition")->check(CLI::NonNegativeNumber);
  run->add_option("--seed", seed, "Batch seed");
  run->add_option("--partner", partner, "Scripted partner");
  run->add_option("--out", out_path, "Results document")->required();
  run->add_flag("--no-trace", no_trace, "Omit per-tick score traces");
  run_cfg.attach(run);

  auto* stats = app.add_subcommand("stats", "Print the success, Fisher and permutation tables");
  std::string in_path;
  int resamples = 1000;
  std::uint64_t stats_seed = 0;
  stats->add_option("--in", in_path, "Results document")->required();
  stats->add_option("--resamples", resamples)->check(CLI::PositiveNumber);
  stats->add_option("--seed", stats_seed, "Seed of the random permutations");

  auto* serve = app.add_subcommand("serve", "Run a live session over a websocket");
  ServeOptions so;
  std::string serve_condition = "stm4";
  ConfigFlags serve_cfg;
  serve->add_option("--port", so.port);
  serve->add_option("--address", so.address);
  serve->add_option("--condition", serve_condition);
  serve->add_option("--seed", so.seed);
  serve->add_option("--out", so.log_path, "Event log of the live episode");
  serve_cfg.attach(serve);

  auto* replay = app.add_subcommand("replay", "Re-run logged trials and check they are identical");
  std::string replay_in;
  replay->add_option("--in", replay_in, "Results document or live event log")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "eiha: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (run->parsed()) {
      BatchSpec spec;
      if (conditions.empty() || (conditions.size() == 1 && conditions[0] == "all"))
        spec.conditions.assign(kConditions.begin(), kConditions.end());
      else
        for (const auto& c : conditions) spec.conditions.push_back(parse_condition(c));
      spec.trials_per_condition = trials;
      spec.seed = seed;
      spec.partner = parse_variant(partner);
      spec.base = run_cfg.resolve(run);
      const auto results = run_batch(spec);
      write_json(out_path, results_document(spec, results, !no_trace));
      for (Condition c : spec.conditions) {
        int pk = 0, dr = 0;
        for (const auto& r : results)
          if (r.config.condition == c) {
            pk += r.outcome(Behavior::peekaboo).learned;
            dr += r.outcome(Behavior::drumming).learned;
          }
        out << condition_name(c) << ": peekaboo " << pk << "/" << trials << ", drumming " << dr
            << "/" << trials << "\n";
      }
      out << "wrote " << results.size() << " trials to " << out_path << "\n";
      return kExitOk;
    }
    if (stats->parsed()) {
      out << stats_report(results_from_document(read_json(in_path)), resamples, stats_seed);
      return kExitOk;
    }
    if (serve->parsed()) {
      so.base = serve_cfg.resolve(serve);
      so.condition = parse_condition(serve_condition);
      so.handle_signals = true;
      LiveServer server(so);
      const auto port = server.listen();
      out << "serving " << kProtocolVersion << " on ws://" << so.address << ":" << port << "/\n"
          << std::flush;
      server.run();
      return kExitOk;
    }
    if (replay->parsed()) return cmd_replay(replay_in, out);
  } catch (const ConfigError& e) {
    err << "eiha: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "eiha: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "eiha: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace eiha
