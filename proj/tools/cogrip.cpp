// cogrip: generate benchmarks, serve sessions, evaluate scripted followers,
// replay trajectory logs and render tasks.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cogrip/image_io.hpp"
#include "cogrip/oracle.hpp"
#include "cogrip/service/server.hpp"

namespace fs = std::filesystem;
using namespace cogrip;

namespace {

struct Common {
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 0;
};

// Tasks of one named set, read from a gen-tasks directory or regenerated.
std::vector<Task> load_set(const std::string& name, const std::string& dir, const Common& c) {
  if (!dir.empty()) {
    const fs::path path = fs::path(dir) / (name + ".jsonl");
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    return read_tasks(in);
  }
  if (name == "custom") throw Error("the custom set needs --tasks DIR from gen-tasks --map-size");
  return build_task_set(make_splits(c.seed), name, c.seed, c.threads).tasks;
}

std::vector<Task> filter(std::vector<Task> tasks, int map_size, int pieces) {
  std::erase_if(tasks, [&](const Task& t) {
    return (map_size > 0 && t.map_size != map_size) ||
           (pieces > 0 && static_cast<int>(t.pieces.size()) != pieces);
  });
  return tasks;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw Error("cannot write " + path.string());
}

std::vector<PreferenceOrder> parse_orders(const std::string& text) {
  if (text == "all") {
    const auto all = PreferenceOrder::all();
    return {all.begin(), all.end()};
  }
  const auto order = PreferenceOrder::parse(text);
  if (!order) throw Error("bad --order: " + text);
  return {*order};
}

std::vector<bool> parse_feedback(const std::string& text) {
  if (text == "on") return {true};
  if (text == "off") return {false};
  return {false, true};
}

std::string fmt(double v, int precision) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(precision) << v;
  return s.str();
}

// ---------------------------------------------------------------------------

struct GenOptions {
  std::string out = "tasks";
  std::string split = "test";
  int map_size = 0;
  int pieces = 0;
  int count = 100;
};

int run_gen(const Common& c, const GenOptions& o) {
  const fs::path dir(o.out);
  fs::create_directories(dir);
  const Benchmark benchmark = build_benchmark(make_splits(c.seed), c.seed, c.threads);
  write_file(dir / "manifest.json", manifest(benchmark).dump(2) + "\n");
  for (const TaskSet& set : benchmark.sets) {
    std::ostringstream s;
    write_tasks(s, set.tasks);
    write_file(dir / (set.name + ".jsonl"), s.str());
  }
  std::ostringstream vocab;
  write_vocabulary(vocab);
  write_file(dir / "vocab.txt", vocab.str());

  std::cout << "symbols  train " << benchmark.splits.train.size() << "  val "
            << benchmark.splits.validation.size() << "  test " << benchmark.splits.test.size()
            << "  holdout " << benchmark.splits.holdout.size() << "\n";
  for (const TaskSet& set : benchmark.sets) {
    std::cout << std::left << std::setw(9) << set.name << std::right << std::setw(5)
              << set.tasks.size() << "  ";
    for (const TaskGroup& g : set.groups) {
      std::cout << " " << g.map_size << "x" << g.map_size << "/" << g.num_pieces << ":" << g.count;
    }
    std::cout << "\n";
  }

  if (o.map_size > 0 || o.pieces > 0) {
    const int size = o.map_size > 0 ? o.map_size : 20;
    const int pieces = o.pieces > 0 ? o.pieces : 4;
    const SymbolSplits& sp = benchmark.splits;
    const std::vector<PieceSymbol>& symbols = o.split == "train"        ? sp.train
                                              : o.split == "validation" ? sp.validation
                                              : o.split == "holdout"    ? sp.holdout
                                                                        : sp.test;
    std::vector<Task> tasks;
    for (int i = 0; i < o.count; ++i) {
      const std::string label = "custom-" + std::to_string(size) + "-" + std::to_string(pieces);
      Task t = generate_task(symbols[static_cast<std::size_t>(i) % symbols.size()], size, pieces,
                             derive_seed(c.seed, label, static_cast<std::uint64_t>(i)));
      std::ostringstream id;
      id << "custom-" << std::setw(4) << std::setfill('0') << i;
      t.id = id.str();
      tasks.push_back(std::move(t));
    }
    std::ostringstream s;
    write_tasks(s, tasks);
    write_file(dir / "custom.jsonl", s.str());
    std::cout << "custom   " << std::setw(5) << tasks.size() << "   " << size << "x" << size << "/"
              << pieces << " from " << o.split << " symbols\n";
  }
  std::cout << "wrote " << dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct EvalOptions {
  std::string follower = "feedback";
  std::string split = "test20";
  std::string tasks_dir;
  std::string order = "all";
  std::string feedback = "both";
  int map_size = 0;
  int pieces = 0;
  std::string report;
  std::string log_dir;
};

int run_eval(const Common& c, const EvalOptions& o) {
  const FollowerFactory factory = make_follower(o.follower);
  const std::vector<Task> tasks = filter(load_set(o.split, o.tasks_dir, c), o.map_size, o.pieces);
  if (tasks.empty()) throw Error("no tasks match the filters");
  const auto orders = parse_orders(o.order);
  const auto feedback = parse_feedback(o.feedback);

  nlohmann::json reports = nlohmann::json::array();
  std::cout << "follower " << o.follower << "  set " << o.split << "  N " << tasks.size() << "\n";
  std::cout << std::left << std::setw(8) << "order";
  for (bool fb : feedback) {
    const std::string tag = fb ? "+fb" : "-fb";
    std::cout << std::right << std::setw(10) << ("mSR" + tag) << std::setw(10) << ("mEPL" + tag);
  }
  std::cout << "\n";

  for (const PreferenceOrder& order : orders) {
    std::cout << std::left << std::setw(8) << order.name();
    for (bool fb : feedback) {
      const EnvConfig config{order, fb};
      EvalReport report;
      if (o.log_dir.empty()) {
        report = evaluate(factory, tasks, config, c.threads);
      } else {
        const fs::path dir = fs::path(o.log_dir) / (order.code() + (fb ? "-fb" : "-nofb"));
        fs::create_directories(dir);
        report = evaluate(factory, tasks, config, 1);
        for (const Task& task : tasks) {
          std::ofstream log(dir / (task.id + ".jsonl"));
          TrajectoryWriter writer(log);
          auto follower = factory(task);
          run_episode(task, *follower, config, &writer);
        }
      }
      report.follower = o.follower;
      report.task_set = o.split;
      std::cout << std::right << std::setw(9) << fmt(100.0 * report.msr, 1) << "%" << std::setw(10)
                << fmt(report.mepl, 2);
      reports.push_back(to_json(report, !o.report.empty()));
    }
    std::cout << "\n";
  }
  if (!o.report.empty()) write_file(o.report, reports.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------

int run_replay(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  const Trajectory traj = read_trajectory(in);
  const ReplayResult r = replay(traj);
  if (r.match) {
    std::cout << "MATCH " << r.steps << " steps\n";
    return 0;
  }
  std::cout << "MISMATCH at t=" << *r.first_mismatch << "\n" << r.detail << "\n";
  return 1;
}

// ---------------------------------------------------------------------------

struct RenderOptions {
  std::string split = "test20";
  std::string tasks_dir;
  std::size_t index = 0;
  int scale = 20;
  bool view = false;
  std::string out = "task.png";
};

int run_render(const Common& c, const RenderOptions& o) {
  const std::vector<Task> tasks = load_set(o.split, o.tasks_dir, c);
  if (o.index >= tasks.size()) {
    throw Error("--index " + std::to_string(o.index) + " out of range (" + std::to_string(tasks.size()) +
                " tasks)");
  }
  Env env;
  env.reset(tasks[o.index], {});
  const Image image = o.view ? extract_view(env.frame(), env.gripper().position()) : env.frame();
  write_png(o.out, image, o.scale);
  std::cout << tasks[o.index].id << " -> " << o.out << "  (" << env.teacher().initial_re.text << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct ServeOptions {
  std::uint16_t port = 7777;
  int ws_port = 7778;
  std::string tasks_dir;
  long heartbeat_ms = 60000;
  long idle_timeout_ms = 600000;
  long grace_ms = 30000;
};

int run_serve(const Common& c, const ServeOptions& o) {
  service::ServiceOptions so;
  so.seed = c.seed;
  if (!o.tasks_dir.empty()) so.task_dir = o.tasks_dir;
  so.idle_timeout = std::chrono::milliseconds(o.idle_timeout_ms);
  so.grace = std::chrono::milliseconds(o.grace_ms);
  service::Service svc(so);

  service::ServerOptions opts;
  opts.bind_address = service::bind_address_from_env();
  opts.tcp_port = o.port;
  if (o.ws_port >= 0) opts.ws_port = static_cast<std::uint16_t>(o.ws_port);
  opts.heartbeat = std::chrono::milliseconds(o.heartbeat_ms);
  opts.threads = c.threads;
  service::Server server(svc, opts);
  server.start();
  std::cout << "listening on " << opts.bind_address << " tcp " << server.tcp_port();
  if (auto ws = server.ws_port()) std::cout << " ws " << *ws;
  std::cout << " (" << service::kProtocolVersion << ")" << std::endl;
  server.wait();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cogrip: Pentomino reference game simulator"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with flag values; command-line flags win");

  Common common;
  app.add_option("--seed", common.seed, "Benchmark seed")->capture_default_str();
  app.add_option("--threads", common.threads, "Worker threads (0: all cores)");

  std::vector<std::string> sets = task_set_names();
  sets.push_back("custom");
  const std::vector<std::string> order_codes = {"CSP", "CPS", "PCS", "PSC", "SCP", "SPC",
                                                "C-S-P", "C-P-S", "P-C-S", "P-S-C", "S-C-P", "S-P-C"};

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen-tasks", "Write split manifest, task files and vocabulary");
  gen_cmd->add_option("--out", gen.out, "Output directory")->capture_default_str();
  gen_cmd->add_option("--map-size", gen.map_size, "Also write custom.jsonl with this board size");
  gen_cmd->add_option("--pieces", gen.pieces, "Pieces per board for custom.jsonl");
  gen_cmd->add_option("--count", gen.count, "Tasks in custom.jsonl")->capture_default_str();
  gen_cmd->add_option("--split", gen.split, "Symbol split for custom.jsonl")
      ->check(CLI::IsMember({"train", "validation", "test", "holdout"}))
      ->capture_default_str();

  EvalOptions ev;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a scripted follower");
  eval_cmd->add_option("--follower", ev.follower)
      ->check(CLI::IsMember(follower_names()))
      ->capture_default_str();
  eval_cmd->add_option("--split", ev.split, "Task set")->check(CLI::IsMember(sets))->capture_default_str();
  eval_cmd->add_option("--tasks", ev.tasks_dir, "gen-tasks directory (default: regenerate)");
  eval_cmd->add_option("--order", ev.order, "Preference order or 'all'")
      ->check(CLI::IsMember([&] {
        auto v = order_codes;
        v.push_back("all");
        return v;
      }()))
      ->capture_default_str();
  eval_cmd->add_option("--feedback", ev.feedback)
      ->check(CLI::IsMember({"on", "off", "both"}))
      ->capture_default_str();
  eval_cmd->add_option("--map-size", ev.map_size, "Only tasks with this board size");
  eval_cmd->add_option("--pieces", ev.pieces, "Only tasks with this many pieces");
  eval_cmd->add_option("--report", ev.report, "Write a JSON report with per-task rows");
  eval_cmd->add_option("--log-dir", ev.log_dir, "Write one trajectory log per episode");
  eval_cmd->alias("evaluate");

  std::string replay_path;
  auto* replay_cmd = app.add_subcommand("replay", "Re-execute a trajectory log and verify it");
  replay_cmd->add_option("log", replay_path, "Trajectory log")->required()->check(CLI::ExistingFile);

  RenderOptions rd;
  auto* render_cmd = app.add_subcommand("render", "Export a task board as PNG");
  render_cmd->add_option("--split", rd.split)->check(CLI::IsMember(sets))->capture_default_str();
  render_cmd->add_option("--tasks", rd.tasks_dir, "gen-tasks directory (default: regenerate)");
  render_cmd->add_option("--index", rd.index)->capture_default_str();
  render_cmd->add_option("--scale", rd.scale, "Pixels per tile")->check(CLI::Range(1, 64))->capture_default_str();
  render_cmd->add_flag("--view", rd.view, "Render the 11x11 agent view instead of the board");
  render_cmd->add_option("--out", rd.out)->capture_default_str();

  ServeOptions sv;
  auto* serve_cmd = app.add_subcommand("serve", "Run the session server");
  serve_cmd->add_option("--port", sv.port, "TCP port for line-delimited JSON (0: any)")->capture_default_str();
  serve_cmd->add_option("--ws-port", sv.ws_port, "WebSocket port (0: any, -1: off)")->capture_default_str();
  serve_cmd->add_option("--tasks", sv.tasks_dir, "gen-tasks directory (default: regenerate)");
  serve_cmd->add_option("--heartbeat-ms", sv.heartbeat_ms, "Close silent connections after this")
      ->capture_default_str();
  serve_cmd->add_option("--idle-timeout-ms", sv.idle_timeout_ms, "Drop untouched sessions after this")
      ->capture_default_str();
  serve_cmd->add_option("--grace-ms", sv.grace_ms, "Keep sessions this long after their connection closes")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_cmd) return run_gen(common, gen);
    if (*eval_cmd) return run_eval(common, ev);
    if (*replay_cmd) return run_replay(replay_path);
    if (*render_cmd) return run_render(common, rd);
    if (*serve_cmd) return run_serve(common, sv);
  } catch (const std::exception& e) {
    std::cerr << "cogrip: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
