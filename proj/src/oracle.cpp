#include "cogrip/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <thread>

#include "cogrip/errors.hpp"

namespace cogrip {

using nlohmann::json;

namespace {

constexpr std::array<Action, 4> kMoves = {Action::Left, Action::Right, Action::Up,
                                          Action::Down};

Coord moved(Coord c, Action a) {
  switch (a) {
    case Action::Left: return {c.x - 1, c.y};
    case Action::Right: return {c.x + 1, c.y};
    case Action::Up: return {c.x, c.y - 1};
    case Action::Down: return {c.x, c.y + 1};
    default: return c;
  }
}

}  // namespace

std::vector<Action> shortest_path(const Board& board, Coord start, PieceId target) {
  const int w = board.width();
  const int h = board.height();
  auto index = [w](Coord c) { return static_cast<std::size_t>(c.y) * w + c.x; };

  std::vector<int> parent(static_cast<std::size_t>(w) * h, -2);
  std::vector<Action> via(parent.size(), Action::Wait);
  std::deque<Coord> frontier{start};
  parent[index(start)] = -1;
  while (!frontier.empty()) {
    const Coord cur = frontier.front();
    frontier.pop_front();
    if (board.at(cur) == target) {
      std::vector<Action> path;
      for (Coord c = cur; parent[index(c)] >= 0;) {
        path.push_back(via[index(c)]);
        const int p = parent[index(c)];
        c = {p % w, p / w};
      }
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (Action a : kMoves) {
      const Coord next = moved(cur, a);
      if (!board.in_bounds(next) || parent[index(next)] != -2) continue;
      parent[index(next)] = static_cast<int>(index(cur));
      via[index(next)] = a;
      frontier.push_back(next);
    }
  }
  throw UnreachableTarget("target piece " + std::to_string(target) + " is unreachable");
}

int shortest_episode(const Task& task) {
  const Board board = build_board(task);
  const Coord start = start_position(board.width(), board.height());
  return static_cast<int>(shortest_path(board, start, task.target).size()) + 1;
}

std::vector<Action> oracle_actions(const Task& task) {
  const Board board = build_board(task);
  std::vector<Action> actions =
      shortest_path(board, start_position(board.width(), board.height()), task.target);
  actions.push_back(Action::Grip);
  return actions;
}

// ---------------------------------------------------------------------------

FollowerFactory make_follower(std::string_view name) {
  if (name == "shortest-path") {
    return [](const Task& task) -> std::unique_ptr<Follower> {
      return std::make_unique<ScriptedFollower>(oracle_actions(task));
    };
  }
  if (name == "feedback") {
    return [](const Task& task) -> std::unique_ptr<Follower> {
      return std::make_unique<FeedbackFollower>(derive_seed(task.seed, "follower", 0));
    };
  }
  if (name == "wait") {
    return [](const Task&) -> std::unique_ptr<Follower> {
      return std::make_unique<WaitFollower>();
    };
  }
  if (name == "random") {
    return [](const Task& task) -> std::unique_ptr<Follower> {
      return std::make_unique<RandomFollower>(derive_seed(task.seed, "random", 0));
    };
  }
  throw Error("unknown follower: " + std::string(name));
}

std::vector<std::string> follower_names() {
  return {"shortest-path", "feedback", "wait", "random"};
}

// ---------------------------------------------------------------------------

EpisodeRecord run_episode(const Task& task, Follower& follower, const EnvConfig& config,
                          TrajectoryWriter* log) {
  Env env;
  Observation obs = env.reset(task, config);
  if (log) log->begin(task, config, obs);
  follower.begin(obs);
  while (!env.done()) {
    const Action action = follower.act(obs);
    StepResult r = env.step(action);
    if (log) log->step(action, r);
    obs = std::move(r.observation);
  }
  const EpisodeOutcome& out = *env.outcome();
  return {task.id, out.status, out.steps, out.reward};
}

EvalReport evaluate(const FollowerFactory& factory, std::span<const Task> tasks,
                    const EnvConfig& config, unsigned threads) {
  EvalReport report;
  report.config = config;
  report.n = tasks.size();
  report.episodes.resize(tasks.size());

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, tasks.size())));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      auto follower = factory(tasks[i]);
      report.episodes[i] = run_episode(tasks[i], *follower, config);
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }

  std::size_t successes = 0;
  long long steps = 0;
  for (const EpisodeRecord& e : report.episodes) {
    successes += e.status == EpisodeStatus::Correct ? 1 : 0;
    steps += e.steps;
  }
  if (!tasks.empty()) {
    report.msr = static_cast<double>(successes) / static_cast<double>(tasks.size());
    report.mepl = static_cast<double>(steps) / static_cast<double>(tasks.size());
  }
  return report;
}

json to_json(const EvalReport& report, bool with_episodes) {
  json j{{"follower", report.follower},
         {"task_set", report.task_set},
         {"order", report.config.order.name()},
         {"feedback", report.config.feedback_enabled},
         {"n", report.n},
         {"msr", report.msr},
         {"mepl", report.mepl}};
  if (with_episodes) {
    json rows = json::array();
    for (const EpisodeRecord& e : report.episodes) {
      rows.push_back({{"task", e.task_id},
                      {"status", to_string(e.status)},
                      {"steps", e.steps},
                      {"reward", e.reward}});
    }
    j["episodes"] = std::move(rows);
  }
  return j;
}

}  // namespace cogrip
