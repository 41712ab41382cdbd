#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cogrip/env.hpp"
#include "cogrip/rng.hpp"
#include "cogrip/trajectory.hpp"
#include "json.hpp"

namespace cogrip {

// ---------------------------------------------------------------------------
// Shortest path
// ---------------------------------------------------------------------------

// Breadth-first search over 4-connected moves from `start` to the nearest
// tile of `target`. Pieces are traversable; only the board edge constrains
// movement. Ties are broken by the action order LEFT, RIGHT, UP, DOWN.
// Throws UnreachableTarget.
std::vector<Action> shortest_path(const Board& board, Coord start, PieceId target);

// Moves to the target plus the final GRIP.
int shortest_episode(const Task& task);
std::vector<Action> oracle_actions(const Task& task);

// ---------------------------------------------------------------------------
// Followers
// ---------------------------------------------------------------------------

class Follower {
 public:
  virtual ~Follower() = default;
  virtual void begin(const Observation& first) = 0;
  virtual Action act(const Observation& obs) = 0;
};

// Plays a fixed action list, then waits.
class ScriptedFollower : public Follower {
 public:
  explicit ScriptedFollower(std::vector<Action> actions) : actions_(std::move(actions)) {}
  void begin(const Observation&) override { next_ = 0; }
  Action act(const Observation&) override {
    return next_ < actions_.size() ? actions_[next_++] : Action::Wait;
  }

 private:
  std::vector<Action> actions_;
  std::size_t next_ = 0;
};

class WaitFollower : public Follower {
 public:
  void begin(const Observation&) override {}
  Action act(const Observation&) override { return Action::Wait; }
};

class RandomFollower : public Follower {
 public:
  explicit RandomFollower(std::uint64_t seed) : rng_(seed) {}
  void begin(const Observation&) override {}
  Action act(const Observation&) override {
    return kAllActions[rng_.below(kAllActions.size())];
  }

 private:
  Rng rng_;
};

// Heuristic follower that sees only observations: the view, the projected
// gripper coordinates and both token sequences. It keeps a dead-reckoned map
// of every tile it has seen and grounds the initial expression in it (color,
// shape and region checks on connected same-color tiles).
//
// Each step, in priority order:
//   "Yes this piece"  -> GRIP
//   "Not this piece"  -> reject the piece under the gripper and move on
//   "Not this way"    -> turn clockwise
//   repeated RE       -> pick a new random direction
//   on a matching piece with no teacher message -> GRIP
//   a remembered piece matches the expression   -> walk to it
//   the expression names a region we are not in -> walk toward it
//   otherwise keep the current direction, turning at the board edge.
class FeedbackFollower : public Follower {
 public:
  explicit FeedbackFollower(std::uint64_t seed);
  void begin(const Observation& first) override;
  Action act(const Observation& obs) override;

 private:
  // Remembered tile contents.
  enum Cell : std::int8_t { kUnknown = -1, kEmpty = 0, kWall = 7 };  // 1..6: Color + 1
  static constexpr int kGrid = 129;
  static constexpr int kOrigin = kGrid / 2;

  std::int8_t& cell(Coord rel);
  std::int8_t cell_at(Coord rel) const;
  void update_position(const Observation& obs);
  void remember(const Observation& obs);
  std::vector<Coord> component(Coord rel) const;
  bool matches(const std::vector<Coord>& tiles, const Observation& obs) const;
  std::optional<Region> region_at(double x, double y) const;
  std::pair<double, double> projected(Coord rel, const Observation& obs) const;
  Action toward(Coord target) const;
  Action move(int direction);

  Rng rng_;
  std::optional<Color> want_color_;
  std::optional<Shape> want_shape_;
  std::optional<Region> want_region_;

  // 0 right, 1 down, 2 left, 3 up: clockwise on screen.
  int direction_ = 0;
  Coord rel_{0, 0};
  std::pair<double, double> last_coords_{0.0, 0.0};
  std::optional<Action> last_move_;
  double tile_step_ = 0.1;  // projected size of one tile, learned on first move
  std::vector<std::int8_t> map_;
  std::vector<bool> rejected_;
};

using FollowerFactory = std::function<std::unique_ptr<Follower>(const Task&)>;

// "shortest-path", "feedback", "wait", "random". Throws Error for others.
FollowerFactory make_follower(std::string_view name);
std::vector<std::string> follower_names();

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

struct EpisodeRecord {
  std::string task_id;
  EpisodeStatus status = EpisodeStatus::Running;
  int steps = 0;
  double reward = 0.0;
};

struct EvalReport {
  std::string follower;
  std::string task_set;
  EnvConfig config;
  std::size_t n = 0;
  double msr = 0.0;   // fraction of episodes with the target gripped
  double mepl = 0.0;  // mean steps, terminal GRIP included
  std::vector<EpisodeRecord> episodes;  // in task order
};

EpisodeRecord run_episode(const Task& task, Follower& follower, const EnvConfig& config,
                          TrajectoryWriter* log = nullptr);

// Runs every task on `threads` workers (0 = hardware concurrency). Records
// are kept in task order, so the report does not depend on scheduling.
EvalReport evaluate(const FollowerFactory& factory, std::span<const Task> tasks,
                    const EnvConfig& config, unsigned threads = 0);

nlohmann::json to_json(const EvalReport& report, bool with_episodes = true);

}  // namespace cogrip
