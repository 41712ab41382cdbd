#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "cogrip/board.hpp"
#include "cogrip/language.hpp"
#include "cogrip/tasks.hpp"

namespace cogrip {

inline constexpr int kMaxSteps = 100;

enum class Action : std::uint8_t { Left, Right, Up, Down, Wait, Grip };

inline constexpr std::array<Action, 6> kAllActions = {
    Action::Left, Action::Right, Action::Up, Action::Down, Action::Wait, Action::Grip};

std::string_view to_string(Action action);
std::optional<Action> parse_action(std::string_view text);

enum class EpisodeStatus : std::uint8_t { Running, Correct, Wrong, Timeout };

std::string_view to_string(EpisodeStatus status);
std::optional<EpisodeStatus> parse_status(std::string_view text);

// 1 - 0.9 * (steps / 100), plus 1 for the target and minus 1 otherwise.
// Computed in thousandths so the decimal values are exact to the last bit
// of the nearest double.
double terminal_reward(EpisodeStatus status, int steps);

struct EpisodeOutcome {
  EpisodeStatus status = EpisodeStatus::Running;
  int steps = 0;
  double reward = 0.0;
  std::optional<PieceId> gripped;

  friend bool operator==(const EpisodeOutcome&, const EpisodeOutcome&) = default;
};

struct Observation {
  Image view{kViewSize, kViewSize, kPadding};
  std::pair<double, double> gripper{0.0, 0.0};
  TokenSeq re_tokens{};
  TokenSeq fb_tokens{};
  int t = 0;
  std::string re_text;
  std::string fb_text;  // empty when the teacher stayed silent

  friend bool operator==(const Observation&, const Observation&) = default;
};

struct StepResult {
  Observation observation;
  double reward = 0.0;
  bool done = false;
  Coord gripper;
  std::optional<PieceId> over_piece;
  std::optional<Utterance> feedback;
  std::optional<EpisodeOutcome> outcome;
};

struct EnvConfig {
  PreferenceOrder order;
  bool feedback_enabled = true;
};

// A single episode. reset() loads a task; step() advances it until a piece is
// gripped or kMaxSteps actions have been taken.
class Env {
 public:
  Env() = default;

  // Throws InvalidTask.
  Observation reset(const Task& task, const EnvConfig& config);

  // Throws EpisodeDone once the episode has ended, Error before any reset.
  StepResult step(Action action);

  bool has_episode() const { return board_.has_value(); }
  bool done() const { return outcome_.has_value(); }
  int t() const { return t_; }
  const Task& task() const { return task_; }
  const EnvConfig& config() const { return config_; }
  const Board& board() const { return *board_; }
  const GripperState& gripper() const { return gripper_; }
  const TeacherState& teacher() const { return teacher_; }
  const std::optional<EpisodeOutcome>& outcome() const { return outcome_; }

  // Full board with pieces and gripper trail, as of the last transition.
  const Image& frame() const { return frame_; }

 private:
  Observation observe(const std::optional<Utterance>& fb);

  Task task_;
  EnvConfig config_;
  std::optional<Board> board_;
  GripperState gripper_{Coord{0, 0}};
  TeacherState teacher_;
  int t_ = 0;
  std::optional<EpisodeOutcome> outcome_;
  Image frame_;
};

Coord start_position(int width, int height);

}  // namespace cogrip
