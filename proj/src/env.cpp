#include "cogrip/env.hpp"

#include <algorithm>

#include "cogrip/errors.hpp"

namespace cogrip {
namespace {

constexpr std::array<std::string_view, 6> kActionNames = {
    "LEFT", "RIGHT", "UP", "DOWN", "WAIT", "GRIP"};
constexpr std::array<std::string_view, 4> kStatusNames = {
    "running", "correct", "wrong", "timeout"};

}  // namespace

std::string_view to_string(Action action) {
  return kActionNames[static_cast<int>(action)];
}

std::optional<Action> parse_action(std::string_view text) {
  for (Action a : kAllActions) {
    if (to_string(a) == text) return a;
  }
  return std::nullopt;
}

std::string_view to_string(EpisodeStatus status) {
  return kStatusNames[static_cast<int>(status)];
}

std::optional<EpisodeStatus> parse_status(std::string_view text) {
  for (std::size_t i = 0; i < kStatusNames.size(); ++i) {
    if (kStatusNames[i] == text) return static_cast<EpisodeStatus>(i);
  }
  return std::nullopt;
}

double terminal_reward(EpisodeStatus status, int steps) {
  int milli = 1000 - 9 * steps;
  milli += status == EpisodeStatus::Correct ? 1000 : -1000;
  return static_cast<double>(milli) / 1000.0;
}

Coord start_position(int width, int height) { return {width / 2, height / 2}; }

Observation Env::reset(const Task& task, const EnvConfig& config) {
  Board board = build_board(task);
  task_ = task;
  config_ = config;
  board_ = std::move(board);
  gripper_ = GripperState(start_position(board_->width(), board_->height()));
  teacher_ = make_teacher(*board_, task.target, config.order, config.feedback_enabled,
                          gripper_.position());
  t_ = 0;
  outcome_.reset();
  return observe(std::nullopt);
}

StepResult Env::step(Action action) {
  if (!board_) throw Error("step called before reset");
  if (outcome_) throw EpisodeDone("episode " + task_.id + " has already ended");

  Coord next = gripper_.position();
  switch (action) {
    case Action::Left: --next.x; break;
    case Action::Right: ++next.x; break;
    case Action::Up: --next.y; break;
    case Action::Down: ++next.y; break;
    case Action::Wait:
    case Action::Grip: break;
  }
  next.x = std::clamp(next.x, 0, board_->width() - 1);
  next.y = std::clamp(next.y, 0, board_->height() - 1);
  gripper_.advance(next);
  ++t_;

  StepResult result;
  result.gripper = next;
  result.over_piece = board_->at(next);

  if (action == Action::Grip && result.over_piece) {
    const auto status = *result.over_piece == task_.target ? EpisodeStatus::Correct
                                                           : EpisodeStatus::Wrong;
    outcome_ = EpisodeOutcome{status, t_, terminal_reward(status, t_), result.over_piece};
  } else if (t_ >= kMaxSteps) {
    outcome_ = EpisodeOutcome{EpisodeStatus::Timeout, t_,
                              terminal_reward(EpisodeStatus::Timeout, t_), std::nullopt};
  }

  result.feedback = feedback(teacher_, next, result.over_piece, board_->piece(task_.target));
  result.observation = observe(result.feedback);
  result.done = outcome_.has_value();
  result.reward = result.done ? outcome_->reward : 0.0;
  result.outcome = outcome_;
  return result;
}

Observation Env::observe(const std::optional<Utterance>& fb) {
  render_into(*board_, gripper_, frame_);
  Observation obs;
  extract_view_into(frame_, gripper_.position(), obs.view);
  obs.gripper = project_coords(gripper_.position(), board_->width(), board_->height());
  obs.re_tokens = teacher_.initial_re.tokens;
  obs.re_text = teacher_.initial_re.text;
  if (fb) {
    obs.fb_tokens = fb->tokens;
    obs.fb_text = fb->text;
  } else {
    obs.fb_tokens.fill(kPadId);
  }
  obs.t = t_;
  return obs;
}

}  // namespace cogrip
