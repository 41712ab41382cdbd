#include "cogrip/env.hpp"
#include "cogrip/errors.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace cogrip;
using cogrip::testing::at;
using cogrip::testing::make_task;

namespace {

// Blue T top left is the target; two distractors share one property each.
Task scene() {
  return make_task(20, {at(Shape::T, Color::Blue, Region::TopLeft, {3, 3}),
                        at(Shape::T, Color::Red, Region::TopRight, {16, 3}),
                        at(Shape::F, Color::Blue, Region::BottomLeft, {3, 16}),
                        at(Shape::X, Color::Green, Region::RightCenter, {14, 10})});
}

bool all_pad(const TokenSeq& t) {
  for (TokenId id : t) {
    if (id != kPadId) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("reward arithmetic") {
  CHECK(terminal_reward(EpisodeStatus::Correct, 10) == 1.91);
  CHECK(terminal_reward(EpisodeStatus::Wrong, 50) == -0.45);
  CHECK(terminal_reward(EpisodeStatus::Timeout, 100) == -0.9);
  CHECK(terminal_reward(EpisodeStatus::Correct, 1) == 1.991);
  for (int t = 1; t <= 100; ++t) {
    CHECK(terminal_reward(EpisodeStatus::Correct, t) > 0.0);
    CHECK(terminal_reward(EpisodeStatus::Correct, t) < 2.0);
    CHECK(terminal_reward(EpisodeStatus::Wrong, t) < 0.0);
    CHECK(terminal_reward(EpisodeStatus::Wrong, t) >= -0.9);
  }
}

TEST_CASE("action and status names") {
  CHECK(kAllActions.size() == 6);
  for (Action a : kAllActions) CHECK(parse_action(to_string(a)) == a);
  CHECK(to_string(Action::Grip) == "GRIP");
  CHECK_FALSE(parse_action("JUMP"));
  CHECK(parse_status("timeout") == EpisodeStatus::Timeout);
}

TEST_CASE("reset") {
  Env env;
  const Observation obs = env.reset(scene(), {*PreferenceOrder::parse("CPS"), true});
  CHECK(obs.t == 0);
  CHECK(obs.gripper.first == 0.0);
  CHECK(obs.gripper.second == 0.0);
  CHECK(obs.re_text == "Take the blue piece at top left");
  CHECK(obs.re_tokens == tokenize(obs.re_text));
  CHECK(all_pad(obs.fb_tokens));
  CHECK(obs.fb_text.empty());
  CHECK(obs.view.width() == 11);
  CHECK(obs.view.at(5, 5) == Rgb{200, 200, 200});
  CHECK(env.gripper().position() == Coord{10, 10});
  CHECK_FALSE(env.done());
}

TEST_CASE("uniquely blue target under color-first orders") {
  const Task t = make_task(20, {at(Shape::T, Color::Blue, Region::TopLeft, {3, 3}),
                                at(Shape::T, Color::Red, Region::TopRight, {16, 3}),
                                at(Shape::P, Color::Green, Region::BottomLeft, {3, 16})});
  for (const char* code : {"CSP", "CPS"}) {
    Env env;
    CHECK(env.reset(t, {*PreferenceOrder::parse(code), true}).re_text == "Take the blue piece");
  }
}

TEST_CASE("invalid tasks are rejected") {
  Env env;
  CHECK_THROWS_AS(env.reset(make_task(20, {at(Shape::X, Color::Red, Region::TopLeft, {3, 3}),
                                           at(Shape::X, Color::Red, Region::TopLeft, {3, 3})}),
                            {}),
                  InvalidTask);
  CHECK_THROWS_AS(env.reset(make_task(20, {at(Shape::X, Color::Red, Region::TopLeft, {0, 0})}), {}),
                  InvalidTask);
  CHECK_THROWS_AS(env.reset(make_task(20, {at(Shape::X, Color::Red, Region::TopLeft, {3, 3})}, 4), {}),
                  InvalidTask);
  CHECK_THROWS_AS(env.reset(make_task(20, {}), {}), InvalidTask);
  CHECK_THROWS(env.step(Action::Wait));
}

TEST_CASE("movement and clamping") {
  Env env;
  env.reset(scene(), {});
  StepResult r = env.step(Action::Right);
  CHECK(r.gripper == Coord{11, 10});
  CHECK(r.observation.t == 1);
  CHECK(r.reward == 0.0);
  CHECK_FALSE(r.done);
  r = env.step(Action::Up);
  CHECK(r.gripper == Coord{11, 9});
  r = env.step(Action::Down);
  r = env.step(Action::Left);
  CHECK(r.gripper == Coord{10, 10});
  r = env.step(Action::Wait);
  CHECK(r.gripper == Coord{10, 10});
  CHECK(r.observation.t == 5);

  for (int i = 0; i < 12; ++i) r = env.step(Action::Left);
  CHECK(r.gripper.x == 0);
  const int t_before = r.observation.t;
  r = env.step(Action::Left);
  CHECK(r.gripper == Coord{0, 10});
  CHECK(r.observation.t == t_before + 1);
  CHECK(r.observation.gripper.first == -1.0);
  for (int i = 0; i < 25; ++i) r = env.step(Action::Down);
  CHECK(r.gripper == Coord{0, 19});
}

TEST_CASE("grip outcomes") {
  const Task t = scene();
  SUBCASE("off-piece grip is a no-op step") {
    Env env;
    env.reset(t, {});
    const StepResult r = env.step(Action::Grip);
    CHECK_FALSE(r.done);
    CHECK(r.reward == 0.0);
    CHECK(env.t() == 1);
  }
  SUBCASE("correct grip") {
    Env env;
    env.reset(t, {});
    StepResult r;
    // (10,10) to the target tile (4,2): six left, eight up.
    for (int i = 0; i < 6; ++i) r = env.step(Action::Left);
    for (int i = 0; i < 8; ++i) r = env.step(Action::Up);
    REQUIRE(r.over_piece == PieceId{0});
    r = env.step(Action::Grip);
    CHECK(r.done);
    REQUIRE(r.outcome);
    CHECK(r.outcome->status == EpisodeStatus::Correct);
    CHECK(r.outcome->steps == 15);
    CHECK(r.reward == terminal_reward(EpisodeStatus::Correct, 15));
    CHECK(r.outcome->gripped == PieceId{0});
    CHECK_THROWS_AS(env.step(Action::Wait), EpisodeDone);
  }
  SUBCASE("wrong grip") {
    Env env;
    env.reset(t, {});
    StepResult r;
    for (int i = 0; i < 3; ++i) r = env.step(Action::Right);
    REQUIRE(r.over_piece == PieceId{3});
    r = env.step(Action::Grip);
    CHECK(r.done);
    CHECK(r.outcome->status == EpisodeStatus::Wrong);
    CHECK(r.reward == terminal_reward(EpisodeStatus::Wrong, 4));
    CHECK(r.reward < 0.0);
  }
  SUBCASE("timeout") {
    Env env;
    env.reset(t, {});
    StepResult r;
    int nonzero = 0;
    for (int i = 0; i < kMaxSteps; ++i) {
      REQUIRE_FALSE(env.done());
      r = env.step(Action::Wait);
      nonzero += r.reward != 0.0 ? 1 : 0;
    }
    CHECK(r.done);
    CHECK(nonzero == 1);
    CHECK(r.outcome->status == EpisodeStatus::Timeout);
    CHECK(r.outcome->steps == 100);
    CHECK(r.reward == -0.9);
    CHECK_FALSE(r.outcome->gripped);
  }
}

TEST_CASE("feedback disabled keeps fb tokens empty") {
  const Task t = scene();
  Env on, off;
  on.reset(t, {PreferenceOrder{}, true});
  off.reset(t, {PreferenceOrder{}, false});
  const Action script[] = {Action::Right, Action::Right, Action::Right, Action::Right,
                           Action::Wait,  Action::Wait,  Action::Wait,  Action::Wait,
                           Action::Wait,  Action::Wait,  Action::Wait,  Action::Left};
  int spoken = 0;
  for (Action a : script) {
    StepResult a_on = on.step(a);
    StepResult a_off = off.step(a);
    CHECK(all_pad(a_off.observation.fb_tokens));
    CHECK_FALSE(a_off.feedback);
    spoken += a_on.feedback ? 1 : 0;
    // Everything else is identical.
    a_on.observation.fb_tokens = a_off.observation.fb_tokens;
    a_on.observation.fb_text = a_off.observation.fb_text;
    CHECK(a_on.observation == a_off.observation);
    CHECK(a_on.reward == a_off.reward);
  }
  CHECK(spoken > 0);
}

TEST_CASE("teacher speaks through the observation") {
  Env env;
  env.reset(scene(), {});
  StepResult r;
  for (int i = 0; i < 3; ++i) r = env.step(Action::Right);
  REQUIRE(r.feedback);
  CHECK(r.observation.fb_text == "Not this piece");
  CHECK(r.observation.fb_tokens == tokenize("Not this piece"));
  r = env.step(Action::Left);
  r = env.step(Action::Left);
  CHECK(r.observation.fb_text.empty());
}
