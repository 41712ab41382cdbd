#include <algorithm>

#include "cogrip/errors.hpp"
#include "cogrip/oracle.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace cogrip;
using cogrip::testing::at;
using cogrip::testing::make_task;

namespace {

const std::vector<Task>& test20() {
  static const std::vector<Task> tasks =
      build_task_set(make_splits(kDefaultSeed), "test20", kDefaultSeed).tasks;
  return tasks;
}

}  // namespace

TEST_CASE("shortest_episode examples") {
  CHECK(shortest_episode(make_task(20, {at(Shape::X, Color::Red, Region::RightCenter, {16, 10})})) == 6);
  CHECK(shortest_episode(make_task(20, {at(Shape::X, Color::Red, Region::RightCenter, {12, 10})})) == 2);
  CHECK(shortest_episode(make_task(20, {at(Shape::X, Color::Red, Region::RightCenter, {10, 10})})) == 1);
  // Pieces in the way are walked over.
  CHECK(shortest_episode(make_task(20, {at(Shape::X, Color::Red, Region::RightCenter, {17, 10}),
                                        at(Shape::X, Color::Blue, Region::RightCenter, {13, 10})})) ==
        7);
}

TEST_CASE("shortest path tie order and unreachable targets") {
  Board b(7, 7);
  const PieceId id = b.place({Shape::X, Color::Red, Region::TopLeft}, {4, 4}, Rotation::R0);
  const auto path = shortest_path(b, {2, 2}, id);
  // Two steps away either way; LEFT, RIGHT, UP, DOWN order prefers RIGHT first.
  CHECK(path.size() == 3);
  CHECK(path.front() == Action::Right);
  CHECK_THROWS_AS(shortest_path(b, {2, 2}, 7), UnreachableTarget);
}

TEST_CASE("oracle follower solves every test task optimally") {
  const auto& tasks = test20();
  for (std::size_t i = 0; i < tasks.size(); i += 7) {
    const Task& t = tasks[i];
    ScriptedFollower f(oracle_actions(t));
    const EpisodeRecord r = run_episode(t, f, {});
    CHECK(r.status == EpisodeStatus::Correct);
    CHECK(r.steps == shortest_episode(t));
    CHECK(r.reward == doctest::Approx(1.0 - 0.9 * (r.steps / 100.0) + 1.0).epsilon(1e-12));
  }
}

TEST_CASE("evaluation harness") {
  const auto& all = test20();
  const std::span<const Task> tasks(all.data(), 60);

  const EvalReport oracle = evaluate(make_follower("shortest-path"), tasks, {});
  CHECK(oracle.n == 60);
  CHECK(oracle.msr == 1.0);
  double sum = 0;
  for (const Task& t : tasks) sum += shortest_episode(t);
  CHECK(oracle.mepl == doctest::Approx(sum / 60.0));

  const EvalReport wait = evaluate(make_follower("wait"), tasks, {});
  CHECK(wait.msr == 0.0);
  CHECK(wait.mepl == 100.0);
  for (const auto& e : wait.episodes) CHECK(e.status == EpisodeStatus::Timeout);

  // Results do not depend on threads or on task order.
  const auto factory = make_follower("feedback");
  const EvalReport one = evaluate(factory, tasks, {}, 1);
  const EvalReport four = evaluate(factory, tasks, {}, 4);
  std::vector<Task> reversed(tasks.begin(), tasks.end());
  std::reverse(reversed.begin(), reversed.end());
  const EvalReport rev = evaluate(factory, reversed, {}, 2);
  CHECK(one.msr == four.msr);
  CHECK(one.mepl == four.mepl);
  CHECK(one.msr == rev.msr);
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    CHECK(one.episodes[i].task_id == tasks[i].id);
    CHECK(one.episodes[i].steps == four.episodes[i].steps);
    CHECK(one.episodes[i].steps == rev.episodes[tasks.size() - 1 - i].steps);
    CHECK(one.episodes[i].status == rev.episodes[tasks.size() - 1 - i].status);
  }

  const auto j = to_json(one);
  CHECK(j["n"] == 60);
  CHECK(j["episodes"].size() == 60);
  CHECK(to_json(one, false).contains("episodes") == false);

  CHECK_THROWS(make_follower("psychic"));
  CHECK(follower_names().size() == 4);
}

TEST_CASE("random follower is seeded per task") {
  const auto& all = test20();
  const std::span<const Task> tasks(all.data(), 20);
  const EvalReport a = evaluate(make_follower("random"), tasks, {}, 1);
  const EvalReport b = evaluate(make_follower("random"), tasks, {}, 3);
  for (std::size_t i = 0; i < tasks.size(); ++i) CHECK(a.episodes[i].steps == b.episodes[i].steps);
}

TEST_CASE("feedback follower grips on positive piece feedback") {
  // One piece per board: entering it draws "Yes this piece".
  int episodes = 0;
  for (Region r : kAllRegions) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const Task t = generate_task({Shape::P, Color::Yellow, r}, 20, 1, seed);
      Env env;
      Observation obs = env.reset(t, {});
      FeedbackFollower f(seed);
      f.begin(obs);
      bool saw_yes = false;
      while (!env.done()) {
        const Action a = f.act(obs);
        if (saw_yes) {
          CHECK(a == Action::Grip);
          saw_yes = false;
        }
        StepResult s = env.step(a);
        saw_yes = s.observation.fb_text == "Yes this piece";
        obs = std::move(s.observation);
      }
      CHECK(env.outcome()->status == EpisodeStatus::Correct);
      ++episodes;
    }
  }
  CHECK(episodes == 40);
}

TEST_CASE("feedback follower leaves a piece it was told is wrong") {
  const auto& tasks = test20();
  int rejections = 0;
  for (std::size_t i = 0; i < 100; ++i) {
    Env env;
    Observation obs = env.reset(tasks[i], {});
    FeedbackFollower f(i);
    f.begin(obs);
    while (!env.done()) {
      const bool told_off = obs.fb_text == "Not this piece";
      const Action a = f.act(obs);
      if (told_off) {
        CHECK(a != Action::Grip);
        ++rejections;
      }
      obs = env.step(a).observation;
    }
  }
  CHECK(rejections > 0);
}

TEST_CASE("feedback follower is deterministic per seed") {
  const Task& t = test20()[11];
  for (bool fb : {false, true}) {
    std::vector<Action> runs[2];
    for (auto& actions : runs) {
      Env env;
      Observation obs = env.reset(t, {PreferenceOrder{}, fb});
      FeedbackFollower f(42);
      f.begin(obs);
      while (!env.done()) {
        actions.push_back(f.act(obs));
        obs = env.step(actions.back()).observation;
      }
    }
    CHECK(runs[0] == runs[1]);
  }
}
