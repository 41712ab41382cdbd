#include <sstream>

#include "cogrip/errors.hpp"
#include "cogrip/oracle.hpp"
#include "cogrip/trajectory.hpp"
#include "doctest.h"

using namespace cogrip;

namespace {

const Task& sample_task() {
  static const Task t = generate_task({Shape::N, Color::Green, Region::TopRight}, 20, 8, 314);
  return t;
}

std::string record(const Task& task, const EnvConfig& config, std::uint64_t seed) {
  std::ostringstream out;
  TrajectoryWriter w(out);
  RandomFollower f(seed);
  run_episode(task, f, config, &w);
  return out.str();
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("digest covers every observation field") {
  Env env;
  const Observation base = env.reset(sample_task(), {});
  const auto d = observation_digest(base);
  CHECK(hex_digest(d).size() == 16);
  CHECK(hex_digest(0x0123456789abcdefULL) == "0123456789abcdef");

  Observation o = base;
  o.view.set(0, 0, Rgb{1, 2, 3});
  CHECK(observation_digest(o) != d);
  o = base;
  o.gripper.first = 0.1;
  CHECK(observation_digest(o) != d);
  o = base;
  o.re_tokens[3] = 7;
  CHECK(observation_digest(o) != d);
  o = base;
  o.fb_tokens[0] = kStartId;
  CHECK(observation_digest(o) != d);
  o = base;
  o.t = 1;
  CHECK(observation_digest(o) != d);
}

TEST_CASE("logged episodes replay byte for byte") {
  for (bool fb : {true, false}) {
    for (const auto& order : PreferenceOrder::all()) {
      const EnvConfig config{order, fb};
      const std::string log = record(sample_task(), config, 5);
      CHECK(log == record(sample_task(), config, 5));
      std::istringstream in(log);
      const Trajectory t = read_trajectory(in);
      CHECK(t.task == sample_task());
      CHECK(t.config.order == order);
      CHECK(t.config.feedback_enabled == fb);
      const ReplayResult r = replay(t);
      CHECK(r.match);
      CHECK(r.steps == static_cast<int>(t.steps.size()));
      CHECK(t.steps.back().done);
    }
  }
}

TEST_CASE("replay reports the first divergent step") {
  const std::string log = record(sample_task(), {}, 9);
  auto lines = lines_of(log);
  REQUIRE(lines.size() > 5);

  SUBCASE("changed action") {
    auto j = nlohmann::json::parse(lines[3]);
    j["action"] = j["action"] == "UP" ? "DOWN" : "UP";
    lines[3] = j.dump();
  }
  SUBCASE("changed reward") {
    auto j = nlohmann::json::parse(lines[3]);
    j["reward"] = 0.5;
    lines[3] = j.dump();
  }
  SUBCASE("changed digest") {
    auto j = nlohmann::json::parse(lines[3]);
    j["obs"] = "0000000000000000";
    lines[3] = j.dump();
  }
  std::string edited;
  for (const auto& l : lines) edited += l + "\n";
  std::istringstream in(edited);
  const ReplayResult r = replay(read_trajectory(in));
  CHECK_FALSE(r.match);
  REQUIRE(r.first_mismatch);
  CHECK(*r.first_mismatch <= 3);
}

TEST_CASE("reset digest mismatch") {
  auto lines = lines_of(record(sample_task(), {}, 2));
  auto header = nlohmann::json::parse(lines[0]);
  header["obs"] = "0000000000000000";
  lines[0] = header.dump();
  std::string edited;
  for (const auto& l : lines) edited += l + "\n";
  std::istringstream in(edited);
  const ReplayResult r = replay(read_trajectory(in));
  CHECK_FALSE(r.match);
  CHECK(r.first_mismatch == 0);
}

TEST_CASE("malformed logs") {
  std::istringstream empty("");
  CHECK_THROWS_AS(read_trajectory(empty), ParseError);
  std::istringstream no_header("{\"t\":1}\n");
  CHECK_THROWS_AS(read_trajectory(no_header), ParseError);
  std::istringstream junk("{{{\n");
  CHECK_THROWS_AS(read_trajectory(junk), ParseError);
}
