#include "cogrip/trajectory.hpp"

#include <bit>
#include <cstring>
#include <istream>
#include <ostream>

#include "cogrip/errors.hpp"

namespace cogrip {

using nlohmann::json;

namespace {

class Fnv1a {
 public:
  void byte(std::uint8_t b) {
    h_ ^= b;
    h_ *= 0x100000001b3ULL;
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) byte(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) byte(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

}  // namespace

std::uint64_t observation_digest(const Observation& obs) {
  Fnv1a h;
  for (std::uint8_t b : obs.view.bytes()) h.byte(b);
  h.u64(std::bit_cast<std::uint64_t>(obs.gripper.first));
  h.u64(std::bit_cast<std::uint64_t>(obs.gripper.second));
  for (TokenId id : obs.re_tokens) h.u32(static_cast<std::uint32_t>(id));
  for (TokenId id : obs.fb_tokens) h.u32(static_cast<std::uint32_t>(id));
  h.u32(static_cast<std::uint32_t>(obs.t));
  return h.value();
}

std::string hex_digest(std::uint64_t digest) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = kHex[digest & 0xf];
    digest >>= 4;
  }
  return out;
}

json header_record(const Task& task, const EnvConfig& config, const Observation& initial) {
  return json{{"type", "header"},
              {"v", kTrajectoryFormatVersion},
              {"task", to_json(task)},
              {"order", config.order.code()},
              {"feedback", config.feedback_enabled},
              {"re", initial.re_text},
              {"obs", hex_digest(observation_digest(initial))}};
}

json step_record(Action action, const StepResult& result) {
  return json{{"t", result.observation.t},
              {"action", to_string(action)},
              {"gripper", {result.gripper.x, result.gripper.y}},
              {"feedback", result.observation.fb_text},
              {"reward", result.reward},
              {"done", result.done},
              {"obs", hex_digest(observation_digest(result.observation))}};
}

void TrajectoryWriter::begin(const Task& task, const EnvConfig& config,
                             const Observation& initial) {
  out_ << header_record(task, config, initial).dump() << '\n';
}

void TrajectoryWriter::step(Action action, const StepResult& result) {
  out_ << step_record(action, result).dump() << '\n';
}

Trajectory read_trajectory(std::istream& in) {
  Trajectory traj;
  std::string line;
  bool have_header = false;
  try {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const json j = json::parse(line);
      if (!have_header) {
        if (j.value("type", "") != "header") throw ParseError("trajectory must start with a header");
        if (j.value("v", 0) != kTrajectoryFormatVersion) {
          throw ParseError("unsupported trajectory version");
        }
        traj.task = task_from_json(j.at("task"));
        const auto order = PreferenceOrder::parse(j.at("order").get<std::string>());
        if (!order) throw ParseError("bad preference order in trajectory header");
        traj.config.order = *order;
        traj.config.feedback_enabled = j.at("feedback").get<bool>();
        traj.initial_obs = j.at("obs").get<std::string>();
        have_header = true;
        continue;
      }
      TrajectoryStep s;
      s.t = j.at("t").get<int>();
      const auto action = parse_action(j.at("action").get<std::string>());
      if (!action) throw ParseError("bad action in trajectory: " + line);
      s.action = *action;
      s.gripper = {j.at("gripper").at(0).get<int>(), j.at("gripper").at(1).get<int>()};
      s.feedback = j.at("feedback").get<std::string>();
      s.reward = j.at("reward").get<double>();
      s.done = j.at("done").get<bool>();
      s.obs = j.at("obs").get<std::string>();
      traj.steps.push_back(std::move(s));
      traj.lines.push_back(line);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed trajectory: ") + e.what());
  }
  if (!have_header) throw ParseError("empty trajectory");
  return traj;
}

ReplayResult replay(const Trajectory& trajectory) {
  ReplayResult result;
  Env env;
  const Observation first = env.reset(trajectory.task, trajectory.config);
  if (hex_digest(observation_digest(first)) != trajectory.initial_obs) {
    result.match = false;
    result.first_mismatch = 0;
    result.detail = "reset observation differs";
    return result;
  }
  for (std::size_t i = 0; i < trajectory.steps.size(); ++i) {
    const TrajectoryStep& logged = trajectory.steps[i];
    if (env.done()) {
      result.match = false;
      result.first_mismatch = logged.t;
      result.detail = "log continues after the episode ended";
      return result;
    }
    const StepResult r = env.step(logged.action);
    ++result.steps;
    const std::string line = step_record(logged.action, r).dump();
    if (line != trajectory.lines[i]) {
      result.match = false;
      result.first_mismatch = logged.t;
      result.detail = "expected " + trajectory.lines[i] + "\n     got " + line;
      return result;
    }
  }
  return result;
}

}  // namespace cogrip
