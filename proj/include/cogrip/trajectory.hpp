#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cogrip/env.hpp"
#include "json.hpp"

namespace cogrip {

inline constexpr int kTrajectoryFormatVersion = 1;

// FNV-1a over the canonical byte encoding of an observation: view bytes,
// projected coordinates (IEEE-754 bits, little endian), both token
// sequences (int32, little endian) and the step index.
std::uint64_t observation_digest(const Observation& obs);
std::string hex_digest(std::uint64_t digest);

struct TrajectoryStep {
  int t = 0;
  Action action = Action::Wait;
  Coord gripper;
  std::string feedback;
  double reward = 0.0;
  bool done = false;
  std::string obs;  // hex digest of the observation after the step
};

struct Trajectory {
  Task task;
  EnvConfig config;
  std::string initial_obs;  // digest of the reset observation
  std::vector<TrajectoryStep> steps;
  std::vector<std::string> lines;  // the step lines exactly as read
};

nlohmann::json header_record(const Task& task, const EnvConfig& config,
                             const Observation& initial);
nlohmann::json step_record(Action action, const StepResult& result);

// Line-delimited log: one header line, then one line per step.
class TrajectoryWriter {
 public:
  explicit TrajectoryWriter(std::ostream& out) : out_(out) {}

  void begin(const Task& task, const EnvConfig& config, const Observation& initial);
  void step(Action action, const StepResult& result);

 private:
  std::ostream& out_;
};

// Throws ParseError.
Trajectory read_trajectory(std::istream& in);

struct ReplayResult {
  bool match = true;
  int steps = 0;
  std::optional<int> first_mismatch;  // 0 for the reset observation
  std::string detail;
};

// Re-executes the logged actions on a fresh env and compares every
// re-serialized step line byte for byte with the logged one.
ReplayResult replay(const Trajectory& trajectory);

}  // namespace cogrip
