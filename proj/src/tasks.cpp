#include "cogrip/tasks.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <istream>
#include <ostream>
#include <mutex>
#include <thread>
#include <tuple>

#include "cogrip/errors.hpp"
#include "cogrip/rng.hpp"

namespace cogrip {

using nlohmann::json;

Board build_board(const Task& task) {
  if (task.map_size <= 0) throw InvalidTask("task " + task.id + ": bad map size");
  if (task.pieces.empty()) throw InvalidTask("task " + task.id + ": no pieces");
  if (task.target < 0 || static_cast<std::size_t>(task.target) >= task.pieces.size()) {
    throw InvalidTask("task " + task.id + ": target id out of range");
  }
  Board board(task.map_size, task.map_size);
  for (const PiecePlacement& p : task.pieces) {
    try {
      board.place(p.symbol, p.anchor, p.rotation);
    } catch (const PlacementConflict& e) {
      throw InvalidTask("task " + task.id + ": " + e.what());
    }
  }
  return board;
}

// ---------------------------------------------------------------------------

std::vector<PieceSymbol> enumerate_symbols() {
  std::vector<PieceSymbol> out;
  out.reserve(432);
  for (Shape s : kAllShapes) {
    for (Color c : kAllColors) {
      for (Region r : kAllRegions) out.push_back({s, c, r});
    }
  }
  std::sort(out.begin(), out.end(), [](const PieceSymbol& a, const PieceSymbol& b) {
    return std::tuple(to_string(a.shape), to_string(a.color), to_string(a.region)) <
           std::tuple(to_string(b.shape), to_string(b.color), to_string(b.region));
  });
  return out;
}

int symbol_rank(const PieceSymbol& symbol) {
  static const std::vector<PieceSymbol> kAll = enumerate_symbols();
  const auto it = std::find(kAll.begin(), kAll.end(), symbol);
  return static_cast<int>(it - kAll.begin());
}

bool covers_all_attributes(std::span<const PieceSymbol> symbols) {
  std::array<bool, 9> shapes{};
  std::array<bool, 6> colors{};
  std::array<bool, 8> regions{};
  for (const PieceSymbol& s : symbols) {
    shapes[static_cast<int>(s.shape)] = true;
    colors[static_cast<int>(s.color)] = true;
    regions[static_cast<int>(s.region)] = true;
  }
  auto all = [](const auto& a) { return std::all_of(a.begin(), a.end(), [](bool b) { return b; }); };
  return all(shapes) && all(colors) && all(regions);
}

SymbolSplits make_splits(std::uint64_t seed) {
  Rng rng(derive_seed(seed, "splits", 0));
  const std::vector<PieceSymbol> all = enumerate_symbols();

  std::array<Color, 9> held_out_color{};
  for (Shape s : kAllShapes) {
    held_out_color[static_cast<int>(s)] = kAllColors[rng.below(kAllColors.size())];
  }

  SymbolSplits splits;
  std::vector<PieceSymbol> rest;
  for (const PieceSymbol& sym : all) {
    if (held_out_color[static_cast<int>(sym.shape)] == sym.color) {
      splits.holdout.push_back(sym);
    } else {
      rest.push_back(sym);
    }
  }

  auto by_rank = [](const PieceSymbol& a, const PieceSymbol& b) {
    return symbol_rank(a) < symbol_rank(b);
  };
  while (true) {
    rng.shuffle(std::span<PieceSymbol>(rest));
    const auto val_end = rest.begin() + kValidationSymbols;
    const auto test_end = val_end + kTestSymbols;
    splits.validation.assign(rest.begin(), val_end);
    splits.test.assign(val_end, test_end);
    splits.train.assign(test_end, rest.end());
    if (covers_all_attributes(splits.validation) && covers_all_attributes(splits.test) &&
        covers_all_attributes(splits.train)) {
      break;
    }
  }
  std::sort(splits.train.begin(), splits.train.end(), by_rank);
  std::sort(splits.validation.begin(), splits.validation.end(), by_rank);
  std::sort(splits.test.begin(), splits.test.end(), by_rank);
  std::sort(splits.holdout.begin(), splits.holdout.end(), by_rank);
  return splits;
}

// ---------------------------------------------------------------------------

namespace {

CenterRange clipped_range(Region region, int size) {
  CenterRange r = region_center_range(region, size, size);
  r.x_min = std::max(r.x_min, 0);
  r.y_min = std::max(r.y_min, 0);
  r.x_max = std::min(r.x_max, size - 1);
  r.y_max = std::min(r.y_max, size - 1);
  return r;
}

Rotation random_rotation(Rng& rng) {
  return kAllRotations[rng.below(kAllRotations.size())];
}

}  // namespace

Task generate_task(const PieceSymbol& target, int map_size, int num_pieces,
                   std::uint64_t seed) {
  if (num_pieces < 1) throw GenerationFailure("a task needs at least one piece");
  Rng rng(seed);
  Task task;
  task.map_size = map_size;
  task.seed = seed;
  task.target = 0;
  Board board(map_size, map_size);

  {
    const Rotation rot = random_rotation(rng);
    const CenterRange r = clipped_range(target.region, map_size);
    std::vector<Coord> legal;
    for (int y = r.y_min; y <= r.y_max; ++y) {
      for (int x = r.x_min; x <= r.x_max; ++x) {
        if (board.can_place(target.shape, {x, y}, rot)) legal.push_back({x, y});
      }
    }
    if (legal.empty()) {
      throw GenerationFailure("no legal anchor for target " + to_string(target));
    }
    const Coord anchor = legal[rng.below(legal.size())];
    board.place(target, anchor, rot);
    task.pieces.push_back({target, anchor, rot});
  }

  static const std::vector<PieceSymbol> kAll = enumerate_symbols();
  while (static_cast<int>(task.pieces.size()) < num_pieces) {
    bool placed = false;
    for (int draw = 0; draw < kPieceResamples && !placed; ++draw) {
      const PieceSymbol sym = kAll[rng.below(kAll.size())];
      const Rotation rot = random_rotation(rng);
      const CenterRange r = clipped_range(sym.region, map_size);
      if (r.x_min > r.x_max || r.y_min > r.y_max) continue;
      for (int attempt = 0; attempt < kPlacementAttempts; ++attempt) {
        const Coord anchor{rng.uniform_int(r.x_min, r.x_max),
                           rng.uniform_int(r.y_min, r.y_max)};
        if (board.can_place(sym.shape, anchor, rot)) {
          board.place(sym, anchor, rot);
          task.pieces.push_back({sym, anchor, rot});
          placed = true;
          break;
        }
      }
    }
    if (!placed) {
      throw GenerationFailure("could not place piece " +
                              std::to_string(task.pieces.size() + 1) + " of " +
                              std::to_string(num_pieces));
    }
  }
  return task;
}

// ---------------------------------------------------------------------------

namespace {

struct SetSpec {
  std::string_view name;
  std::string_view split;
  std::vector<TaskGroup> groups;
};

const std::vector<SetSpec>& set_specs() {
  static const std::vector<SetSpec> kSpecs = {
      {"train", "train", {{20, 4, 1650}, {20, 8, 1650}}},
      {"val", "validation", {{20, 4, 150}, {20, 8, 150}}},
      {"test20", "test", {{20, 4, 360}, {20, 8, 360}}},
      {"test30", "test", {{30, 4, 180}, {30, 8, 180}, {30, 12, 180}, {30, 18, 180}}},
      {"holdout", "holdout", {{20, 4, 432}, {20, 8, 432}}},
  };
  return kSpecs;
}

const std::vector<PieceSymbol>& split_symbols(const SymbolSplits& splits,
                                              std::string_view split) {
  if (split == "train") return splits.train;
  if (split == "validation") return splits.validation;
  if (split == "test") return splits.test;
  return splits.holdout;
}

std::string task_id(std::string_view set, std::size_t index) {
  std::string num = std::to_string(index);
  if (num.size() < 4) num.insert(0, 4 - num.size(), '0');
  return std::string(set) + "-" + num;
}

}  // namespace

std::vector<std::string> task_set_names() {
  std::vector<std::string> out;
  for (const SetSpec& s : set_specs()) out.emplace_back(s.name);
  return out;
}

TaskSet build_task_set(const SymbolSplits& splits, std::string_view name,
                       std::uint64_t seed, unsigned threads) {
  const auto& specs = set_specs();
  const auto it = std::find_if(specs.begin(), specs.end(),
                               [&](const SetSpec& s) { return s.name == name; });
  if (it == specs.end()) throw Error("unknown task set: " + std::string(name));

  TaskSet set;
  set.name = std::string(it->name);
  set.split = std::string(it->split);
  set.groups = it->groups;
  const std::vector<PieceSymbol>& symbols = split_symbols(splits, it->split);

  struct Job {
    const PieceSymbol* target;
    int map_size;
    int num_pieces;
  };
  std::vector<Job> jobs;
  for (const TaskGroup& g : it->groups) {
    for (int i = 0; i < g.count; ++i) {
      jobs.push_back({&symbols[static_cast<std::size_t>(i) % symbols.size()], g.map_size,
                      g.num_pieces});
    }
  }
  set.tasks.resize(jobs.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        Task t = generate_task(*jobs[i].target, jobs[i].map_size, jobs[i].num_pieces,
                               derive_seed(seed, set.name, i));
        t.id = task_id(set.name, i);
        set.tasks[i] = std::move(t);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return set;
}

Benchmark build_benchmark(const SymbolSplits& splits, std::uint64_t seed, unsigned threads) {
  Benchmark b;
  b.seed = seed;
  b.splits = splits;
  for (const SetSpec& s : set_specs()) {
    b.sets.push_back(build_task_set(splits, s.name, seed, threads));
  }
  return b;
}

const TaskSet& Benchmark::set(std::string_view name) const {
  for (const TaskSet& s : sets) {
    if (s.name == name) return s;
  }
  throw Error("unknown task set: " + std::string(name));
}

// ---------------------------------------------------------------------------

json to_json(const PieceSymbol& symbol) {
  return json{{"shape", to_string(symbol.shape)},
              {"color", to_string(symbol.color)},
              {"region", to_string(symbol.region)}};
}

PieceSymbol symbol_from_json(const json& j) {
  try {
    const auto shape = parse_shape(j.at("shape").get<std::string>());
    const auto color = parse_color(j.at("color").get<std::string>());
    const auto region = parse_region(j.at("region").get<std::string>());
    if (!shape || !color || !region) throw ParseError("bad piece symbol: " + j.dump());
    return {*shape, *color, *region};
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad piece symbol: ") + e.what());
  }
}

json to_json(const Task& task) {
  json pieces = json::array();
  for (const PiecePlacement& p : task.pieces) {
    json jp = to_json(p.symbol);
    jp["anchor"] = {p.anchor.x, p.anchor.y};
    jp["rotation"] = degrees(p.rotation);
    pieces.push_back(std::move(jp));
  }
  return json{{"v", kTaskFormatVersion},
              {"id", task.id},
              {"map_size", task.map_size},
              {"pieces", std::move(pieces)},
              {"target", task.target},
              {"seed", task.seed}};
}

Task task_from_json(const json& j) {
  try {
    if (j.value("v", kTaskFormatVersion) != kTaskFormatVersion) {
      throw ParseError("unsupported task format version");
    }
    Task t;
    t.id = j.value("id", std::string());
    t.map_size = j.at("map_size").get<int>();
    t.target = j.at("target").get<int>();
    t.seed = j.value("seed", std::uint64_t{0});
    for (const json& jp : j.at("pieces")) {
      PiecePlacement p;
      p.symbol = symbol_from_json(jp);
      const auto& a = jp.at("anchor");
      p.anchor = {a.at(0).get<int>(), a.at(1).get<int>()};
      const auto rot = rotation_from_degrees(jp.value("rotation", 0));
      if (!rot) throw ParseError("bad rotation in task " + t.id);
      p.rotation = *rot;
      t.pieces.push_back(p);
    }
    return t;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad task record: ") + e.what());
  }
}

void write_tasks(std::ostream& out, std::span<const Task> tasks) {
  for (const Task& t : tasks) out << to_json(t).dump() << '\n';
}

std::vector<Task> read_tasks(std::istream& in) {
  std::vector<Task> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("malformed task line: ") + e.what());
    }
    out.push_back(task_from_json(j));
  }
  return out;
}

json manifest(const Benchmark& benchmark) {
  auto symbols = [](const std::vector<PieceSymbol>& v) {
    json arr = json::array();
    for (const PieceSymbol& s : v) arr.push_back(to_json(s));
    return arr;
  };
  json splits = {
      {"train", {{"count", benchmark.splits.train.size()}, {"symbols", symbols(benchmark.splits.train)}}},
      {"validation", {{"count", benchmark.splits.validation.size()}, {"symbols", symbols(benchmark.splits.validation)}}},
      {"test", {{"count", benchmark.splits.test.size()}, {"symbols", symbols(benchmark.splits.test)}}},
      {"holdout", {{"count", benchmark.splits.holdout.size()}, {"symbols", symbols(benchmark.splits.holdout)}}},
  };
  json sets = json::object();
  for (const TaskSet& s : benchmark.sets) {
    json groups = json::array();
    for (const TaskGroup& g : s.groups) {
      groups.push_back({{"map_size", g.map_size}, {"pieces", g.num_pieces}, {"count", g.count}});
    }
    sets[s.name] = {{"file", s.name + ".jsonl"},
                    {"split", s.split},
                    {"count", s.tasks.size()},
                    {"groups", std::move(groups)}};
  }
  return json{{"format", "cogrip-benchmark"},
              {"version", kTaskFormatVersion},
              {"seed", benchmark.seed},
              {"splits", std::move(splits)},
              {"task_sets", std::move(sets)}};
}

}  // namespace cogrip
