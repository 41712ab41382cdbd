#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cogrip/board.hpp"
#include "json.hpp"

namespace cogrip {

inline constexpr std::uint64_t kDefaultSeed = 49184;
inline constexpr int kTaskFormatVersion = 1;
inline constexpr int kPlacementAttempts = 100;
inline constexpr int kPieceResamples = 100;

struct PiecePlacement {
  PieceSymbol symbol;
  Coord anchor;
  Rotation rotation = Rotation::R0;
  friend bool operator==(const PiecePlacement&, const PiecePlacement&) = default;
};

// A scene: square board, pieces in placement order, and the target's index.
struct Task {
  std::string id;
  int map_size = 20;
  std::vector<PiecePlacement> pieces;
  PieceId target = 0;
  std::uint64_t seed = 0;
  friend bool operator==(const Task&, const Task&) = default;
};

// Places every piece on a fresh board. Throws InvalidTask on overlaps,
// out-of-bounds tiles or a missing target.
Board build_board(const Task& task);

// ---------------------------------------------------------------------------
// Symbols and splits
// ---------------------------------------------------------------------------

// All 432 symbols, ordered by (shape, color, region) with each component
// compared by its name.
std::vector<PieceSymbol> enumerate_symbols();

// Position of a symbol in enumerate_symbols().
int symbol_rank(const PieceSymbol& symbol);

struct SymbolSplits {
  std::vector<PieceSymbol> train;
  std::vector<PieceSymbol> validation;
  std::vector<PieceSymbol> test;
  std::vector<PieceSymbol> holdout;
};

inline constexpr std::size_t kTrainSymbols = 275;
inline constexpr std::size_t kValidationSymbols = 25;
inline constexpr std::size_t kTestSymbols = 60;
inline constexpr std::size_t kHoldoutSymbols = 72;

// Holds out one color per shape (9 pairs x 8 regions), then partitions the
// remaining 360 symbols at random until every split sees every color, shape
// and region. Each split is returned in enumeration order.
SymbolSplits make_splits(std::uint64_t seed);

// True when `symbols` contain every shape, color and region.
bool covers_all_attributes(std::span<const PieceSymbol> symbols);

// ---------------------------------------------------------------------------
// Task generation
// ---------------------------------------------------------------------------

// Target first, at a uniformly drawn legal anchor whose box center lies in
// the target's region; then distractors drawn uniformly from all symbols.
// Each distractor gets up to kPlacementAttempts anchors before its symbol is
// re-drawn; after kPieceResamples draws GenerationFailure is thrown.
Task generate_task(const PieceSymbol& target, int map_size, int num_pieces,
                   std::uint64_t seed);

struct TaskGroup {
  int map_size;
  int num_pieces;
  int count;
};

struct TaskSet {
  std::string name;
  std::string split;  // symbol split the targets come from
  std::vector<TaskGroup> groups;
  std::vector<Task> tasks;
};

struct Benchmark {
  std::uint64_t seed = kDefaultSeed;
  SymbolSplits splits;
  std::vector<TaskSet> sets;  // train, val, test20, test30, holdout

  const TaskSet& set(std::string_view name) const;
};

// Per group, targets cycle through the split's symbols in order, so every
// symbol is used equally often (to within one). Tasks are seeded by index,
// so the result does not depend on `threads` (0 = hardware concurrency).
Benchmark build_benchmark(const SymbolSplits& splits, std::uint64_t seed,
                          unsigned threads = 1);

// Generates a single named set only.
TaskSet build_task_set(const SymbolSplits& splits, std::string_view name,
                       std::uint64_t seed, unsigned threads = 1);

std::vector<std::string> task_set_names();

// ---------------------------------------------------------------------------
// Serialization (one JSON object per line)
// ---------------------------------------------------------------------------

nlohmann::json to_json(const PieceSymbol& symbol);
PieceSymbol symbol_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Task& task);
Task task_from_json(const nlohmann::json& j);  // throws ParseError

void write_tasks(std::ostream& out, std::span<const Task> tasks);
std::vector<Task> read_tasks(std::istream& in);

nlohmann::json manifest(const Benchmark& benchmark);

}  // namespace cogrip
