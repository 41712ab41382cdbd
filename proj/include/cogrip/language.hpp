#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cogrip/board.hpp"

namespace cogrip {

// Teacher thresholds: euclidean distance from the last feedback anchor, and
// the number of silent steps before the initial expression is repeated.
inline constexpr int kFeedbackDistance = 3;
inline constexpr int kFeedbackSilence = 6;

// ---------------------------------------------------------------------------
// Vocabulary
// ---------------------------------------------------------------------------

using TokenId = std::int32_t;
inline constexpr std::size_t kMaxTokens = 11;
using TokenSeq = std::array<TokenId, kMaxTokens>;

inline constexpr TokenId kPadId = 0;
inline constexpr TokenId kStartId = 1;
inline constexpr TokenId kEndId = 2;
inline constexpr TokenId kUnknownId = 3;

// Stable, numbered word list. Index == token id.
std::span<const std::string_view> vocabulary();
std::optional<TokenId> token_id(std::string_view word);  // case-insensitive

// Writes "<id> <word>" lines.
void write_vocabulary(std::ostream& out);

// <s> words <e>, right-padded with <pad>. Empty text yields all <pad>.
// Unknown words become <unk>; more than nine words are truncated.
TokenSeq tokenize(std::string_view text);
// Inverse of tokenize up to padding and capitalization of the first word.
std::string detokenize(const TokenSeq& tokens);

// ---------------------------------------------------------------------------
// Properties and preference orders
// ---------------------------------------------------------------------------

enum class PropertyKind : std::uint8_t { Color, Shape, Position };

class Property {
 public:
  explicit Property(Color c) : value_(c) {}
  explicit Property(Shape s) : value_(s) {}
  explicit Property(Region r) : value_(r) {}

  PropertyKind kind() const { return static_cast<PropertyKind>(value_.index()); }
  const std::variant<Color, Shape, Region>& value() const { return value_; }

  bool matches(const PieceSymbol& symbol) const;

  friend bool operator==(const Property&, const Property&) = default;

 private:
  std::variant<Color, Shape, Region> value_;
};

Property property_of(const PieceSymbol& symbol, PropertyKind kind);
std::string to_string(const Property& property);

class PreferenceOrder {
 public:
  // Parses "CSP" or "C-S-P" (case-insensitive).
  static std::optional<PreferenceOrder> parse(std::string_view text);
  static std::array<PreferenceOrder, 6> all();

  PreferenceOrder() = default;

  std::span<const PropertyKind, 3> kinds() const { return kinds_; }
  std::string code() const;  // "PCS"
  std::string name() const;  // "P-C-S"

  friend bool operator==(const PreferenceOrder&, const PreferenceOrder&) = default;

 private:
  explicit PreferenceOrder(std::array<PropertyKind, 3> kinds) : kinds_(kinds) {}

  std::array<PropertyKind, 3> kinds_ = {PropertyKind::Color, PropertyKind::Shape,
                                        PropertyKind::Position};
};

// ---------------------------------------------------------------------------
// Incremental Algorithm
// ---------------------------------------------------------------------------

struct IaResult {
  // Selected properties in the order they were added.
  std::vector<Property> properties;
  // Every distractor was ruled out.
  bool distinguishing = false;
  // No property excluded anything; all three target properties were used.
  bool fallback = false;
};

IaResult ia_select(const PieceSymbol& target,
                   std::span<const PieceSymbol> distractors,
                   const PreferenceOrder& order);

// ---------------------------------------------------------------------------
// Utterances
// ---------------------------------------------------------------------------

enum class UtteranceKind : std::uint8_t {
  InitialRe,
  DirectionFeedback,
  PieceFeedback,
  RepeatedRe,
};

std::string_view to_string(UtteranceKind kind);

struct Utterance {
  UtteranceKind kind = UtteranceKind::InitialRe;
  std::string text;
  TokenSeq tokens{};

  friend bool operator==(const Utterance&, const Utterance&) = default;
};

// Picks the 1-, 2- or 3-property template. Surface order is always color,
// shape, position. Throws EmptyPropertiesError on an empty set.
Utterance realize(std::span<const Property> properties);

enum class FeedbackPhrase : std::uint8_t {
  YesThisWay,
  NotThisWay,
  YesThisPiece,
  NotThisPiece,
};

const Utterance& feedback_utterance(FeedbackPhrase phrase);

// ---------------------------------------------------------------------------
// Teacher
// ---------------------------------------------------------------------------

struct TeacherState {
  PreferenceOrder order;
  Utterance initial_re;
  Coord last_feedback_position;
  int silence = 0;
  bool feedback_enabled = true;
};

// Runs the Incremental Algorithm for `target` against every other piece on
// the board and realizes the initial expression.
TeacherState make_teacher(const Board& board, PieceId target,
                          const PreferenceOrder& order, bool feedback_enabled,
                          Coord gripper_start);

// One teacher turn after the follower's action has been applied. Piece
// feedback wins over direction feedback; the repeated expression fires only
// when neither triggers and the silence counter has reached the limit.
std::optional<Utterance> feedback(TeacherState& state, Coord gripper,
                                  std::optional<PieceId> over_piece,
                                  const Piece& target);

}  // namespace cogrip
