#include "cogrip/language.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>
#include <sstream>

#include "cogrip/errors.hpp"

namespace cogrip {
namespace {

// "no" is the listed template word, "not" the form the feedback templates
// actually use. Both keep their own id so the list stays at 33 entries.
constexpr std::array<std::string_view, 33> kWords = {
    "<pad>", "<s>",   "<e>",    "<unk>",                                   //
    "take",  "the",   "piece",  "at",    "yes",  "no",  "not", "this", "way",  //
    "red",   "yellow", "green", "blue",  "purple", "brown",                //
    "F",     "N",     "P",      "T",     "U",    "W",   "X",   "Y",    "Z",    //
    "left",  "right", "top",    "bottom", "center"};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

Utterance make_utterance(UtteranceKind kind, std::string text) {
  Utterance u;
  u.kind = kind;
  u.tokens = tokenize(text);
  u.text = std::move(text);
  return u;
}

}  // namespace

std::span<const std::string_view> vocabulary() { return kWords; }

std::optional<TokenId> token_id(std::string_view word) {
  for (std::size_t i = 0; i < kWords.size(); ++i) {
    if (iequals(kWords[i], word)) return static_cast<TokenId>(i);
  }
  return std::nullopt;
}

void write_vocabulary(std::ostream& out) {
  for (std::size_t i = 0; i < kWords.size(); ++i) {
    out << i << ' ' << kWords[i] << '\n';
  }
}

TokenSeq tokenize(std::string_view text) {
  TokenSeq seq;
  seq.fill(kPadId);
  std::size_t n = 0;
  std::size_t pos = 0;
  bool any = false;
  while (pos < text.size()) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos >= text.size()) break;
    std::size_t end = pos;
    while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
    if (!any) {
      seq[n++] = kStartId;
      any = true;
    }
    if (n < kMaxTokens - 1) {
      seq[n++] = token_id(text.substr(pos, end - pos)).value_or(kUnknownId);
    }
    pos = end;
  }
  if (any) seq[n] = kEndId;
  return seq;
}

std::string detokenize(const TokenSeq& tokens) {
  std::string out;
  for (TokenId id : tokens) {
    if (id == kPadId || id == kStartId) continue;
    if (id == kEndId) break;
    const std::string_view word =
        (id >= 0 && static_cast<std::size_t>(id) < kWords.size()) ? kWords[id]
                                                                   : kWords[kUnknownId];
    if (!out.empty()) out.push_back(' ');
    out.append(word);
  }
  if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

// ---------------------------------------------------------------------------

bool Property::matches(const PieceSymbol& symbol) const {
  switch (kind()) {
    case PropertyKind::Color: return std::get<Color>(value_) == symbol.color;
    case PropertyKind::Shape: return std::get<Shape>(value_) == symbol.shape;
    case PropertyKind::Position: return std::get<Region>(value_) == symbol.region;
  }
  return false;
}

Property property_of(const PieceSymbol& symbol, PropertyKind kind) {
  switch (kind) {
    case PropertyKind::Color: return Property(symbol.color);
    case PropertyKind::Shape: return Property(symbol.shape);
    case PropertyKind::Position: break;
  }
  return Property(symbol.region);
}

std::string to_string(const Property& property) {
  return std::visit([](auto v) { return std::string(to_string(v)); },
                    property.value());
}

std::optional<PreferenceOrder> PreferenceOrder::parse(std::string_view text) {
  std::array<PropertyKind, 3> kinds{};
  std::size_t n = 0;
  for (char ch : text) {
    if (ch == '-') continue;
    if (n == 3) return std::nullopt;
    switch (std::toupper(static_cast<unsigned char>(ch))) {
      case 'C': kinds[n++] = PropertyKind::Color; break;
      case 'S': kinds[n++] = PropertyKind::Shape; break;
      case 'P': kinds[n++] = PropertyKind::Position; break;
      default: return std::nullopt;
    }
  }
  if (n != 3 || kinds[0] == kinds[1] || kinds[0] == kinds[2] || kinds[1] == kinds[2]) {
    return std::nullopt;
  }
  return PreferenceOrder(kinds);
}

std::array<PreferenceOrder, 6> PreferenceOrder::all() {
  return {*parse("CPS"), *parse("SPC"), *parse("PCS"),
          *parse("PSC"), *parse("CSP"), *parse("SCP")};
}

std::string PreferenceOrder::code() const {
  std::string out;
  for (PropertyKind k : kinds_) {
    out.push_back(k == PropertyKind::Color ? 'C' : k == PropertyKind::Shape ? 'S' : 'P');
  }
  return out;
}

std::string PreferenceOrder::name() const {
  const std::string c = code();
  return {c[0], '-', c[1], '-', c[2]};
}

// ---------------------------------------------------------------------------

IaResult ia_select(const PieceSymbol& target,
                   std::span<const PieceSymbol> distractors,
                   const PreferenceOrder& order) {
  IaResult result;
  std::vector<PieceSymbol> remaining(distractors.begin(), distractors.end());
  for (PropertyKind kind : order.kinds()) {
    const Property prop = property_of(target, kind);
    const auto excluded = std::partition(
        remaining.begin(), remaining.end(),
        [&](const PieceSymbol& m) { return prop.matches(m); });
    if (excluded != remaining.end()) {
      result.properties.push_back(prop);
      remaining.erase(excluded, remaining.end());
    }
  }
  result.distinguishing = remaining.empty();
  if (result.properties.empty()) {
    result.fallback = true;
    for (PropertyKind kind : order.kinds()) {
      result.properties.push_back(property_of(target, kind));
    }
  }
  return result;
}

std::string_view to_string(UtteranceKind kind) {
  switch (kind) {
    case UtteranceKind::InitialRe: return "initial_re";
    case UtteranceKind::DirectionFeedback: return "direction_feedback";
    case UtteranceKind::PieceFeedback: return "piece_feedback";
    case UtteranceKind::RepeatedRe: return "repeated_re";
  }
  return "unknown";
}

Utterance realize(std::span<const Property> properties) {
  if (properties.empty()) throw EmptyPropertiesError("no properties to realize");
  std::optional<std::string> color, shape, position;
  for (const Property& p : properties) {
    std::optional<std::string>* slot = nullptr;
    switch (p.kind()) {
      case PropertyKind::Color: slot = &color; break;
      case PropertyKind::Shape: slot = &shape; break;
      case PropertyKind::Position: slot = &position; break;
    }
    if (slot->has_value()) throw Error("duplicate property kind in expression");
    *slot = to_string(p);
  }

  // Take the [color] {shape | piece} [at position]
  std::string text = "Take the";
  if (color) text += " " + *color;
  text += " " + shape.value_or("piece");
  if (position) text += " at " + *position;
  return make_utterance(UtteranceKind::InitialRe, std::move(text));
}

const Utterance& feedback_utterance(FeedbackPhrase phrase) {
  static const std::array<Utterance, 4> kPhrases = {
      make_utterance(UtteranceKind::DirectionFeedback, "Yes this way"),
      make_utterance(UtteranceKind::DirectionFeedback, "Not this way"),
      make_utterance(UtteranceKind::PieceFeedback, "Yes this piece"),
      make_utterance(UtteranceKind::PieceFeedback, "Not this piece"),
  };
  return kPhrases[static_cast<int>(phrase)];
}

// ---------------------------------------------------------------------------

TeacherState make_teacher(const Board& board, PieceId target,
                          const PreferenceOrder& order, bool feedback_enabled,
                          Coord gripper_start) {
  std::vector<PieceSymbol> distractors;
  for (const Piece& p : board.pieces()) {
    if (p.id != target) distractors.push_back(p.symbol);
  }
  const IaResult ia = ia_select(board.piece(target).symbol, distractors, order);
  TeacherState state;
  state.order = order;
  state.initial_re = realize(ia.properties);
  state.last_feedback_position = gripper_start;
  state.silence = 0;
  state.feedback_enabled = feedback_enabled;
  return state;
}

std::optional<Utterance> feedback(TeacherState& state, Coord gripper,
                                  std::optional<PieceId> over_piece,
                                  const Piece& target) {
  if (!state.feedback_enabled) return std::nullopt;

  std::optional<Utterance> out;
  if (over_piece) {
    out = feedback_utterance(*over_piece == target.id ? FeedbackPhrase::YesThisPiece
                                                      : FeedbackPhrase::NotThisPiece);
  } else if (squared_distance(gripper, state.last_feedback_position) >
             kFeedbackDistance * kFeedbackDistance) {
    const bool closer = squared_distance(gripper, target.anchor) <
                        squared_distance(state.last_feedback_position, target.anchor);
    out = feedback_utterance(closer ? FeedbackPhrase::YesThisWay
                                    : FeedbackPhrase::NotThisWay);
  } else if (state.silence >= kFeedbackSilence) {
    out = state.initial_re;
    out->kind = UtteranceKind::RepeatedRe;
  }

  if (out) {
    state.last_feedback_position = gripper;
    state.silence = 0;
  } else {
    ++state.silence;
  }
  return out;
}

}  // namespace cogrip
