#include <algorithm>
#include <cmath>
#include <deque>

#include "cogrip/oracle.hpp"

namespace cogrip {
namespace {

constexpr std::array<Action, 4> kDirectionActions = {Action::Right, Action::Down,
                                                     Action::Left, Action::Up};
constexpr std::array<Coord, 4> kDirectionOffsets = {Coord{1, 0}, Coord{0, 1},
                                                    Coord{-1, 0}, Coord{0, -1}};

Coord plus(Coord a, Coord b) { return {a.x + b.x, a.y + b.y}; }

bool says(const Observation& obs, FeedbackPhrase phrase) {
  return obs.fb_tokens == feedback_utterance(phrase).tokens;
}

bool is_trail(Rgb c) { return std::find(kTrail.begin(), kTrail.end(), c) != kTrail.end(); }

// Third of [-1, 1] a projected coordinate falls into (0, 1 or 2).
int projected_third(double v) {
  return std::clamp(static_cast<int>(std::floor(1.5 * (v + 1.0) + 1e-9)), 0, 2);
}

std::vector<Coord> normalized(std::vector<Coord> tiles) {
  int min_x = tiles[0].x;
  int min_y = tiles[0].y;
  for (Coord c : tiles) {
    min_x = std::min(min_x, c.x);
    min_y = std::min(min_y, c.y);
  }
  for (Coord& c : tiles) c = {c.x - min_x, c.y - min_y};
  std::sort(tiles.begin(), tiles.end());
  return tiles;
}

}  // namespace

FeedbackFollower::FeedbackFollower(std::uint64_t seed)
    : rng_(seed),
      map_(static_cast<std::size_t>(kGrid) * kGrid, kUnknown),
      rejected_(map_.size(), false) {}

std::int8_t& FeedbackFollower::cell(Coord rel) {
  static std::int8_t sink;
  const int x = rel.x + kOrigin;
  const int y = rel.y + kOrigin;
  if (x < 0 || y < 0 || x >= kGrid || y >= kGrid) {
    sink = kWall;
    return sink;
  }
  return map_[static_cast<std::size_t>(y) * kGrid + x];
}

std::int8_t FeedbackFollower::cell_at(Coord rel) const {
  const int x = rel.x + kOrigin;
  const int y = rel.y + kOrigin;
  if (x < 0 || y < 0 || x >= kGrid || y >= kGrid) return kWall;
  return map_[static_cast<std::size_t>(y) * kGrid + x];
}

void FeedbackFollower::begin(const Observation& first) {
  std::fill(map_.begin(), map_.end(), kUnknown);
  std::fill(rejected_.begin(), rejected_.end(), false);
  want_color_.reset();
  want_shape_.reset();
  want_region_.reset();

  // Ground the expression: "Take the [color] [shape|piece] [at position]".
  const std::string text = detokenize(first.re_tokens);
  std::vector<std::string> words;
  for (std::size_t pos = 0; pos < text.size();) {
    const std::size_t end = std::min(text.find(' ', pos), text.size());
    words.push_back(text.substr(pos, end - pos));
    pos = end + 1;
  }
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (words[i] == "at") {
      std::string rest;
      for (std::size_t k = i + 1; k < words.size(); ++k) rest += (rest.empty() ? "" : " ") + words[k];
      want_region_ = parse_region(rest);
      break;
    }
    if (auto c = parse_color(words[i])) want_color_ = c;
    if (auto s = parse_shape(words[i])) want_shape_ = s;
  }

  direction_ = static_cast<int>(rng_.below(4));
  rel_ = {0, 0};
  last_coords_ = first.gripper;
  last_move_.reset();
  tile_step_ = 0.1;
  remember(first);
}

void FeedbackFollower::update_position(const Observation& obs) {
  if (last_move_) {
    const int d = static_cast<int>(
        std::find(kDirectionActions.begin(), kDirectionActions.end(), *last_move_) -
        kDirectionActions.begin());
    const Coord off = kDirectionOffsets[d];
    const double delta = off.x != 0 ? obs.gripper.first - last_coords_.first
                                    : obs.gripper.second - last_coords_.second;
    if (std::abs(delta) > 1e-12) {
      rel_ = plus(rel_, off);
      tile_step_ = std::abs(delta);
    } else {
      cell(plus(rel_, off)) = kWall;
    }
  }
  last_coords_ = obs.gripper;
}

void FeedbackFollower::remember(const Observation& obs) {
  constexpr int half = kViewSize / 2;
  for (int vy = 0; vy < kViewSize; ++vy) {
    for (int vx = 0; vx < kViewSize; ++vx) {
      const Rgb c = obs.view.at(vx, vy);
      if (is_trail(c)) continue;
      std::int8_t& m = cell({rel_.x + vx - half, rel_.y + vy - half});
      if (c == kPadding) {
        m = kWall;
      } else if (c == kBackground) {
        m = kEmpty;
      } else {
        for (Color col : kAllColors) {
          if (rgb(col) == c) m = static_cast<std::int8_t>(static_cast<int>(col) + 1);
        }
      }
    }
  }
}

std::vector<Coord> FeedbackFollower::component(Coord rel) const {
  const std::int8_t code = cell_at(rel);
  std::vector<Coord> out;
  if (code < 1 || code > 6) return out;
  std::vector<Coord> stack{rel};
  while (!stack.empty()) {
    const Coord c = stack.back();
    stack.pop_back();
    if (cell_at(c) != code || std::find(out.begin(), out.end(), c) != out.end()) continue;
    out.push_back(c);
    for (Coord off : kDirectionOffsets) stack.push_back(plus(c, off));
  }
  return out;
}

std::pair<double, double> FeedbackFollower::projected(Coord rel,
                                                      const Observation& obs) const {
  return {obs.gripper.first + (rel.x - rel_.x) * tile_step_,
          obs.gripper.second + (rel.y - rel_.y) * tile_step_};
}

std::optional<Region> FeedbackFollower::region_at(double x, double y) const {
  switch (projected_third(y) * 3 + projected_third(x)) {
    case 0: return Region::TopLeft;
    case 1: return Region::TopCenter;
    case 2: return Region::TopRight;
    case 3: return Region::LeftCenter;
    case 5: return Region::RightCenter;
    case 6: return Region::BottomLeft;
    case 7: return Region::BottomCenter;
    case 8: return Region::BottomRight;
    default: return std::nullopt;
  }
}

bool FeedbackFollower::matches(const std::vector<Coord>& tiles, const Observation& obs) const {
  if (tiles.empty()) return false;
  const std::int8_t code = cell_at(tiles[0]);
  if (want_color_ && code != static_cast<int>(*want_color_) + 1) return false;

  if (want_shape_) {
    bool closed = true;
    for (Coord t : tiles) {
      for (Coord off : kDirectionOffsets) {
        if (cell_at(plus(t, off)) == kUnknown) closed = false;
      }
    }
    if (closed && tiles.size() < 5) return false;
    if (closed && tiles.size() == 5) {
      const auto seen = normalized(tiles);
      bool any = false;
      for (Rotation r : kAllRotations) {
        const auto offs = shape_offsets(*want_shape_, r);
        if (normalized({offs.begin(), offs.end()}) == seen) any = true;
      }
      if (!any) return false;
    }
  }

  if (want_region_) {
    int min_x = tiles[0].x, max_x = tiles[0].x, min_y = tiles[0].y, max_y = tiles[0].y;
    for (Coord t : tiles) {
      min_x = std::min(min_x, t.x);
      max_x = std::max(max_x, t.x);
      min_y = std::min(min_y, t.y);
      max_y = std::max(max_y, t.y);
    }
    const auto a = projected({min_x, min_y}, obs);
    const auto b = projected({max_x, max_y}, obs);
    if (region_at(0.5 * (a.first + b.first), 0.5 * (a.second + b.second)) != want_region_) {
      return false;
    }
  }
  return true;
}

Action FeedbackFollower::toward(Coord target) const {
  const int dx = target.x - rel_.x;
  const int dy = target.y - rel_.y;
  if (dx != 0 && std::abs(dx) >= std::abs(dy)) return dx > 0 ? Action::Right : Action::Left;
  return dy > 0 ? Action::Down : Action::Up;
}

Action FeedbackFollower::move(int direction) {
  direction_ = direction;
  last_move_ = kDirectionActions[direction];
  return *last_move_;
}

Action FeedbackFollower::act(const Observation& obs) {
  update_position(obs);
  remember(obs);
  last_move_.reset();

  auto rejected = [&](Coord c) {
    const int x = c.x + kOrigin;
    const int y = c.y + kOrigin;
    return x >= 0 && y >= 0 && x < kGrid && y < kGrid &&
           rejected_[static_cast<std::size_t>(y) * kGrid + x];
  };
  auto reject = [&](Coord c) {
    const int x = c.x + kOrigin;
    const int y = c.y + kOrigin;
    if (x >= 0 && y >= 0 && x < kGrid && y < kGrid) {
      rejected_[static_cast<std::size_t>(y) * kGrid + x] = true;
    }
  };

  const std::int8_t here = cell_at(rel_);
  const bool on_piece = here >= 1 && here <= 6;
  const bool heard = obs.fb_tokens[0] != kPadId;

  if (says(obs, FeedbackPhrase::YesThisPiece)) return Action::Grip;
  if (says(obs, FeedbackPhrase::NotThisPiece)) {
    for (Coord c : component(rel_)) reject(c);
    reject(rel_);
  } else if (says(obs, FeedbackPhrase::NotThisWay)) {
    direction_ = (direction_ + 1) % 4;
  } else if (heard && obs.fb_tokens == obs.re_tokens) {
    direction_ = static_cast<int>(rng_.below(4));
  }

  if (on_piece && !heard && !rejected(rel_) && matches(component(rel_), obs)) {
    return Action::Grip;
  }

  // Nearest remembered tile of a piece that fits the expression.
  std::optional<Coord> best;
  int best_dist = 0;
  std::vector<bool> visited(map_.size(), false);
  for (int y = 0; y < kGrid; ++y) {
    for (int x = 0; x < kGrid; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * kGrid + x;
      if (visited[i] || map_[i] < 1 || map_[i] > 6) continue;
      const auto tiles = component({x - kOrigin, y - kOrigin});
      for (Coord t : tiles) visited[static_cast<std::size_t>(t.y + kOrigin) * kGrid + t.x + kOrigin] = true;
      if (rejected(tiles[0]) || !matches(tiles, obs)) continue;
      for (Coord t : tiles) {
        if (t == rel_) continue;
        const int d = std::abs(t.x - rel_.x) + std::abs(t.y - rel_.y);
        if (!best || d < best_dist) {
          best = t;
          best_dist = d;
        }
      }
    }
  }
  if (best) {
    const Action a = toward(*best);
    return move(static_cast<int>(
        std::find(kDirectionActions.begin(), kDirectionActions.end(), a) -
        kDirectionActions.begin()));
  }

  if (want_region_ && region_at(obs.gripper.first, obs.gripper.second) != want_region_) {
    // Head for the middle of the named third.
    const int idx = static_cast<int>(*want_region_);
    static constexpr std::array<Coord, 8> kRowCol = {
        Coord{0, 0}, Coord{1, 0}, Coord{2, 0}, Coord{0, 1},
        Coord{2, 1}, Coord{0, 2}, Coord{1, 2}, Coord{2, 2}};
    const double gx = -1.0 + (2.0 * kRowCol[idx].x + 1.0) / 3.0;
    const double gy = -1.0 + (2.0 * kRowCol[idx].y + 1.0) / 3.0;
    const double dx = gx - obs.gripper.first;
    const double dy = gy - obs.gripper.second;
    if (std::abs(dx) >= std::abs(dy)) return move(dx > 0 ? 0 : 2);
    return move(dy > 0 ? 1 : 3);
  }

  auto blocked = [&](int d) {
    const Coord next = plus(rel_, kDirectionOffsets[d]);
    if (cell_at(next) == kWall) return true;
    if (want_region_) {
      const auto p = projected(next, obs);
      return region_at(p.first, p.second) != want_region_;
    }
    return false;
  };
  if (blocked(direction_)) {
    std::array<int, 4> open{};
    std::size_t n = 0;
    for (int d = 0; d < 4; ++d) {
      if (!blocked(d)) open[n++] = d;
    }
    if (n > 0) {
      direction_ = open[rng_.below(n)];
    } else {
      for (int d = 0; d < 4; ++d) {
        if (cell_at(plus(rel_, kDirectionOffsets[d])) != kWall) open[n++] = d;
      }
      if (n > 0) direction_ = open[rng_.below(n)];
    }
  }
  return move(direction_);
}

}  // namespace cogrip
