#include "cogrip/board.hpp"

#include <algorithm>
#include <cctype>

#include "cogrip/errors.hpp"

namespace cogrip {
namespace {

constexpr std::array<std::string_view, 9> kShapeNames = {
    "F", "N", "P", "T", "U", "W", "X", "Y", "Z"};
constexpr std::array<std::string_view, 6> kColorNames = {
    "red", "yellow", "green", "blue", "purple", "brown"};
constexpr std::array<Rgb, 6> kColorRgb = {
    Rgb{255, 0, 0},   Rgb{255, 255, 0}, Rgb{0, 128, 0},
    Rgb{0, 0, 255},   Rgb{128, 0, 128}, Rgb{139, 69, 19}};
constexpr std::array<std::string_view, 8> kRegionNames = {
    "top left",   "top center",   "top right",     "left center",
    "right center", "bottom left", "bottom center", "bottom right"};

// Canonical masks inside a 5x5 box; '#' marks an occupied tile.
using Mask = std::array<std::string_view, 5>;
constexpr std::array<Mask, 9> kMasks = {{
    // F
    {".....", "..##.", ".##..", "..#..", "....."},
    // N
    {"..#..", "..#..", ".##..", ".#...", "....."},
    // P
    {".....", ".##..", ".##..", ".#...", "....."},
    // T
    {".....", ".###.", "..#..", "..#..", "....."},
    // U
    {".....", ".#.#.", ".###.", ".....", "....."},
    // W
    {".....", ".#...", ".##..", "..##.", "....."},
    // X
    {".....", "..#..", ".###.", "..#..", "....."},
    // Y
    {"..#..", ".##..", "..#..", "..#..", "....."},
    // Z
    {".....", ".##..", "..#..", "..##.", "....."},
}};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

int third(int v, int extent) { return (3 * v) / extent; }

}  // namespace

std::string_view to_string(Shape shape) {
  return kShapeNames[static_cast<int>(shape)];
}
std::string_view to_string(Color color) {
  return kColorNames[static_cast<int>(color)];
}
std::string_view to_string(Region region) {
  return kRegionNames[static_cast<int>(region)];
}
Rgb rgb(Color color) { return kColorRgb[static_cast<int>(color)]; }

std::optional<Shape> parse_shape(std::string_view text) {
  if (text.size() != 1) return std::nullopt;
  const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
  for (Shape s : kAllShapes) {
    if (to_string(s)[0] == c) return s;
  }
  return std::nullopt;
}

std::optional<Color> parse_color(std::string_view text) {
  const std::string l = lower(text);
  for (Color c : kAllColors) {
    if (to_string(c) == l) return c;
  }
  return std::nullopt;
}

std::optional<Region> parse_region(std::string_view text) {
  const std::string l = lower(text);
  for (Region r : kAllRegions) {
    if (to_string(r) == l) return r;
  }
  return std::nullopt;
}

std::string to_string(const PieceSymbol& symbol) {
  std::string out;
  out.append(to_string(symbol.color));
  out.push_back(' ');
  out.append(to_string(symbol.shape));
  out.append(" at ");
  out.append(to_string(symbol.region));
  return out;
}

int degrees(Rotation rotation) { return 90 * static_cast<int>(rotation); }

std::optional<Rotation> rotation_from_degrees(int deg) {
  if (deg < 0 || deg % 90 != 0 || deg >= 360) return std::nullopt;
  return static_cast<Rotation>(deg / 90);
}

std::array<Coord, 5> shape_offsets(Shape shape, Rotation rotation) {
  const Mask& mask = kMasks[static_cast<int>(shape)];
  std::array<Coord, 5> out{};
  std::size_t n = 0;
  for (int y = 0; y < 5; ++y) {
    for (int x = 0; x < 5; ++x) {
      if (mask[y][x] != '#') continue;
      Coord c{x - 2, y - 2};
      for (int r = 0; r < static_cast<int>(rotation); ++r) c = {-c.y, c.x};
      out[n++] = c;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------

Board::Board(int width, int height)
    : width_(width),
      height_(height),
      tiles_(static_cast<std::size_t>(width) * height, -1) {
  if (width <= 0 || height <= 0) throw Error("board dimensions must be positive");
}

std::optional<PieceId> Board::at(Coord c) const {
  if (!in_bounds(c)) return std::nullopt;
  const PieceId id = tiles_[static_cast<std::size_t>(c.y) * width_ + c.x];
  if (id < 0) return std::nullopt;
  return id;
}

bool Board::can_place(Shape shape, Coord anchor, Rotation rotation) const {
  for (Coord off : shape_offsets(shape, rotation)) {
    const Coord t{anchor.x + off.x, anchor.y + off.y};
    if (!in_bounds(t) || at(t).has_value()) return false;
  }
  return true;
}

PieceId Board::place(const PieceSymbol& symbol, Coord anchor,
                     Rotation rotation) {
  if (!can_place(symbol.shape, anchor, rotation)) {
    throw PlacementConflict("cannot place " + to_string(symbol) + " at (" +
                            std::to_string(anchor.x) + "," +
                            std::to_string(anchor.y) + ")");
  }
  Piece piece;
  piece.id = static_cast<PieceId>(pieces_.size());
  piece.symbol = symbol;
  piece.anchor = anchor;
  piece.rotation = rotation;
  const auto offsets = shape_offsets(symbol.shape, rotation);
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    piece.tiles[i] = {anchor.x + offsets[i].x, anchor.y + offsets[i].y};
    tiles_[static_cast<std::size_t>(piece.tiles[i].y) * width_ +
           piece.tiles[i].x] = piece.id;
  }
  pieces_.push_back(piece);
  return piece.id;
}

std::size_t Board::occupied_count() const {
  return static_cast<std::size_t>(
      std::count_if(tiles_.begin(), tiles_.end(), [](PieceId id) { return id >= 0; }));
}

Region region_of(Coord center, int width, int height) {
  const int col = std::clamp(third(center.x, width), 0, 2);
  const int row = std::clamp(third(center.y, height), 0, 2);
  switch (row * 3 + col) {
    case 0: return Region::TopLeft;
    case 1: return Region::TopCenter;
    case 2: return Region::TopRight;
    case 3: return Region::LeftCenter;
    case 5: return Region::RightCenter;
    case 6: return Region::BottomLeft;
    case 7: return Region::BottomCenter;
    case 8: return Region::BottomRight;
    default:
      throw CenterRegionError("piece center (" + std::to_string(center.x) +
                              "," + std::to_string(center.y) +
                              ") lies in the center region");
  }
}

Region region_of(const Piece& piece, int width, int height) {
  return region_of(piece.anchor, width, height);
}

CenterRange region_center_range(Region region, int width, int height) {
  // Smallest v with floor(3v / extent) == k is ceil(k * extent / 3).
  auto span = [](int k, int extent) {
    const int lo = (k * extent + 2) / 3;
    const int hi = ((k + 1) * extent + 2) / 3 - 1;
    return std::pair{lo, hi};
  };
  int row = 0;
  int col = 0;
  switch (region) {
    case Region::TopLeft: row = 0; col = 0; break;
    case Region::TopCenter: row = 0; col = 1; break;
    case Region::TopRight: row = 0; col = 2; break;
    case Region::LeftCenter: row = 1; col = 0; break;
    case Region::RightCenter: row = 1; col = 2; break;
    case Region::BottomLeft: row = 2; col = 0; break;
    case Region::BottomCenter: row = 2; col = 1; break;
    case Region::BottomRight: row = 2; col = 2; break;
  }
  const auto [x0, x1] = span(col, width);
  const auto [y0, y1] = span(row, height);
  return {x0, x1, y0, y1};
}

// ---------------------------------------------------------------------------

void GripperState::advance(Coord next) {
  history_[1] = history_[0];
  history_[0] = position_;
  history_size_ = std::min<std::size_t>(history_size_ + 1, 2);
  position_ = next;
}

Image::Image(int width, int height, Rgb fill_color)
    : width_(width),
      height_(height),
      data_(static_cast<std::size_t>(width) * height * 3) {
  fill(fill_color);
}

void Image::fill(Rgb c) {
  for (std::size_t i = 0; i < data_.size(); i += 3) {
    data_[i] = c.r;
    data_[i + 1] = c.g;
    data_[i + 2] = c.b;
  }
}

void render_into(const Board& board, const GripperState& gripper, Image& out) {
  if (out.width() != board.width() || out.height() != board.height()) {
    out = Image(board.width(), board.height());
  } else {
    out.fill(kBackground);
  }
  for (const Piece& p : board.pieces()) {
    const Rgb c = rgb(p.symbol.color);
    for (Coord t : p.tiles) out.set(t.x, t.y, c);
  }
  const auto history = gripper.history();
  for (std::size_t i = history.size(); i > 0; --i) {
    const Coord h = history[i - 1];
    out.set(h.x, h.y, kTrail[i]);
  }
  out.set(gripper.position().x, gripper.position().y, kTrail[0]);
}

Image render(const Board& board, const GripperState& gripper) {
  Image out(board.width(), board.height());
  render_into(board, gripper, out);
  return out;
}

void extract_view_into(const Image& image, Coord center, Image& out) {
  if (out.width() != kViewSize || out.height() != kViewSize) {
    out = Image(kViewSize, kViewSize, kPadding);
  }
  constexpr int half = kViewSize / 2;
  for (int vy = 0; vy < kViewSize; ++vy) {
    const int y = center.y - half + vy;
    for (int vx = 0; vx < kViewSize; ++vx) {
      const int x = center.x - half + vx;
      const bool inside = x >= 0 && y >= 0 && x < image.width() && y < image.height();
      out.set(vx, vy, inside ? image.at(x, y) : kPadding);
    }
  }
}

Image extract_view(const Image& image, Coord center) {
  Image out(kViewSize, kViewSize, kPadding);
  extract_view_into(image, center, out);
  return out;
}

std::pair<double, double> project_coords(Coord position, int width,
                                         int height) {
  return {2.0 * position.x / width - 1.0, 2.0 * position.y / height - 1.0};
}

}  // namespace cogrip
