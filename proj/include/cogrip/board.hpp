#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cogrip {

// ---------------------------------------------------------------------------
// Symbolic piece properties
// ---------------------------------------------------------------------------

enum class Shape : std::uint8_t { F, N, P, T, U, W, X, Y, Z };

inline constexpr std::array<Shape, 9> kAllShapes = {
    Shape::F, Shape::N, Shape::P, Shape::T, Shape::U,
    Shape::W, Shape::X, Shape::Y, Shape::Z};

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend constexpr auto operator<=>(const Rgb&, const Rgb&) = default;
};

inline constexpr Rgb kBackground{255, 255, 255};
inline constexpr Rgb kPadding{0, 0, 0};
// Gripper trail, newest first: current position, t-1, t-2.
inline constexpr std::array<Rgb, 3> kTrail = {
    Rgb{200, 200, 200}, Rgb{150, 150, 150}, Rgb{100, 100, 100}};

enum class Color : std::uint8_t { Red, Yellow, Green, Blue, Purple, Brown };

inline constexpr std::array<Color, 6> kAllColors = {
    Color::Red, Color::Yellow, Color::Green,
    Color::Blue, Color::Purple, Color::Brown};

enum class Region : std::uint8_t {
  TopLeft,
  TopCenter,
  TopRight,
  LeftCenter,
  RightCenter,
  BottomLeft,
  BottomCenter,
  BottomRight,
};

inline constexpr std::array<Region, 8> kAllRegions = {
    Region::TopLeft,    Region::TopCenter,    Region::TopRight,
    Region::LeftCenter, Region::RightCenter,  Region::BottomLeft,
    Region::BottomCenter, Region::BottomRight};

std::string_view to_string(Shape shape);
std::string_view to_string(Color color);
std::string_view to_string(Region region);
Rgb rgb(Color color);

// Case-insensitive for colors and regions; shapes accept either case.
std::optional<Shape> parse_shape(std::string_view text);
std::optional<Color> parse_color(std::string_view text);
std::optional<Region> parse_region(std::string_view text);

struct PieceSymbol {
  Shape shape = Shape::F;
  Color color = Color::Red;
  Region region = Region::TopLeft;
  friend constexpr bool operator==(const PieceSymbol&,
                                   const PieceSymbol&) = default;
};

std::string to_string(const PieceSymbol& symbol);

// ---------------------------------------------------------------------------
// Geometry
// ---------------------------------------------------------------------------

struct Coord {
  int x = 0;
  int y = 0;
  friend constexpr auto operator<=>(const Coord&, const Coord&) = default;
};

// Squared euclidean distance; exact on integer tiles.
constexpr int squared_distance(Coord a, Coord b) {
  const int dx = a.x - b.x;
  const int dy = a.y - b.y;
  return dx * dx + dy * dy;
}

enum class Rotation : std::uint8_t { R0, R90, R180, R270 };

inline constexpr std::array<Rotation, 4> kAllRotations = {
    Rotation::R0, Rotation::R90, Rotation::R180, Rotation::R270};

int degrees(Rotation rotation);
std::optional<Rotation> rotation_from_degrees(int degrees);

// The five tiles of a shape relative to the center of its 5x5 box, after a
// clockwise rotation (screen coordinates, y grows downward). No mirroring.
std::array<Coord, 5> shape_offsets(Shape shape, Rotation rotation);

using PieceId = int;

struct Piece {
  PieceId id = 0;
  PieceSymbol symbol;
  Coord anchor;  // center of the 5x5 box
  Rotation rotation = Rotation::R0;
  std::array<Coord, 5> tiles;
};

// ---------------------------------------------------------------------------
// Board
// ---------------------------------------------------------------------------

class Board {
 public:
  Board(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }

  bool in_bounds(Coord c) const {
    return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_;
  }

  std::optional<PieceId> at(Coord c) const;

  // True iff all five tiles land inside the board on empty tiles.
  bool can_place(Shape shape, Coord anchor, Rotation rotation) const;

  // Throws PlacementConflict when can_place does not hold.
  PieceId place(const PieceSymbol& symbol, Coord anchor, Rotation rotation);

  const Piece& piece(PieceId id) const { return pieces_.at(id); }
  std::span<const Piece> pieces() const { return pieces_; }
  std::size_t occupied_count() const;

 private:
  int width_;
  int height_;
  std::vector<PieceId> tiles_;  // row-major, -1 for empty
  std::vector<Piece> pieces_;
};

// Region of the board holding the piece's box center: a 3x3 partition into
// thirds, col = floor(3x / W), row = floor(3y / H). Throws CenterRegionError
// for the middle cell.
Region region_of(Coord center, int width, int height);
Region region_of(const Piece& piece, int width, int height);

// Inclusive bounds of box centers that map to `region`.
struct CenterRange {
  int x_min, x_max, y_min, y_max;
};
CenterRange region_center_range(Region region, int width, int height);

// ---------------------------------------------------------------------------
// Gripper
// ---------------------------------------------------------------------------

class GripperState {
 public:
  explicit GripperState(Coord start) : position_(start) {}

  Coord position() const { return position_; }
  // Previous positions, newest first; at most two.
  std::span<const Coord> history() const {
    return std::span<const Coord>(history_.data(), history_size_);
  }

  // Records the current position in the history and moves to `next`.
  void advance(Coord next);

 private:
  Coord position_;
  std::array<Coord, 2> history_{};
  std::size_t history_size_ = 0;
};

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

// Row-major RGB image, 8 bits per channel.
class Image {
 public:
  Image() = default;
  Image(int width, int height, Rgb fill = kBackground);

  int width() const { return width_; }
  int height() const { return height_; }

  Rgb at(int x, int y) const {
    const std::size_t i = index(x, y);
    return {data_[i], data_[i + 1], data_[i + 2]};
  }
  void set(int x, int y, Rgb c) {
    const std::size_t i = index(x, y);
    data_[i] = c.r;
    data_[i + 1] = c.g;
    data_[i + 2] = c.b;
  }
  void fill(Rgb c);

  std::span<const std::uint8_t> bytes() const { return data_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t index(int x, int y) const {
    return (static_cast<std::size_t>(y) * width_ + x) * 3;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

inline constexpr int kViewSize = 11;

// White background, pieces in their colors, then the gripper trail from
// oldest to newest so that the current position is drawn on top.
Image render(const Board& board, const GripperState& gripper);
void render_into(const Board& board, const GripperState& gripper, Image& out);

// 11x11 crop centered on `center`; cells outside the image are black.
Image extract_view(const Image& image, Coord center);
void extract_view_into(const Image& image, Coord center, Image& out);

// Affine map of [0,W]x[0,H] onto [-1,1]^2: x' = 2x/W - 1.
std::pair<double, double> project_coords(Coord position, int width,
                                         int height);

}  // namespace cogrip
