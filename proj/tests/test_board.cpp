#include <algorithm>
#include <map>
#include <set>

#include "cogrip/board.hpp"
#include "cogrip/errors.hpp"
#include "doctest.h"

using namespace cogrip;

namespace {

std::set<Coord> tiles_of(Shape s, Rotation r) {
  const auto offs = shape_offsets(s, r);
  return {offs.begin(), offs.end()};
}

std::set<Coord> normalized(std::set<Coord> tiles) {
  int mx = 99, my = 99;
  for (Coord c : tiles) {
    mx = std::min(mx, c.x);
    my = std::min(my, c.y);
  }
  std::set<Coord> out;
  for (Coord c : tiles) out.insert({c.x - mx, c.y - my});
  return out;
}

bool connected(const std::set<Coord>& tiles) {
  std::set<Coord> seen{*tiles.begin()};
  std::vector<Coord> stack{*tiles.begin()};
  while (!stack.empty()) {
    const Coord c = stack.back();
    stack.pop_back();
    for (Coord n : {Coord{c.x + 1, c.y}, Coord{c.x - 1, c.y}, Coord{c.x, c.y + 1}, Coord{c.x, c.y - 1}}) {
      if (tiles.count(n) && !seen.count(n)) {
        seen.insert(n);
        stack.push_back(n);
      }
    }
  }
  return seen.size() == tiles.size();
}

int count_color(const Image& img, Rgb c) {
  int n = 0;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) n += img.at(x, y) == c ? 1 : 0;
  }
  return n;
}

}  // namespace

TEST_CASE("color table is bit exact") {
  CHECK(rgb(Color::Red) == Rgb{255, 0, 0});
  CHECK(rgb(Color::Yellow) == Rgb{255, 255, 0});
  CHECK(rgb(Color::Green) == Rgb{0, 128, 0});
  CHECK(rgb(Color::Blue) == Rgb{0, 0, 255});
  CHECK(rgb(Color::Purple) == Rgb{128, 0, 128});
  CHECK(rgb(Color::Brown) == Rgb{139, 69, 19});
}

TEST_CASE("names parse back") {
  for (Shape s : kAllShapes) CHECK(parse_shape(to_string(s)) == s);
  for (Color c : kAllColors) CHECK(parse_color(to_string(c)) == c);
  for (Region r : kAllRegions) CHECK(parse_region(to_string(r)) == r);
  CHECK(parse_color("BLUE") == Color::Blue);
  CHECK(parse_region("Top Left") == Region::TopLeft);
  CHECK(parse_shape("x") == Shape::X);
  CHECK_FALSE(parse_shape("I"));
  CHECK_FALSE(parse_region("center"));
  CHECK(kAllRegions.size() == 8);
}

TEST_CASE("masks are the nine free pentominoes") {
  // Rotation orbit sizes and bounding boxes of the standard pieces.
  const std::map<Shape, std::pair<int, std::pair<int, int>>> expected = {
      {Shape::F, {4, {3, 3}}}, {Shape::N, {4, {2, 4}}}, {Shape::P, {4, {2, 3}}},
      {Shape::T, {4, {3, 3}}}, {Shape::U, {4, {3, 2}}}, {Shape::W, {4, {3, 3}}},
      {Shape::X, {1, {3, 3}}}, {Shape::Y, {4, {2, 4}}}, {Shape::Z, {2, {3, 3}}},
  };
  std::set<std::set<Coord>> all_fixed;
  for (Shape s : kAllShapes) {
    CAPTURE(to_string(s));
    std::set<std::set<Coord>> orbit;
    for (Rotation r : kAllRotations) {
      const auto tiles = tiles_of(s, r);
      REQUIRE(tiles.size() == 5);
      CHECK(connected(tiles));
      for (Coord c : tiles) {
        CHECK(std::abs(c.x) <= 2);
        CHECK(std::abs(c.y) <= 2);
      }
      orbit.insert(normalized(tiles));
    }
    CHECK(static_cast<int>(orbit.size()) == expected.at(s).first);
    const auto r0 = normalized(tiles_of(s, Rotation::R0));
    int w = 0, h = 0;
    for (Coord c : r0) {
      w = std::max(w, c.x + 1);
      h = std::max(h, c.y + 1);
    }
    const auto box = expected.at(s).second;
    CHECK(((w == box.first && h == box.second) || (w == box.second && h == box.first)));
    for (const auto& f : orbit) CHECK(all_fixed.insert(f).second);  // no two shapes share a rotation
  }
}

TEST_CASE("rotation is clockwise on screen") {
  // T with its bar on top turns into a T with its bar on the right.
  const auto t0 = tiles_of(Shape::T, Rotation::R0);
  CHECK(t0 == std::set<Coord>{{-1, -1}, {0, -1}, {1, -1}, {0, 0}, {0, 1}});
  const auto t90 = tiles_of(Shape::T, Rotation::R90);
  CHECK(t90 == std::set<Coord>{{1, -1}, {1, 0}, {1, 1}, {0, 0}, {-1, 0}});
  for (Shape s : kAllShapes) {
    // Four quarter turns return to the start.
    auto tiles = tiles_of(s, Rotation::R270);
    std::set<Coord> turned;
    for (Coord c : tiles) turned.insert({-c.y, c.x});
    CHECK(turned == tiles_of(s, Rotation::R0));
  }
  CHECK(rotation_from_degrees(270) == Rotation::R270);
  CHECK_FALSE(rotation_from_degrees(45));
  CHECK(degrees(Rotation::R180) == 180);
}

TEST_CASE("can_place") {
  Board b(20, 20);
  CHECK(b.can_place(Shape::X, {10, 10}, Rotation::R0));
  CHECK_FALSE(b.can_place(Shape::X, {0, 0}, Rotation::R0));
  CHECK(b.can_place(Shape::X, {1, 1}, Rotation::R0));
  CHECK_FALSE(b.can_place(Shape::X, {19, 10}, Rotation::R0));
  b.place({Shape::X, Color::Red, Region::TopLeft}, {10, 10}, Rotation::R0);
  CHECK_FALSE(b.can_place(Shape::X, {10, 10}, Rotation::R0));
  CHECK_FALSE(b.can_place(Shape::X, {11, 10}, Rotation::R0));
  CHECK(b.can_place(Shape::X, {13, 10}, Rotation::R0));
  CHECK_THROWS_AS(b.place({Shape::X, Color::Red, Region::TopLeft}, {10, 10}, Rotation::R0),
                  PlacementConflict);
  CHECK(b.pieces().size() == 1);
}

TEST_CASE("place registers every tile") {
  Board b(20, 20);
  const PieceId id = b.place({Shape::F, Color::Blue, Region::TopLeft}, {5, 5}, Rotation::R90);
  CHECK(b.occupied_count() == 5);
  for (Coord off : shape_offsets(Shape::F, Rotation::R90)) {
    CHECK(b.at({5 + off.x, 5 + off.y}) == id);
  }
  const Piece& p = b.piece(id);
  CHECK(p.anchor == Coord{5, 5});
  CHECK(p.symbol.shape == Shape::F);
  CHECK(b.at({0, 0}) == std::nullopt);
}

TEST_CASE("eight disjoint pieces cover forty tiles") {
  Board b(20, 20);
  int placed = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 2; ++j) {
      b.place({kAllShapes[static_cast<std::size_t>(placed)], Color::Green, Region::TopLeft},
              {2 + 5 * i, 2 + 5 * j}, kAllRotations[static_cast<std::size_t>(placed % 4)]);
      ++placed;
    }
  }
  CHECK(b.occupied_count() == 5u * 8u);
  std::set<PieceId> ids;
  for (int y = 0; y < 20; ++y) {
    for (int x = 0; x < 20; ++x) {
      if (auto id = b.at({x, y})) ids.insert(*id);
    }
  }
  CHECK(ids.size() == 8);
}

TEST_CASE("render of an empty board") {
  Board b(20, 20);
  GripperState g({10, 10});
  const Image img = render(b, g);
  CHECK(img.width() == 20);
  CHECK(img.height() == 20);
  CHECK(img.at(10, 10) == Rgb{200, 200, 200});
  CHECK(count_color(img, kBackground) == 399);
  CHECK(img.bytes().size() == 20u * 20u * 3u);
}

TEST_CASE("trail after two moves") {
  Board b(20, 20);
  GripperState g({10, 10});
  g.advance({11, 10});
  g.advance({12, 10});
  REQUIRE(g.history().size() == 2);
  CHECK(g.history()[0] == Coord{11, 10});
  CHECK(g.history()[1] == Coord{10, 10});
  const Image img = render(b, g);
  CHECK(img.at(12, 10) == Rgb{200, 200, 200});
  CHECK(img.at(11, 10) == Rgb{150, 150, 150});
  CHECK(img.at(10, 10) == Rgb{100, 100, 100});
  CHECK(count_color(img, kBackground) == 397);
  g.advance({13, 10});
  CHECK(g.history().size() == 2);
  CHECK(render(b, g).at(10, 10) == kBackground);
}

TEST_CASE("trail overdraws pieces and the newest wins") {
  Board b(20, 20);
  b.place({Shape::X, Color::Red, Region::TopLeft}, {10, 10}, Rotation::R0);
  GripperState g({10, 10});
  Image img = render(b, g);
  CHECK(img.at(10, 10) == Rgb{200, 200, 200});
  CHECK(img.at(11, 10) == rgb(Color::Red));
  // WAIT leaves the same tile in all three trail slots.
  g.advance({10, 10});
  g.advance({10, 10});
  img = render(b, g);
  CHECK(img.at(10, 10) == Rgb{200, 200, 200});
  CHECK(count_color(img, rgb(Color::Red)) == 4);
}

TEST_CASE("view extraction") {
  Board b(20, 20);
  b.place({Shape::X, Color::Blue, Region::TopLeft}, {2, 2}, Rotation::R0);
  GripperState center({10, 10});
  const Image full = render(b, center);
  const Image v = extract_view(full, {10, 10});
  CHECK(v.width() == kViewSize);
  CHECK(v.height() == kViewSize);
  CHECK(count_color(v, kPadding) == 0);
  CHECK(v.at(5, 5) == Rgb{200, 200, 200});

  const Image corner = extract_view(full, {0, 0});
  // Five padded columns and five padded rows.
  CHECK(count_color(corner, kPadding) == 11 * 11 - 6 * 6);
  for (int i = 0; i < 11; ++i) {
    for (int k = 0; k < 5; ++k) {
      CHECK(corner.at(k, i) == Rgb{0, 0, 0});
      CHECK(corner.at(i, k) == Rgb{0, 0, 0});
    }
  }
  CHECK(corner.at(5 + 2, 5 + 2) == rgb(Color::Blue));
  CHECK(corner.at(5 + 1, 5 + 1) == kBackground);

  const Image far = extract_view(full, {19, 19});
  CHECK(count_color(far, kPadding) == 11 * 11 - 6 * 6);
}

TEST_CASE("coordinate projection") {
  auto p = project_coords({10, 10}, 20, 20);
  CHECK(p.first == 0.0);
  CHECK(p.second == 0.0);
  p = project_coords({0, 0}, 20, 20);
  CHECK(p.first == -1.0);
  CHECK(p.second == -1.0);
  p = project_coords({20, 20}, 20, 20);
  CHECK(p.first == 1.0);
  CHECK(p.second == 1.0);
  p = project_coords({15, 0}, 30, 30);
  CHECK(p.first == 0.0);
  CHECK(p.second == -1.0);
}

TEST_CASE("regions by thirds") {
  CHECK(region_of(Coord{2, 2}, 20, 20) == Region::TopLeft);
  CHECK(region_of(Coord{10, 2}, 20, 20) == Region::TopCenter);
  CHECK(region_of(Coord{18, 10}, 20, 20) == Region::RightCenter);
  CHECK(region_of(Coord{2, 18}, 20, 20) == Region::BottomLeft);
  CHECK(region_of(Coord{18, 18}, 20, 20) == Region::BottomRight);
  CHECK_THROWS_AS(region_of(Coord{10, 10}, 20, 20), CenterRegionError);

  for (int size : {20, 30}) {
    std::map<Region, int> counts;
    for (int y = 0; y < size; ++y) {
      for (int x = 0; x < size; ++x) {
        // Independent statement of the partition: column k holds x with k*W <= 3x < (k+1)*W.
        const int col = 3 * x < size ? 0 : 3 * x < 2 * size ? 1 : 2;
        const int row = 3 * y < size ? 0 : 3 * y < 2 * size ? 1 : 2;
        if (row == 1 && col == 1) {
          CHECK_THROWS_AS(region_of(Coord{x, y}, size, size), CenterRegionError);
          continue;
        }
        const Region r = region_of(Coord{x, y}, size, size);
        ++counts[r];
        const CenterRange range = region_center_range(r, size, size);
        CHECK(x >= range.x_min);
        CHECK(x <= range.x_max);
        CHECK(y >= range.y_min);
        CHECK(y <= range.y_max);
      }
    }
    CHECK(counts.size() == 8);
  }
}
