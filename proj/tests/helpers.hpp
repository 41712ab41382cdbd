#pragma once

#include <vector>

#include "cogrip/env.hpp"

namespace cogrip::testing {

inline Task make_task(int size, std::vector<PiecePlacement> pieces, PieceId target = 0) {
  Task t;
  t.id = "hand-0000";
  t.map_size = size;
  t.pieces = std::move(pieces);
  t.target = target;
  t.seed = 1;
  return t;
}

inline PiecePlacement at(Shape s, Color c, Region r, Coord anchor, Rotation rot = Rotation::R0) {
  return {{s, c, r}, anchor, rot};
}

}  // namespace cogrip::testing
