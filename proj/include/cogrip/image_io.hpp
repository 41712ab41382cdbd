#pragma once

#include <filesystem>

#include "cogrip/board.hpp"

namespace cogrip {

// Writes `image` as an 8-bit RGB PNG, each tile scaled to `scale` pixels.
// Throws Error on I/O failure.
void write_png(const std::filesystem::path& path, const Image& image, int scale = 1);

}  // namespace cogrip
