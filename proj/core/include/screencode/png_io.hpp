#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "screencode/frame.hpp"

namespace screencode {

// Decodes to 8-bit RGB; index/timestamp are left for the caller to fill.
Frame read_png(const std::filesystem::path& path);

void write_png(const std::filesystem::path& path, const Frame& frame);

// In-memory PNG encoding, used when embedding frames in provider requests.
std::vector<uint8_t> encode_png(const Frame& frame);

}  // namespace screencode
