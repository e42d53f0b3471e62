#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "efnet/field.hpp"

namespace efnet {

/// 28 lines of 28 comma-separated values, shortest round-trip decimal form.
std::string grid_to_csv(const Grid& grid);
Grid grid_from_csv(const std::string& text);

/// Binary 8-bit PGM (P5), min mapped to 0 and max to 255. A constant grid maps to all zeros.
std::vector<std::uint8_t> grid_to_pgm(const Grid& grid);

void write_text_file(const std::filesystem::path& path, const std::string& text);
void write_binary_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

}  // namespace efnet
