#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "fdv/imagery.hpp"

namespace fdv {

// 8-bit PNG. Gray, gray+alpha and RGBA inputs are converted to RGB.
RgbImage read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const RgbImage& image);

struct ScalarGrid {
  int width = 0;
  int height = 0;
  std::vector<double> values;  // row-major
};

// Comma-separated floats, one image row per line, no header.
ScalarGrid read_csv_grid(const std::filesystem::path& path);
void write_csv_grid(const std::filesystem::path& path, const ScalarGrid& grid);

// Shortest representation that parses back to the same double.
std::string format_double(double value);

// Reads a whole file into a string; throws io error naming the path.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

// 64-bit FNV-1a, used for manifest checksums and config hashes.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

}  // namespace fdv
