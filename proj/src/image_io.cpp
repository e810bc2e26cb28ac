#include "fdv/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "fdv/error.hpp"

namespace fdv {

RgbImage read_png(const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw Error(ErrorKind::load, "cannot read PNG " + path.string() + ": " + image.message);
  }
  image.format = PNG_FORMAT_RGB;
  RgbImage out(static_cast<int>(image.width), static_cast<int>(image.height));
  static_assert(sizeof(Rgb) == 3);
  if (!png_image_finish_read(&image, nullptr, out.pixels.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw Error(ErrorKind::load, "corrupt PNG " + path.string() + ": " + msg);
  }
  return out;
}

void write_png(const std::filesystem::path& path, const RgbImage& img) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width);
  image.height = static_cast<png_uint_32>(img.height);
  image.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&image, path.c_str(), 0, img.pixels.data(), 0, nullptr)) {
    throw Error(ErrorKind::io, "cannot write PNG " + path.string() + ": " + image.message);
  }
}

ScalarGrid read_csv_grid(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::load, "cannot open " + path.string());
  ScalarGrid grid;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    int cols = 0;
    const char* p = line.data();
    const char* end = p + line.size();
    while (p <= end) {
      const char* comma = std::find(p, end, ',');
      while (p < comma && *p == ' ') ++p;
      double v = 0;
      auto [ptr, ec] = std::from_chars(p, comma, v);
      while (ptr < comma && *ptr == ' ') ++ptr;
      if (ec != std::errc{} || ptr != comma || !std::isfinite(v)) {
        throw Error(ErrorKind::load, path.string() + ": bad number at row " +
                                         std::to_string(row + 1) + ", column " +
                                         std::to_string(cols + 1));
      }
      grid.values.push_back(v);
      ++cols;
      p = comma + 1;
    }
    if (row == 0) {
      grid.width = cols;
    } else if (cols != grid.width) {
      throw Error(ErrorKind::load, path.string() + ": row " + std::to_string(row + 1) + " has " +
                                       std::to_string(cols) + " columns, expected " +
                                       std::to_string(grid.width));
    }
    ++row;
  }
  if (row == 0) throw Error(ErrorKind::load, path.string() + ": empty grid");
  grid.height = row;
  return grid;
}

void write_csv_grid(const std::filesystem::path& path, const ScalarGrid& grid) {
  std::string out;
  for (int y = 0; y < grid.height; ++y) {
    for (int x = 0; x < grid.width; ++x) {
      if (x) out += ',';
      out += format_double(grid.values[static_cast<std::size_t>(y) * grid.width + x]);
    }
    out += '\n';
  }
  write_text_file(path, out);
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;
  return std::string(buf, ptr);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, value >>= 4) s[i] = digits[value & 0xf];
  return s;
}

}  // namespace fdv
