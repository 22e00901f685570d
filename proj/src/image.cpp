#include "pmelt/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>

#include "pmelt/errors.hpp"

namespace pmelt {

namespace {

void check_shape(int height, int width) {
  if (height <= 0 || width <= 0) {
    throw DomainError("image shape must be positive, got " + std::to_string(height) + "x" +
                      std::to_string(width));
  }
}

void check_intensity(double v) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw DomainError("intensity " + std::to_string(v) + " outside [0,1]");
  }
}

}  // namespace

GrayImage::GrayImage(int height, int width, double fill) : height_(height), width_(width) {
  check_shape(height, width);
  check_intensity(fill);
  data_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), fill);
}

GrayImage::GrayImage(int height, int width, std::vector<double> data)
    : height_(height), width_(width), data_(std::move(data)) {
  check_shape(height, width);
  if (data_.size() != static_cast<std::size_t>(height) * static_cast<std::size_t>(width)) {
    throw DomainError("image data length " + std::to_string(data_.size()) +
                      " does not match shape " + std::to_string(height) + "x" +
                      std::to_string(width));
  }
  std::for_each(data_.begin(), data_.end(), check_intensity);
}

void GrayImage::set(int row, int col, double value) {
  check_intensity(value);
  data_[index(row, col)] = value;
}

BinaryMask::BinaryMask(int height, int width, bool fill) : height_(height), width_(width) {
  check_shape(height, width);
  bits_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width),
               fill ? 1 : 0);
}

std::size_t BinaryMask::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

bool BinaryMask::intersects(const BinaryMask& other) const {
  if (other.height_ != height_ || other.width_ != width_) {
    throw DomainError("mask shapes differ");
  }
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] && other.bits_[i]) return true;
  }
  return false;
}

std::vector<Pixel> BinaryMask::pixels() const {
  std::vector<Pixel> out;
  for (int r = 0; r < height_; ++r)
    for (int c = 0; c < width_; ++c)
      if (at(r, c)) out.push_back({r, c});
  return out;
}

GrayImage invert(const GrayImage& x) {
  std::vector<double> out(x.data().begin(), x.data().end());
  for (double& v : out) v = 1.0 - v;
  return GrayImage(x.height(), x.width(), std::move(out));
}

BinaryMask binarize(const GrayImage& x, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw DomainError("binarization threshold " + std::to_string(threshold) + " outside [0,1]");
  }
  BinaryMask mask(x.height(), x.width());
  for (int r = 0; r < x.height(); ++r)
    for (int c = 0; c < x.width(); ++c) mask.set(r, c, x.at(r, c) >= threshold);
  return mask;
}

// ---------------------------------------------------------------------------
// PGM

namespace {

class HeaderReader {
 public:
  HeaderReader(std::span<const std::uint8_t> bytes, std::size_t start)
      : bytes_(bytes), pos_(start) {}

  std::size_t pos() const { return pos_; }

  void skip_whitespace_and_comments() {
    while (pos_ < bytes_.size()) {
      const auto ch = bytes_[pos_];
      if (ch == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(ch)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long read_uint(const char* field) {
    skip_whitespace_and_comments();
    const std::size_t start = pos_;
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000) throw ParseError(std::string("PGM ") + field + " too large", start);
      ++pos_;
    }
    if (pos_ == start) throw ParseError(std::string("PGM header: expected ") + field, start);
    return value;
  }

  void expect_single_whitespace() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw ParseError("PGM header: expected whitespace before raster", pos_);
    }
    ++pos_;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_;
};

}  // namespace

GrayImage read_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw ParseError("not a binary PGM (missing P5 magic)", 0);
  }
  HeaderReader in(bytes, 2);
  const long width = in.read_uint("width");
  const long height = in.read_uint("height");
  in.skip_whitespace_and_comments();
  const std::size_t maxval_offset = in.pos();
  const long maxval = in.read_uint("maxval");
  if (width <= 0 || height <= 0) throw ParseError("PGM dimensions must be positive", 2);
  if (maxval != 255) {
    throw ParseError("unsupported PGM maxval " + std::to_string(maxval), maxval_offset);
  }
  in.expect_single_whitespace();

  const std::size_t raster = in.pos();
  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() < raster + n) {
    throw ParseError("truncated PGM raster: need " + std::to_string(n) + " bytes, have " +
                         std::to_string(bytes.size() - raster),
                     bytes.size());
  }
  std::vector<double> data(n);
  for (std::size_t i = 0; i < n; ++i) data[i] = bytes[raster + i] / 255.0;
  return GrayImage(static_cast<int>(height), static_cast<int>(width), std::move(data));
}

std::vector<std::uint8_t> write_pgm(const GrayImage& x) {
  const std::string header =
      "P5\n" + std::to_string(x.width()) + " " + std::to_string(x.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + x.size());
  for (double v : x.data()) out.push_back(static_cast<std::uint8_t>(std::lround(v * 255.0)));
  return out;
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path);
  return bytes;
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path);
}

GrayImage load_pgm(const std::string& path) { return read_pgm(read_file(path)); }

void save_pgm(const GrayImage& x, const std::string& path) { write_file(path, write_pgm(x)); }

}  // namespace pmelt
