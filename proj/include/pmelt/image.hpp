#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pmelt {

/// Pixel coordinate, origin at the top-left corner.
struct Pixel {
  int row = 0;
  int col = 0;

  friend bool operator==(const Pixel&, const Pixel&) = default;
  friend auto operator<=>(const Pixel&, const Pixel&) = default;
};

/// Row-major grayscale image with intensities in [0,1].
class GrayImage {
 public:
  GrayImage() = default;
  /// Constant image. Throws DomainError on non-positive shape or fill outside [0,1].
  GrayImage(int height, int width, double fill = 0.0);
  /// Throws DomainError if data.size() != height*width or any value is outside [0,1].
  GrayImage(int height, int width, std::vector<double> data);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double at(int row, int col) const { return data_[index(row, col)]; }
  double at(Pixel p) const { return at(p.row, p.col); }
  /// Throws DomainError if value is outside [0,1].
  void set(int row, int col, double value);
  void set(Pixel p, double value) { set(p.row, p.col, value); }

  bool contains(int row, int col) const noexcept {
    return row >= 0 && col >= 0 && row < height_ && col < width_;
  }
  std::size_t index(int row, int col) const noexcept {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(col);
  }

  std::span<const double> data() const noexcept { return data_; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<double> data_;
};

/// Row-major boolean mask; true marks foreground (ink) or region membership.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int height, int width, bool fill = false);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::size_t size() const noexcept { return bits_.size(); }

  bool at(int row, int col) const { return bits_[index(row, col)] != 0; }
  bool at(Pixel p) const { return at(p.row, p.col); }
  void set(int row, int col, bool value) { bits_[index(row, col)] = value ? 1 : 0; }
  void set(Pixel p, bool value) { set(p.row, p.col, value); }

  bool contains(int row, int col) const noexcept {
    return row >= 0 && col >= 0 && row < height_ && col < width_;
  }
  std::size_t index(int row, int col) const noexcept {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(col);
  }

  std::size_t count() const noexcept;
  bool intersects(const BinaryMask& other) const;
  std::vector<Pixel> pixels() const;

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Pixelwise 1 - x.
GrayImage invert(const GrayImage& x);

/// Foreground where x >= threshold. Throws DomainError for threshold outside [0,1].
BinaryMask binarize(const GrayImage& x, double threshold);

/// Parses a binary P5 PGM with maxval 255. Throws ParseError naming the byte offset.
GrayImage read_pgm(std::span<const std::uint8_t> bytes);
/// Serializes to P5 with maxval 255, rounding v*255 to the nearest gray level.
std::vector<std::uint8_t> write_pgm(const GrayImage& x);

GrayImage load_pgm(const std::string& path);
void save_pgm(const GrayImage& x, const std::string& path);

/// Reads a whole file. Throws IoError naming the path.
std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, std::span<const std::uint8_t> bytes);

}  // namespace pmelt
