#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gtown {

struct Rgba {
  std::uint8_t r = 0, g = 0, b = 0, a = 255;
  bool operator==(const Rgba&) const = default;
};

/// 8-bit RGBA image, row-major, straight (non-premultiplied) alpha.
class Raster {
 public:
  Raster() = default;
  Raster(int width, int height, Rgba fill = {0, 0, 0, 0});

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return width_ == 0 || height_ == 0; }

  Rgba at(int x, int y) const {
    const std::uint8_t* p = &data_[(static_cast<std::size_t>(y) * width_ + x) * 4];
    return {p[0], p[1], p[2], p[3]};
  }
  void set(int x, int y, Rgba c) {
    std::uint8_t* p = &data_[(static_cast<std::size_t>(y) * width_ + x) * 4];
    p[0] = c.r, p[1] = c.g, p[2] = c.b, p[3] = c.a;
  }
  std::uint8_t* row(int y) { return &data_[static_cast<std::size_t>(y) * width_ * 4]; }
  const std::uint8_t* row(int y) const { return &data_[static_cast<std::size_t>(y) * width_ * 4]; }
  std::vector<std::uint8_t>& data() { return data_; }
  const std::vector<std::uint8_t>& data() const { return data_; }

  void fill(Rgba c);
  bool operator==(const Raster&) const = default;

 private:
  int width_ = 0, height_ = 0;
  std::vector<std::uint8_t> data_;
};

struct PngError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> encode_png(const Raster& raster);
Raster decode_png(std::span<const std::uint8_t> bytes);
void write_png(const std::filesystem::path& path, const Raster& raster);
Raster read_png(const std::filesystem::path& path);

/// PNG through libpng; other formats (JPEG, BMP, ...) through OpenCV.
Raster read_image(const std::filesystem::path& path);

/// Opacity percent [0,100] quantized to tenths (0..1000).
int quantize_opacity(double percent);

/// Source-over composite of `src` with its top-left at (x, y). `opacity_q`
/// scales source alpha in units of 1/1000. Pixels outside `dst` are clipped.
void composite_over(Raster& dst, const Raster& src, int x, int y, int opacity_q = 1000);

/// Separable resample: area averaging along shrinking axes, bilinear along
/// growing ones. Same-size requests return a copy.
Raster resample(const Raster& src, int width, int height);

/// Composites `src` rotated clockwise by `degrees` about its own center,
/// placing that center at (cx256, cy256) in 1/256 px of `dst`. Only the part
/// overlapping `dst` is computed.
void composite_rotated(Raster& dst, const Raster& src, std::int64_t cx256, std::int64_t cy256, double degrees,
                       int opacity_q = 1000);

/// Clockwise rotation (y-down screen space) about the image center. The
/// result is the axis-aligned bounding box of the rotated image with
/// transparent corners. Multiples of 360 return a copy.
Raster rotate(const Raster& src, double degrees);

/// sin/cos of an angle in degrees as 16.16 fixed point, bit-reproducible.
struct FixedTrig {
  std::int64_t sin_q = 0, cos_q = 65536;
};
FixedTrig fixed_trig(double degrees);

std::uint8_t luma(Rgba c);

}  // namespace gtown
