#pragma once

#include <stdexcept>
#include <string_view>
#include <vector>

#include "graphictown/raster.hpp"

namespace gtown {

/// QR code symbol (byte mode, error correction level M).
class QrCode {
 public:
  /// Smallest version 1..40 that fits; throws std::length_error beyond
  /// 2331 bytes.
  static QrCode encode(std::string_view text);

  int version() const { return version_; }
  int size() const { return size_; }
  int mask() const { return mask_; }
  bool module(int x, int y) const { return modules_[static_cast<std::size_t>(y) * size_ + x]; }

  /// Black-on-white raster with a 4-module quiet zone.
  Raster render(int module_px = 8) const;

 private:
  QrCode(int version, const std::vector<std::uint8_t>& data_codewords);

  void set_function(int x, int y, bool dark);
  void draw_function_patterns();
  void draw_format_bits(int mask);
  void draw_version();
  void draw_finder(int cx, int cy);
  void draw_alignment(int cx, int cy);
  void draw_codewords(const std::vector<std::uint8_t>& codewords);
  void apply_mask(int mask);
  long penalty() const;

  int version_ = 1;
  int size_ = 21;
  int mask_ = 0;
  std::vector<bool> modules_;
  std::vector<bool> is_function_;
};

/// Usable data bytes at level M for a version.
int qr_byte_capacity(int version);

}  // namespace gtown
