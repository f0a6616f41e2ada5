#include <fstream>
#include <iterator>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "graphictown/raster.hpp"

namespace gtown {

Raster read_image(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw PngError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  static constexpr std::uint8_t kSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::equal(kSig, kSig + 8, bytes.begin())) return decode_png(bytes);
  cv::Mat img = cv::imdecode(bytes, cv::IMREAD_UNCHANGED);
  if (img.empty() || img.depth() != CV_8U) throw PngError("unsupported image: " + path.string());
  if (static_cast<double>(img.cols) * img.rows > 64e6) throw PngError("image too large: " + path.string());
  cv::Mat rgba;
  switch (img.channels()) {
    case 1: cv::cvtColor(img, rgba, cv::COLOR_GRAY2RGBA); break;
    case 3: cv::cvtColor(img, rgba, cv::COLOR_BGR2RGBA); break;
    case 4: cv::cvtColor(img, rgba, cv::COLOR_BGRA2RGBA); break;
    default: throw PngError("unsupported channel count: " + path.string());
  }
  Raster out(rgba.cols, rgba.rows);
  for (int y = 0; y < rgba.rows; ++y) std::copy_n(rgba.ptr<std::uint8_t>(y), rgba.cols * 4, out.row(y));
  return out;
}

}  // namespace gtown
