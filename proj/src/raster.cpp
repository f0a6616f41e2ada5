#include "graphictown/raster.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>

#include <png.h>

namespace gtown {

Raster::Raster(int width, int height, Rgba fill_color) : width_(width), height_(height) {
  if (width < 0 || height < 0) throw std::invalid_argument("negative raster size");
  data_.resize(static_cast<std::size_t>(width) * height * 4);
  fill(fill_color);
}

void Raster::fill(Rgba c) {
  for (std::size_t i = 0; i < data_.size(); i += 4) {
    data_[i] = c.r, data_[i + 1] = c.g, data_[i + 2] = c.b, data_[i + 3] = c.a;
  }
}

std::vector<std::uint8_t> encode_png(const Raster& raster) {
  if (raster.empty()) throw PngError("cannot encode an empty raster");
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(raster.width());
  image.height = static_cast<png_uint_32>(raster.height());
  image.format = PNG_FORMAT_RGBA;
  png_alloc_size_t size = 0;
  const png_int_32 stride = raster.width() * 4;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, raster.data().data(), stride, nullptr))
    throw PngError(std::string("png encode: ") + image.message);
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, raster.data().data(), stride, nullptr))
    throw PngError(std::string("png encode: ") + image.message);
  out.resize(size);
  return out;
}

Raster decode_png(std::span<const std::uint8_t> bytes) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()))
    throw PngError(std::string("png decode: ") + image.message);
  image.format = PNG_FORMAT_RGBA;
  if (image.width == 0 || image.height == 0 || static_cast<double>(image.width) * image.height > 64e6) {
    png_image_free(&image);
    throw PngError("png decode: unsupported dimensions");
  }
  Raster out(static_cast<int>(image.width), static_cast<int>(image.height));
  if (!png_image_finish_read(&image, nullptr, out.data().data(), static_cast<png_int_32>(image.width * 4), nullptr))
    throw PngError(std::string("png decode: ") + image.message);
  return out;
}

void write_png(const std::filesystem::path& path, const Raster& raster) {
  const auto bytes = encode_png(raster);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw PngError("cannot open " + path.string() + " for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw PngError("write failed: " + path.string());
}

Raster read_png(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw PngError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return decode_png(bytes);
}

int quantize_opacity(double percent) {
  return static_cast<int>(std::lround(std::clamp(percent, 0.0, 100.0) * 10.0));
}

void composite_over(Raster& dst, const Raster& src, int ox, int oy, int opacity_q) {
  opacity_q = std::clamp(opacity_q, 0, 1000);
  if (opacity_q == 0) return;
  const int x0 = std::max(0, ox), y0 = std::max(0, oy);
  const int x1 = std::min(dst.width(), ox + src.width()), y1 = std::min(dst.height(), oy + src.height());
  for (int y = y0; y < y1; ++y) {
    const std::uint8_t* s = src.row(y - oy) + (x0 - ox) * 4;
    std::uint8_t* d = dst.row(y) + x0 * 4;
    for (int x = x0; x < x1; ++x, s += 4, d += 4) {
      const std::uint32_t ae = (s[3] * static_cast<std::uint32_t>(opacity_q) + 500) / 1000;
      if (ae == 0) continue;
      const std::uint32_t da = d[3];
      const std::uint32_t oa = ae * 255 + da * (255 - ae);
      for (int c = 0; c < 3; ++c) d[c] = static_cast<std::uint8_t>((s[c] * ae * 255 + d[c] * da * (255 - ae) + oa / 2) / oa);
      d[3] = static_cast<std::uint8_t>((oa + 127) / 255);
    }
  }
}

namespace {

struct Tap {
  int index;
  std::uint32_t weight;
};

struct AxisPlan {
  std::vector<std::vector<Tap>> taps;
  std::uint32_t denom = 1;
};

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

AxisPlan plan_axis(int src, int dst) {
  AxisPlan plan;
  plan.taps.resize(dst);
  if (src == dst) {
    for (int i = 0; i < dst; ++i) plan.taps[i] = {{i, 1}};
    return plan;
  }
  if (dst < src) {
    // Output x spans [x*src, (x+1)*src); source i spans [i*dst, (i+1)*dst).
    plan.denom = static_cast<std::uint32_t>(src);
    for (int x = 0; x < dst; ++x) {
      const std::int64_t lo = static_cast<std::int64_t>(x) * src, hi = lo + src;
      for (std::int64_t i = lo / dst; i * dst < hi && i < src; ++i) {
        const std::int64_t a = std::max(lo, i * dst), b = std::min(hi, (i + 1) * dst);
        if (b > a) plan.taps[x].push_back({static_cast<int>(i), static_cast<std::uint32_t>(b - a)});
      }
    }
    return plan;
  }
  plan.denom = 256;
  for (int x = 0; x < dst; ++x) {
    std::int64_t p = floor_div((2LL * x + 1) * src * 256 - static_cast<std::int64_t>(dst) * 256, 2LL * dst);
    p = std::clamp<std::int64_t>(p, 0, static_cast<std::int64_t>(src - 1) * 256);
    const int i0 = static_cast<int>(p >> 8);
    const std::uint32_t f = static_cast<std::uint32_t>(p & 255);
    plan.taps[x] = {{i0, 256 - f}};
    if (f) plan.taps[x].push_back({std::min(i0 + 1, src - 1), f});
  }
  return plan;
}

}  // namespace

Raster resample(const Raster& src, int width, int height) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("resample to non-positive size");
  if (width == src.width() && height == src.height()) return src;
  if (src.empty()) return Raster(width, height);
  const AxisPlan px = plan_axis(src.width(), width);
  const AxisPlan py = plan_axis(src.height(), height);

  // Horizontal pass into premultiplied accumulators (c*a*w, a*w).
  const int sh = src.height();
  std::vector<std::uint32_t> mid(static_cast<std::size_t>(width) * sh * 4);
  for (int y = 0; y < sh; ++y) {
    const std::uint8_t* row = src.row(y);
    std::uint32_t* out = &mid[static_cast<std::size_t>(y) * width * 4];
    for (int x = 0; x < width; ++x, out += 4) {
      std::uint32_t r = 0, g = 0, b = 0, a = 0;
      for (const Tap& t : px.taps[x]) {
        const std::uint8_t* p = row + t.index * 4;
        const std::uint32_t aw = p[3] * t.weight;
        r += p[0] * aw, g += p[1] * aw, b += p[2] * aw, a += aw;
      }
      out[0] = r, out[1] = g, out[2] = b, out[3] = a;
    }
  }

  Raster dst(width, height);
  const std::uint64_t denom = static_cast<std::uint64_t>(px.denom) * py.denom;
  for (int y = 0; y < height; ++y) {
    std::uint8_t* out = dst.row(y);
    for (int x = 0; x < width; ++x, out += 4) {
      std::uint64_t r = 0, g = 0, b = 0, a = 0;
      for (const Tap& t : py.taps[y]) {
        const std::uint32_t* m = &mid[(static_cast<std::size_t>(t.index) * width + x) * 4];
        r += static_cast<std::uint64_t>(m[0]) * t.weight;
        g += static_cast<std::uint64_t>(m[1]) * t.weight;
        b += static_cast<std::uint64_t>(m[2]) * t.weight;
        a += static_cast<std::uint64_t>(m[3]) * t.weight;
      }
      if (a == 0) continue;
      out[0] = static_cast<std::uint8_t>((r + a / 2) / a);
      out[1] = static_cast<std::uint8_t>((g + a / 2) / a);
      out[2] = static_cast<std::uint8_t>((b + a / 2) / a);
      out[3] = static_cast<std::uint8_t>((a + denom / 2) / denom);
    }
  }
  return dst;
}

FixedTrig fixed_trig(double degrees) {
  // Millidegrees keep the quadrant reduction exact.
  std::int64_t q = std::llround(std::fmod(degrees, 360.0) * 1000.0) % 360000;
  if (q < 0) q += 360000;
  const int quadrant = static_cast<int>(q / 90000);
  const double x = static_cast<double>(q % 90000) * (3.14159265358979323846 / 180000.0);
  double s = 0.0, c = 0.0, term_s = x, term_c = 1.0;
  const double x2 = x * x;
  for (int n = 0; n < 14; ++n) {
    s += term_s;
    c += term_c;
    term_s = -term_s * x2 / static_cast<double>((2 * n + 2) * (2 * n + 3));
    term_c = -term_c * x2 / static_cast<double>((2 * n + 1) * (2 * n + 2));
  }
  double sn = s, cs = c;
  switch (quadrant) {
    case 1: sn = c, cs = -s; break;
    case 2: sn = -s, cs = -c; break;
    case 3: sn = -c, cs = s; break;
    default: break;
  }
  return {std::llround(sn * 65536.0), std::llround(cs * 65536.0)};
}

void composite_rotated(Raster& dst, const Raster& src, std::int64_t cx256, std::int64_t cy256, double degrees,
                       int opacity_q) {
  opacity_q = std::clamp(opacity_q, 0, 1000);
  if (opacity_q == 0 || src.empty()) return;
  const FixedTrig t = fixed_trig(degrees);
  const std::int64_t w = src.width(), h = src.height();
  const std::int64_t as = std::llabs(t.sin_q), ac = std::llabs(t.cos_q);
  // Half extents of the rotated bounding box in 1/256 px.
  const std::int64_t hw = ((w * ac + h * as) * 128 + 65535) >> 16;
  const std::int64_t hh = ((w * as + h * ac) * 128 + 65535) >> 16;
  const int x0 = static_cast<int>(std::max<std::int64_t>(0, (cx256 - hw) >> 8));
  const int y0 = static_cast<int>(std::max<std::int64_t>(0, (cy256 - hh) >> 8));
  const int x1 = static_cast<int>(std::min<std::int64_t>(dst.width(), ((cx256 + hw) >> 8) + 1));
  const int y1 = static_cast<int>(std::min<std::int64_t>(dst.height(), ((cy256 + hh) >> 8) + 1));
  auto texel = [&](std::int64_t x, std::int64_t y) -> const std::uint8_t* {
    if (x < 0 || y < 0 || x >= w || y >= h) return nullptr;
    return src.row(static_cast<int>(y)) + x * 4;
  };
  for (int y = y0; y < y1; ++y) {
    const std::int64_t dy = y * 256LL + 128 - cy256;
    std::uint8_t* d = dst.row(y) + x0 * 4;
    for (int x = x0; x < x1; ++x, d += 4) {
      const std::int64_t dx = x * 256LL + 128 - cx256;
      // Inverse rotation, then to pixel-center coordinates of src (24.8).
      const std::int64_t sx = ((dx * t.cos_q + dy * t.sin_q) >> 16) + w * 128 - 128;
      const std::int64_t sy = ((-dx * t.sin_q + dy * t.cos_q) >> 16) + h * 128 - 128;
      const std::int64_t ix = sx >> 8, iy = sy >> 8;
      if (ix < -1 || iy < -1 || ix >= w || iy >= h) continue;
      const std::uint32_t fx = static_cast<std::uint32_t>(sx & 255), fy = static_cast<std::uint32_t>(sy & 255);
      const std::uint32_t wts[4] = {(256 - fx) * (256 - fy), fx * (256 - fy), (256 - fx) * fy, fx * fy};
      const std::uint8_t* px[4] = {texel(ix, iy), texel(ix + 1, iy), texel(ix, iy + 1), texel(ix + 1, iy + 1)};
      std::uint64_t r = 0, g = 0, b = 0, a = 0;
      for (int k = 0; k < 4; ++k) {
        if (!px[k] || wts[k] == 0) continue;
        const std::uint64_t aw = static_cast<std::uint64_t>(px[k][3]) * wts[k];
        r += px[k][0] * aw, g += px[k][1] * aw, b += px[k][2] * aw, a += aw;
      }
      if (a == 0) continue;
      const std::uint32_t sa = static_cast<std::uint32_t>((a + 32768) >> 16);
      const std::uint32_t ae = (sa * static_cast<std::uint32_t>(opacity_q) + 500) / 1000;
      if (ae == 0) continue;
      const std::uint32_t sc[3] = {static_cast<std::uint32_t>((r + a / 2) / a), static_cast<std::uint32_t>((g + a / 2) / a),
                                   static_cast<std::uint32_t>((b + a / 2) / a)};
      const std::uint32_t da = d[3];
      const std::uint32_t oa = ae * 255 + da * (255 - ae);
      for (int c = 0; c < 3; ++c) d[c] = static_cast<std::uint8_t>((sc[c] * ae * 255 + d[c] * da * (255 - ae) + oa / 2) / oa);
      d[3] = static_cast<std::uint8_t>((oa + 127) / 255);
    }
  }
}

Raster rotate(const Raster& src, double degrees) {
  const FixedTrig t = fixed_trig(degrees);
  if (t.sin_q == 0 && t.cos_q == 65536) return src;
  const std::int64_t w = src.width(), h = src.height();
  const std::int64_t as = std::llabs(t.sin_q), ac = std::llabs(t.cos_q);
  const int ow = static_cast<int>(std::max<std::int64_t>(1, (w * ac + h * as + 65535) >> 16));
  const int oh = static_cast<int>(std::max<std::int64_t>(1, (w * as + h * ac + 65535) >> 16));
  Raster dst(ow, oh);
  composite_rotated(dst, src, ow * 128LL, oh * 128LL, degrees);
  return dst;
}

std::uint8_t luma(Rgba c) {
  return static_cast<std::uint8_t>((299u * c.r + 587u * c.g + 114u * c.b + 500u) / 1000u);
}

}  // namespace gtown
