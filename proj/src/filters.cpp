#include "graphictown/filters.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "text_util.hpp"

namespace gtown {

namespace {

std::uint8_t clamp8(long v) { return static_cast<std::uint8_t>(std::clamp<long>(v, 0, 255)); }

std::uint32_t hash3(int x, int y, std::uint32_t seed) {
  std::uint32_t h = static_cast<std::uint32_t>(x) * 0x8da6b343u ^ static_cast<std::uint32_t>(y) * 0xd8163841u ^
                    seed * 0xcb1ab31fu;
  h ^= h >> 16;
  h *= 0x7feb352du;
  h ^= h >> 15;
  h *= 0x846ca68bu;
  h ^= h >> 16;
  return h;
}

template <typename F>
Raster map_pixels(const Raster& src, F f) {
  Raster out = src;
  for (std::size_t i = 0; i < out.data().size(); i += 4) {
    std::uint8_t* p = &out.data()[i];
    Rgba c = f(Rgba{p[0], p[1], p[2], p[3]});
    p[0] = c.r, p[1] = c.g, p[2] = c.b;
  }
  return out;
}

Rgba sample_clamped(const Raster& src, long x, long y) {
  x = std::clamp<long>(x, 0, src.width() - 1);
  y = std::clamp<long>(y, 0, src.height() - 1);
  return src.at(static_cast<int>(x), static_cast<int>(y));
}

// One horizontal or vertical box pass over premultiplied channels.
void box_pass(std::vector<std::uint32_t>& buf, int w, int h, int r, bool horizontal) {
  if (r <= 0) return;
  const int n = horizontal ? w : h;
  const int lines = horizontal ? h : w;
  const std::uint32_t count = static_cast<std::uint32_t>(2 * r + 1);
  std::vector<std::uint32_t> line(static_cast<std::size_t>(n) * 4);
  for (int l = 0; l < lines; ++l) {
    auto idx = [&](int i) {
      const int c = std::clamp(i, 0, n - 1);
      return (horizontal ? static_cast<std::size_t>(l) * w + c : static_cast<std::size_t>(c) * w + l) * 4;
    };
    std::array<std::uint64_t, 4> sum{};
    for (int i = -r; i <= r; ++i)
      for (int c = 0; c < 4; ++c) sum[c] += buf[idx(i) + c];
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < 4; ++c) line[static_cast<std::size_t>(i) * 4 + c] = static_cast<std::uint32_t>((sum[c] + count / 2) / count);
      const std::size_t out_i = idx(i - r), in_i = idx(i + r + 1);
      for (int c = 0; c < 4; ++c) sum[c] += buf[in_i + c] - static_cast<std::uint64_t>(buf[out_i + c]);
    }
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < 4; ++c) buf[idx(i) + c] = line[static_cast<std::size_t>(i) * 4 + c];
  }
}

}  // namespace

Raster adjust_bc(const Raster& src, double brightness, double contrast) {
  const long b = std::lround(brightness), c = std::lround(contrast);
  if (b == 0 && c == 0) return src;
  const long gain = std::max(0L, 100 + c);
  std::array<std::uint8_t, 256> lut{};
  for (long v = 0; v < 256; ++v) lut[v] = clamp8((v - 128) * gain / 100 + 128 + b);
  return map_pixels(src, [&](Rgba p) { return Rgba{lut[p.r], lut[p.g], lut[p.b], p.a}; });
}

Raster adjust_bw(const Raster& src) {
  return map_pixels(src, [](Rgba p) {
    const std::uint8_t y = luma(p);
    return Rgba{y, y, y, p.a};
  });
}

Raster adjust_hsl(const Raster& src, double hue, double saturation, double light) {
  if (hue == 0.0 && saturation == 0.0 && light == 0.0) return src;
  return map_pixels(src, [&](Rgba p) {
    const double r = p.r / 255.0, g = p.g / 255.0, b = p.b / 255.0;
    const double mx = std::max({r, g, b}), mn = std::min({r, g, b});
    double h = 0.0, s = 0.0, l = (mx + mn) / 2.0;
    const double d = mx - mn;
    if (d > 0.0) {
      s = l > 0.5 ? d / (2.0 - mx - mn) : d / (mx + mn);
      if (mx == r) h = (g - b) / d + (g < b ? 6.0 : 0.0);
      else if (mx == g) h = (b - r) / d + 2.0;
      else h = (r - g) / d + 4.0;
      h *= 60.0;
    }
    h = std::fmod(h + hue + 360.0, 360.0);
    s = saturation >= 0 ? s + (1.0 - s) * saturation / 100.0 : s * (1.0 + saturation / 100.0);
    l = light >= 0 ? l + (1.0 - l) * light / 100.0 : l * (1.0 + light / 100.0);
    s = std::clamp(s, 0.0, 1.0);
    l = std::clamp(l, 0.0, 1.0);
    auto channel = [](double p_, double q, double t) {
      if (t < 0) t += 1.0;
      if (t > 1) t -= 1.0;
      if (t < 1.0 / 6.0) return p_ + (q - p_) * 6.0 * t;
      if (t < 0.5) return q;
      if (t < 2.0 / 3.0) return p_ + (q - p_) * (2.0 / 3.0 - t) * 6.0;
      return p_;
    };
    double ro = l, go = l, bo = l;
    if (s > 0.0) {
      const double q = l < 0.5 ? l * (1.0 + s) : l + s - l * s;
      const double pp = 2.0 * l - q;
      const double hk = h / 360.0;
      ro = channel(pp, q, hk + 1.0 / 3.0);
      go = channel(pp, q, hk);
      bo = channel(pp, q, hk - 1.0 / 3.0);
    }
    return Rgba{clamp8(std::lround(ro * 255.0)), clamp8(std::lround(go * 255.0)), clamp8(std::lround(bo * 255.0)), p.a};
  });
}

Raster blur(const Raster& src, double amount) {
  const int r = static_cast<int>(std::lround(std::max(0.0, amount)));
  if (r == 0 || src.empty()) return src;
  const int w = src.width(), h = src.height();
  std::vector<std::uint32_t> buf(static_cast<std::size_t>(w) * h * 4);
  for (std::size_t i = 0; i < buf.size(); i += 4) {
    const std::uint8_t* p = &src.data()[i];
    buf[i] = p[0] * p[3], buf[i + 1] = p[1] * p[3], buf[i + 2] = p[2] * p[3], buf[i + 3] = p[3] * 255u;
  }
  const int radii[3] = {r / 3, (r + 1) / 3, (r + 2) / 3};
  for (int rad : radii) {
    box_pass(buf, w, h, rad, true);
    box_pass(buf, w, h, rad, false);
  }
  Raster out(w, h);
  for (std::size_t i = 0; i < buf.size(); i += 4) {
    std::uint8_t* p = &out.data()[i];
    const std::uint32_t a = buf[i + 3];
    p[3] = static_cast<std::uint8_t>((a + 127) / 255);
    if (a == 0) continue;
    for (int c = 0; c < 3; ++c) p[c] = clamp8((static_cast<std::uint64_t>(buf[i + c]) * 255 + a / 2) / a);
  }
  return out;
}

Rgba photo_filter_color(std::string_view filter_type) {
  const std::string t = detail::lower(filter_type);
  auto has = [&](std::string_view k) { return t.find(k) != std::string::npos; };
  static const std::array<std::pair<std::string_view, Rgba>, 20> kTable = {{
      {"sepia", {172, 122, 51, 255}},
      {"underwater", {0, 194, 177, 255}},
      {"deep blue", {0, 34, 205, 255}},
      {"deep red", {255, 0, 0, 255}},
      {"deep emerald", {0, 141, 0, 255}},
      {"deep yellow", {255, 213, 0, 255}},
      {"lba", {250, 150, 0, 255}},
      {"lbb", {0, 93, 255, 255}},
      {"81", {235, 177, 19, 255}},
      {"82", {0, 181, 255, 255}},
      {"cool", {0, 109, 255, 255}},
      {"cold", {0, 109, 255, 255}},
      {"warm", {236, 138, 0, 255}},
      {"orange", {243, 132, 23, 255}},
      {"yellow", {249, 227, 28, 255}},
      {"green", {25, 201, 25, 255}},
      {"cyan", {29, 203, 234, 255}},
      {"blue", {29, 53, 234, 255}},
      {"violet", {155, 41, 166, 255}},
      {"magenta", {227, 24, 227, 255}},
  }};
  for (const auto& [key, color] : kTable)
    if (has(key)) return color;
  if (has("red")) return {234, 26, 26, 255};
  if (has("purple")) return {155, 41, 166, 255};
  if (has("pink")) return {227, 24, 227, 255};
  return {236, 138, 0, 255};
}

Raster photo_filter(const Raster& src, std::string_view filter_type, double density) {
  const long d = std::lround(std::clamp(density, 0.0, 100.0) * 10.0);
  if (d == 0) return src;
  const Rgba f = photo_filter_color(filter_type);
  return map_pixels(src, [&](Rgba p) {
    auto mix = [&](long v, long c) { return clamp8((v * (1000 - d) + c * d + 500) / 1000); };
    return Rgba{mix(p.r, f.r), mix(p.g, f.g), mix(p.b, f.b), p.a};
  });
}

Raster glass_filter(const Raster& src, double distortion, double smoothness, double scaling) {
  const long dq = std::lround(distortion * 16.0);
  if (dq == 0 || src.empty()) return src;
  const int cell = std::max(2, static_cast<int>(std::lround(smoothness * 4.0 * scaling / 100.0)));
  auto noise = [&](int x, int y, std::uint32_t seed) -> long {
    const int gx = x / cell, gy = y / cell;
    const long fx = (x % cell) * 256L / cell, fy = (y % cell) * 256L / cell;
    auto v = [&](int i, int j) { return static_cast<long>(hash3(gx + i, gy + j, seed) % 513) - 256; };
    const long top = v(0, 0) * (256 - fx) + v(1, 0) * fx;
    const long bottom = v(0, 1) * (256 - fx) + v(1, 1) * fx;
    return (top * (256 - fy) + bottom * fy) >> 16;  // [-256, 256]
  };
  Raster out(src.width(), src.height());
  for (int y = 0; y < src.height(); ++y)
    for (int x = 0; x < src.width(); ++x) {
      const long dx = noise(x, y, 17) * dq / (256 * 16);
      const long dy = noise(x, y, 29) * dq / (256 * 16);
      out.set(x, y, sample_clamped(src, x + dx, y + dy));
    }
  return out;
}

Raster glow_filter(const Raster& src, double graininess, double glow_amount, double clear_amount) {
  const long sq = std::lround(glow_amount * 50.0), cq = std::lround(clear_amount * 50.0);
  const long g = std::lround(graininess * 4.0);
  if ((sq == 0 || cq >= 1000) && g == 0) return src;
  const Raster bright = blur(src, glow_amount * 2.0);
  const long weight = sq * (1000 - std::min(1000L, cq)) / 1000;
  Raster out = src;
  for (int y = 0; y < src.height(); ++y)
    for (int x = 0; x < src.width(); ++x) {
      const Rgba p = src.at(x, y), b = bright.at(x, y);
      const long n = g ? static_cast<long>(hash3(x, y, 101) % static_cast<std::uint32_t>(2 * g + 1)) - g : 0;
      auto screen = [&](long v, long bv) { return clamp8(v + (255 - v) * bv * weight / (255 * 1000) + n); };
      out.set(x, y, Rgba{screen(p.r, b.r), screen(p.g, b.g), screen(p.b, b.b), p.a});
    }
  return out;
}

Raster ocean_ripple_filter(const Raster& src, double ripple_size, double ripple_magnitude) {
  const long amp = std::lround(ripple_magnitude * 256.0);
  if (amp == 0 || src.empty()) return src;
  const int period = std::max(2, static_cast<int>(std::lround(ripple_size * 8.0)));
  auto offset = [&](int t) {
    const FixedTrig tr = fixed_trig(360.0 * (t % period) / period);
    return static_cast<long>(((amp * tr.sin_q >> 16) + 128) >> 8);
  };
  std::vector<long> dx(src.height()), dy(src.width());
  for (int y = 0; y < src.height(); ++y) dx[y] = offset(y);
  for (int x = 0; x < src.width(); ++x) dy[x] = offset(x);
  Raster out(src.width(), src.height());
  for (int y = 0; y < src.height(); ++y)
    for (int x = 0; x < src.width(); ++x) out.set(x, y, sample_clamped(src, x + dx[y], y + dy[x]));
  return out;
}

Raster stained_glass_filter(const Raster& src, double cell_size, double border_thickness, double light_intensity) {
  if (src.empty()) return src;
  const int cell = std::max(2, static_cast<int>(std::lround(cell_size)));
  const double half_border = border_thickness / 2.0;
  const int gw = src.width() / cell + 2, gh = src.height() / cell + 2;
  std::vector<std::pair<int, int>> seeds(static_cast<std::size_t>(gw) * gh);
  for (int gy = 0; gy < gh; ++gy)
    for (int gx = 0; gx < gw; ++gx)
      seeds[static_cast<std::size_t>(gy) * gw + gx] = {gx * cell + static_cast<int>(hash3(gx, gy, 7) % cell),
                                                       gy * cell + static_cast<int>(hash3(gx, gy, 13) % cell)};
  Raster out(src.width(), src.height());
  for (int y = 0; y < src.height(); ++y)
    for (int x = 0; x < src.width(); ++x) {
      const int cx = x / cell, cy = y / cell;
      long best = -1, second = -1;
      std::pair<int, int> s1{}, s2{};
      for (int j = -1; j <= 1; ++j)
        for (int i = -1; i <= 1; ++i) {
          const int gx = cx + i, gy = cy + j;
          if (gx < 0 || gy < 0 || gx >= gw || gy >= gh) continue;
          const auto s = seeds[static_cast<std::size_t>(gy) * gw + gx];
          const long d = static_cast<long>(s.first - x) * (s.first - x) + static_cast<long>(s.second - y) * (s.second - y);
          if (best < 0 || d < best) {
            second = best, s2 = s1;
            best = d, s1 = s;
          } else if (second < 0 || d < second) {
            second = d, s2 = s;
          }
        }
      const Rgba base = sample_clamped(src, s1.first, s1.second);
      const double sep = std::sqrt(static_cast<double>((s2.first - s1.first) * (s2.first - s1.first) +
                                                       (s2.second - s1.second) * (s2.second - s1.second)));
      const double edge = sep > 0 ? (second - best) / (2.0 * sep) : 1e9;
      if (edge < half_border) {
        out.set(x, y, Rgba{0, 0, 0, src.at(x, y).a});
        continue;
      }
      const double falloff = std::max(0.0, 1.0 - std::sqrt(static_cast<double>(best)) / cell);
      const long lift = std::lround(light_intensity * 8.0 * falloff);
      out.set(x, y, Rgba{clamp8(base.r + lift), clamp8(base.g + lift), clamp8(base.b + lift), src.at(x, y).a});
    }
  return out;
}

Raster patchwork_filter(const Raster& src, double square_size, double relief) {
  if (src.empty()) return src;
  const int side = 4 + static_cast<int>(std::lround(2.0 * square_size));
  const long rq = std::lround(relief * 3.0);
  const int bevel = std::max(1, side / 8);
  Raster out(src.width(), src.height());
  for (int by = 0; by < src.height(); by += side)
    for (int bx = 0; bx < src.width(); bx += side) {
      const int ex = std::min(src.width(), bx + side), ey = std::min(src.height(), by + side);
      std::array<long, 4> sum{};
      const long n = static_cast<long>(ex - bx) * (ey - by);
      for (int y = by; y < ey; ++y)
        for (int x = bx; x < ex; ++x) {
          const Rgba p = src.at(x, y);
          sum[0] += p.r, sum[1] += p.g, sum[2] += p.b, sum[3] += p.a;
        }
      for (int y = by; y < ey; ++y)
        for (int x = bx; x < ex; ++x) {
          long lift = 0;
          if (y - by < bevel || x - bx < bevel) lift = rq;
          else if (ey - 1 - y < bevel || ex - 1 - x < bevel) lift = -rq;
          out.set(x, y, Rgba{clamp8((sum[0] + n / 2) / n + lift), clamp8((sum[1] + n / 2) / n + lift),
                             clamp8((sum[2] + n / 2) / n + lift), src.at(x, y).a});
        }
    }
  return out;
}

Raster watercolor_filter(const Raster& src, double brush_detail, double shadow_intensity, int texture) {
  if (src.empty()) return src;
  const Raster soft = blur(src, std::max(1.0, std::round((15.0 - brush_detail) / 2.0)));
  const long levels = 3 + std::lround(brush_detail);
  const long shadow = std::lround(shadow_intensity * 10.0);
  const long grain = 4L * std::clamp(texture, 1, 3);
  Raster out(src.width(), src.height());
  auto lum = [&](int x, int y) {
    return static_cast<long>(luma(soft.at(std::clamp(x, 0, src.width() - 1), std::clamp(y, 0, src.height() - 1))));
  };
  for (int y = 0; y < src.height(); ++y)
    for (int x = 0; x < src.width(); ++x) {
      const Rgba p = soft.at(x, y);
      const long edge = std::labs(lum(x + 1, y) - lum(x - 1, y)) + std::labs(lum(x, y + 1) - lum(x, y - 1));
      const long dark = edge * shadow / 100;
      const long n = static_cast<long>(hash3(x, y, 211) % static_cast<std::uint32_t>(2 * grain + 1)) - grain;
      auto post = [&](long v) {
        const long q = (v * (levels - 1) + 127) / 255;
        return clamp8(q * 255 / (levels - 1) - dark + n);
      };
      out.set(x, y, Rgba{post(p.r), post(p.g), post(p.b), src.at(x, y).a});
    }
  return out;
}

bool is_adjustment(std::string_view a) {
  static constexpr std::array<std::string_view, 11> kNames = {
      "AdjustBC",          "AdjustBW",           "AdjustHSL",       "BlurObject",      "PhotoFilter",
      "GlassFilter",       "GlowFilter",         "OceanRippleFilter", "StainedGlassFilter", "PatchWorkFilter",
      "WatercolorFilter"};
  return std::find(kNames.begin(), kNames.end(), a) != kNames.end();
}

Raster apply_adjustment(std::string_view a, const json& p, const Raster& src) {
  auto num = [&](const char* k) { return p.at(k).get<double>(); };
  if (a == "AdjustBC") return adjust_bc(src, num("brightness"), num("contrast"));
  if (a == "AdjustBW") return adjust_bw(src);
  if (a == "AdjustHSL") return adjust_hsl(src, num("hue"), num("saturation"), num("light"));
  if (a == "BlurObject") return blur(src, num("blurAmount"));
  if (a == "PhotoFilter") return photo_filter(src, p.at("filterType").get<std::string>(), num("density"));
  if (a == "GlassFilter") return glass_filter(src, num("distortion"), num("smoothness"), num("scaling"));
  if (a == "GlowFilter") return glow_filter(src, num("graininess"), num("glowAmount"), num("clearAmount"));
  if (a == "OceanRippleFilter") return ocean_ripple_filter(src, num("rippleSize"), num("rippleMagnitude"));
  if (a == "StainedGlassFilter")
    return stained_glass_filter(src, num("cellSize"), num("borderThickness"), num("lightIntensity"));
  if (a == "PatchWorkFilter") return patchwork_filter(src, num("squareSize"), num("relief"));
  if (a == "WatercolorFilter")
    return watercolor_filter(src, num("brushDetail"), num("shadowIntensity"), p.at("texture").get<int>());
  throw std::invalid_argument("not an adjustment: " + std::string(a));
}

}  // namespace gtown
