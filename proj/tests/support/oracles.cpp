#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace gtown::testing {
namespace oracle {

Gray gray_over_white(const Raster& r) {
  Gray g(r.height(), std::vector<double>(r.width()));
  for (int y = 0; y < r.height(); ++y)
    for (int x = 0; x < r.width(); ++x) {
      const Rgba c = r.at(x, y);
      auto over = [&](int v) { return (v * c.a + 255 * (255 - c.a) + 127) / 255; };
      g[y][x] = (299 * over(c.r) + 587 * over(c.g) + 114 * over(c.b) + 500) / 1000;
    }
  return g;
}

namespace {

Gray transpose(const Gray& g) {
  Gray t(g.empty() ? 0 : g[0].size(), std::vector<double>(g.size()));
  for (std::size_t y = 0; y < g.size(); ++y)
    for (std::size_t x = 0; x < g[y].size(); ++x) t[x][y] = g[y][x];
  return t;
}

std::vector<double> area_row(const std::vector<double>& src, int n) {
  const double f = static_cast<double>(src.size()) / n;
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    const double a = i * f, b = (i + 1) * f;
    double sum = 0.0;
    for (int k = static_cast<int>(std::floor(a)); k < static_cast<int>(std::ceil(b)); ++k) {
      const double lo = std::max<double>(a, k), hi = std::min<double>(b, k + 1);
      if (hi > lo && k < static_cast<int>(src.size())) sum += src[k] * (hi - lo);
    }
    out[i] = sum / f;
  }
  return out;
}

std::vector<double> linear_row(const std::vector<double>& src, int n) {
  const double f = static_cast<double>(src.size()) / n;
  const int last = static_cast<int>(src.size()) - 1;
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    const double s = (i + 0.5) * f - 0.5;
    int k = static_cast<int>(std::floor(s));
    double t = s - k;
    if (k < 0) k = 0, t = 0.0;
    if (k >= last) k = last, t = 0.0;
    out[i] = src[k] * (1.0 - t) + (t > 0.0 ? src[k + 1] * t : 0.0);
  }
  return out;
}

template <class RowFn>
Gray separable(const Gray& src, int w, int h, RowFn fn) {
  Gray rows;
  for (const auto& r : src) rows.push_back(fn(r, w));
  Gray cols;
  for (const auto& c : transpose(rows)) cols.push_back(fn(c, h));
  return transpose(cols);
}

}  // namespace

Gray shrink_area(const Gray& src, int w, int h) { return separable(src, w, h, area_row); }
Gray grow_linear(const Gray& src, int w, int h) { return separable(src, w, h, linear_row); }

double best_ncc(const Gray& image, const Gray& tmpl) {
  const int H = static_cast<int>(image.size()), W = static_cast<int>(image[0].size());
  const int h = static_cast<int>(tmpl.size()), w = static_cast<int>(tmpl[0].size());
  const double n = static_cast<double>(w) * h;
  double tmean = 0.0;
  for (const auto& r : tmpl)
    for (double v : r) tmean += v / n;
  double tvar = 0.0;
  for (const auto& r : tmpl)
    for (double v : r) tvar += (v - tmean) * (v - tmean);
  double best = -1.0;
  for (int oy = 0; oy + h <= H; ++oy)
    for (int ox = 0; ox + w <= W; ++ox) {
      double imean = 0.0;
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) imean += image[oy + y][ox + x] / n;
      double num = 0.0, ivar = 0.0;
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
          const double d = image[oy + y][ox + x] - imean;
          num += d * (tmpl[y][x] - tmean);
          ivar += d * d;
        }
      const double den = std::sqrt(ivar * tvar);
      best = std::max(best, den > 1e-9 ? num / den : 0.0);
    }
  return best;
}

double match_score(const Raster& design, const Raster& tmpl) {
  const Gray d = gray_over_white(design), t = gray_over_white(tmpl);
  double best = 0.0;
  for (double s : {0.25, 0.5, 0.75, 1.0, 1.5, 2.0}) {
    const int w = std::max(1, static_cast<int>(std::lround(tmpl.width() * s)));
    const int h = std::max(1, static_cast<int>(std::lround(tmpl.height() * s)));
    if (w > design.width() || h > design.height()) continue;
    Gray scaled = t;
    if (s < 1.0) scaled = shrink_area(t, w, h);
    if (s > 1.0) scaled = grow_linear(t, w, h);
    best = std::max(best, best_ncc(d, scaled));
  }
  return std::clamp(best, 0.0, 1.0);
}

double expert_use(const std::vector<std::string>& experts) {
  const std::set<std::string> distinct(experts.begin(), experts.end());
  int switches = 0;
  for (std::size_t i = 1; i < experts.size(); ++i) switches += experts[i] != experts[i - 1];
  if (switches == 0) return 1.0;
  return (static_cast<double>(distinct.size()) - 1.0) / switches;
}

}  // namespace oracle

namespace {

Raster structured(int w, int h, std::uint32_t seed) {
  std::mt19937 rng(seed);
  Raster r(w, h, {255, 255, 255, 255});
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      r.set(x, y, {static_cast<std::uint8_t>(x * 255 / w), static_cast<std::uint8_t>(y * 255 / h), 120, 255});
  std::uniform_int_distribution<int> px(0, w - 1), py(0, h - 1), col(0, 255);
  for (int k = 0; k < 6; ++k) {
    const int x0 = px(rng), y0 = py(rng), x1 = std::min(w, x0 + 4 + px(rng) / 3), y1 = std::min(h, y0 + 4 + py(rng) / 3);
    const Rgba c{static_cast<std::uint8_t>(col(rng)), static_cast<std::uint8_t>(col(rng)),
                 static_cast<std::uint8_t>(col(rng)), 255};
    for (int y = y0; y < y1; ++y)
      for (int x = x0; x < x1; ++x) r.set(x, y, c);
  }
  return r;
}

Raster noise(int w, int h, std::uint32_t seed, int lo, int hi) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> v(lo, hi);
  Raster r(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const auto g = static_cast<std::uint8_t>(v(rng));
      r.set(x, y, {g, g, static_cast<std::uint8_t>(255 - g), 255});
    }
  return r;
}

Raster paste(Raster dst, const Raster& src, int x, int y) {
  composite_over(dst, src, x, y);
  return dst;
}

}  // namespace

std::vector<FidelityPair> fidelity_pairs() {
  const Raster t = structured(60, 48, 7);
  const Raster bg = noise(240, 160, 11, 90, 170);
  Raster translucent = structured(50, 40, 9);
  for (int y = 0; y < translucent.height(); ++y)
    for (int x = 0; x < translucent.width(); ++x) {
      Rgba c = translucent.at(x, y);
      c.a = static_cast<std::uint8_t>(x < 10 ? 0 : 255);
      translucent.set(x, y, c);
    }
  return {
      {"embed_top_left", paste(bg, t, 10, 12), t},
      {"embed_center", paste(bg, t, 100, 40), t},
      {"embed_bottom_right", paste(bg, t, 170, 100), t},
      {"embed_shifted_50px", paste(bg, t, 60, 12), t},
      {"embed_shifted_down", paste(bg, t, 10, 62), t},
      {"blank_design", Raster(240, 160, {255, 255, 255, 255}), t},
      {"embed_half_scale", paste(bg, resample(t, 30, 24), 40, 50), t},
      {"embed_enlarged", paste(bg, resample(t, 90, 72), 120, 60), t},
      {"unrelated_noise", noise(240, 160, 23, 0, 255), t},
      {"translucent_template", paste(Raster(240, 160, {255, 255, 255, 255}), translucent, 70, 30), translucent},
  };
}

}  // namespace gtown::testing
