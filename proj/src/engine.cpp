#include "graphictown/engine.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "graphictown/filters.hpp"
#include "graphictown/font.hpp"
#include "graphictown/qr.hpp"

namespace gtown {

std::string_view shape_kind_name(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::Circle: return "circle";
    case ShapeKind::Ellipse: return "ellipse";
    case ShapeKind::Line: return "line";
    case ShapeKind::Polygon: return "polygon";
    case ShapeKind::Rectangle: return "rectangle";
    case ShapeKind::Star: return "star";
    case ShapeKind::Triangle: return "triangle";
  }
  return "?";
}

Document create_document(std::string_view doc_type) {
  static const std::map<std::string, std::pair<int, int>, std::less<>> kDims = {
      {"book cover", {1296, 1728}},
      {"business card", {1050, 600}},
      {"postcard", {1296, 2129}},
      {"poster", {1296, 1728}},
  };
  auto it = kDims.find(doc_type);
  if (it == kDims.end()) throw std::invalid_argument("unknown docType \"" + std::string(doc_type) + "\"");
  Document doc;
  doc.doc_type = it->first;
  doc.width = it->second.first;
  doc.height = it->second.second;
  return doc;
}

Document create_document_custom(int width, int height) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("document size must be positive");
  Document doc;
  doc.doc_type = "custom";
  doc.width = width;
  doc.height = height;
  return doc;
}

namespace {

constexpr std::string_view kBundledFont = "DejaVu Sans Mono";

int px(double v) { return static_cast<int>(std::lround(v)); }

std::int64_t q8(double v) { return std::llround(v * 256.0); }

// Splits on '\n' and maps each code point outside printable ASCII to '?'.
std::vector<std::string> text_lines(std::string_view content) {
  std::vector<std::string> lines(1);
  for (std::size_t i = 0; i < content.size(); ++i) {
    const unsigned char c = static_cast<unsigned char>(content[i]);
    if (c == '\n') {
      lines.emplace_back();
    } else if (c == '\r') {
      continue;
    } else if (c == '\t') {
      lines.back().push_back(' ');
    } else if (c >= 0x20 && c < 0x7F) {
      lines.back().push_back(static_cast<char>(c));
    } else if (c >= 0xC0 || c < 0x80) {
      lines.back().push_back('?');  // lead byte or control character
    }
  }
  return lines;
}

double glyph_advance(double size) { return font::kCellWidth * size / font::kAtlasEm; }
double line_height(double size) { return font::kCellHeight * size / font::kAtlasEm; }

// Chamfer (3-4) distance to the nearest transparent pixel, in thirds of a px.
std::vector<int> inner_distance(const Raster& r) {
  const int w = r.width(), h = r.height();
  constexpr int kInf = 1 << 28;
  std::vector<int> d(static_cast<std::size_t>(w) * h);
  auto at = [&](int x, int y) -> int {
    if (x < 0 || y < 0 || x >= w || y >= h) return 0;
    return d[static_cast<std::size_t>(y) * w + x];
  };
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) d[static_cast<std::size_t>(y) * w + x] = r.at(x, y).a >= 128 ? kInf : 0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      int& v = d[static_cast<std::size_t>(y) * w + x];
      if (v == 0) continue;
      v = std::min({v, at(x - 1, y) + 3, at(x, y - 1) + 3, at(x - 1, y - 1) + 4, at(x + 1, y - 1) + 4});
    }
  for (int y = h - 1; y >= 0; --y)
    for (int x = w - 1; x >= 0; --x) {
      int& v = d[static_cast<std::size_t>(y) * w + x];
      if (v == 0) continue;
      v = std::min({v, at(x + 1, y) + 3, at(x, y + 1) + 3, at(x + 1, y + 1) + 4, at(x - 1, y + 1) + 4});
    }
  return d;
}

void apply_stroke(Raster& r, const Stroke& stroke) {
  const long limit = std::lround(stroke.width * 3.0);
  if (limit <= 0 || r.empty()) return;
  const auto d = inner_distance(r);
  for (int y = 0; y < r.height(); ++y)
    for (int x = 0; x < r.width(); ++x) {
      const Rgba p = r.at(x, y);
      if (p.a == 0) continue;
      const int dv = d[static_cast<std::size_t>(y) * r.width() + x];
      // Antialiased fringe pixels below the 50% threshold count as boundary.
      if (dv <= limit) r.set(x, y, Rgba{stroke.color.r, stroke.color.g, stroke.color.b, p.a});
    }
}

Raster glyph_raster(char c, int w, int h, Rgba color) {
  const int cw = font::kCellWidth, ch = font::kCellHeight;
  Raster cell(cw, ch);
  const unsigned char* g = &font::kAtlas[static_cast<std::size_t>(c - 0x20) * cw * ch];
  for (int y = 0; y < ch; ++y)
    for (int x = 0; x < cw; ++x) cell.set(x, y, Rgba{color.r, color.g, color.b, g[y * cw + x]});
  return resample(cell, w, h);
}

void composite_layer_raster(Raster& canvas, const Raster& r, const Layer& layer) {
  const int op = quantize_opacity(layer.opacity);
  const FixedTrig t = fixed_trig(layer.rotation);
  if (t.sin_q == 0 && t.cos_q == 65536) {
    composite_over(canvas, r, px(layer.x), px(layer.y), op);
  } else {
    composite_rotated(canvas, r, q8(layer.x) + r.width() * 128LL, q8(layer.y) + r.height() * 128LL, layer.rotation,
                      op);
  }
}

void draw_text_layer(Raster& canvas, const Layer& layer) {
  const TextStyle& st = layer.text;
  const auto lines = text_lines(st.content);
  const auto [bw, bh] = text_block_size(st);
  if (bw == 0 || bh == 0) return;
  const double adv = glyph_advance(st.size), lh = line_height(st.size);
  const int op = quantize_opacity(layer.opacity);
  const FixedTrig t = fixed_trig(layer.rotation);
  const bool rotated = !(t.sin_q == 0 && t.cos_q == 65536);
  const std::int64_t cx = q8(layer.x) + bw * 128LL, cy = q8(layer.y) + bh * 128LL;
  std::map<std::tuple<char, int, int>, Raster> cache;
  for (std::size_t l = 0; l < lines.size(); ++l) {
    const double lw = lines[l].size() * adv;
    double off = 0.0;
    if (st.alignment == "center") off = (bw - lw) / 2.0;
    else if (st.alignment == "right") off = bw - lw;
    const int y0 = px(l * lh), y1 = px((l + 1) * lh);
    for (std::size_t i = 0; i < lines[l].size(); ++i) {
      const char c = lines[l][i];
      if (c == ' ') continue;
      const int x0 = px(off + i * adv), x1 = px(off + (i + 1) * adv);
      const int gw = x1 - x0, gh = y1 - y0;
      if (gw <= 0 || gh <= 0) continue;
      auto key = std::make_tuple(c, gw, gh);
      auto it = cache.find(key);
      if (it == cache.end()) {
        Raster g = glyph_raster(c, gw, gh, st.color);
        apply_stroke(g, layer.stroke);
        it = cache.emplace(key, std::move(g)).first;
      }
      if (!rotated) {
        composite_over(canvas, it->second, px(layer.x) + x0, px(layer.y) + y0, op);
        continue;
      }
      // Glyph center relative to the block center, rotated clockwise.
      const std::int64_t gx = (2LL * x0 + gw - bw) * 128, gy = (2LL * y0 + gh - bh) * 128;
      const std::int64_t rx = (gx * t.cos_q - gy * t.sin_q) >> 16;
      const std::int64_t ry = (gx * t.sin_q + gy * t.cos_q) >> 16;
      composite_rotated(canvas, it->second, cx + rx, cy + ry, layer.rotation, op);
    }
  }
}

bool point_in_polygon(const std::vector<std::pair<double, double>>& poly, double x, double y) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const auto [xi, yi] = poly[i];
    const auto [xj, yj] = poly[j];
    if ((yi > y) != (yj > y) && x < (xj - xi) * (y - yi) / (yj - yi) + xi) inside = !inside;
  }
  return inside;
}

std::vector<std::pair<double, double>> unit_polygon(ShapeKind kind, int sides) {
  std::vector<std::pair<double, double>> pts;
  if (kind == ShapeKind::Triangle) return {{0.5, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
  const int n = kind == ShapeKind::Star ? 2 * sides : sides;
  for (int k = 0; k < n; ++k) {
    const double step = kind == ShapeKind::Star ? 180.0 / sides : 360.0 / sides;
    const FixedTrig t = fixed_trig(-90.0 + step * k);
    const double r = (kind == ShapeKind::Star && k % 2 == 1) ? 0.5 : 1.0;
    pts.emplace_back(0.5 + 0.5 * r * t.cos_q / 65536.0, 0.5 + 0.5 * r * t.sin_q / 65536.0);
  }
  return pts;
}

}  // namespace

std::pair<int, int> text_block_size(const TextStyle& style) {
  const auto lines = text_lines(style.content);
  std::size_t longest = 0;
  for (const auto& l : lines) longest = std::max(longest, l.size());
  if (longest == 0) return {0, 0};
  return {px(longest * glyph_advance(style.size)), px(lines.size() * line_height(style.size))};
}

std::pair<int, int> layer_pixel_size(const Layer& layer) {
  if (layer.kind == LayerKind::Text) return text_block_size(layer.text);
  return {std::max(1, static_cast<int>(std::ceil(layer.width - 1e-9))),
          std::max(1, static_cast<int>(std::ceil(layer.height - 1e-9)))};
}

namespace {

/// Pixels [x0,x1) x [y0,y1) of the shape layer, stroke included.
Raster render_shape_window(const Layer& layer, int x0, int y0, int x1, int y1) {
  const ShapeGeometry& g = layer.shape;
  Raster out(x1 - x0, y1 - y0);
  const double fw = layer.width, fh = layer.height;
  std::vector<std::pair<double, double>> poly;
  if (g.kind == ShapeKind::Polygon || g.kind == ShapeKind::Star || g.kind == ShapeKind::Triangle) {
    for (auto [u, v] : unit_polygon(g.kind, g.sides)) poly.emplace_back(u * fw, v * fh);
  }
  const double lx0 = g.line[0] * fw, ly0 = g.line[1] * fh, lx1 = g.line[2] * fw, ly1 = g.line[3] * fh;
  const double half = g.line_width / 2.0;
  auto inside = [&](double x, double y) -> bool {
    switch (g.kind) {
      case ShapeKind::Rectangle: return x < fw && y < fh;
      case ShapeKind::Circle:
      case ShapeKind::Ellipse: {
        const double u = (x - fw / 2) / (fw / 2), v = (y - fh / 2) / (fh / 2);
        return u * u + v * v <= 1.0;
      }
      case ShapeKind::Line: {
        const double dx = lx1 - lx0, dy = ly1 - ly0;
        const double len2 = dx * dx + dy * dy;
        double t = len2 > 0 ? ((x - lx0) * dx + (y - ly0) * dy) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        const double ex = x - (lx0 + t * dx), ey = y - (ly0 + t * dy);
        return ex * ex + ey * ey <= half * half;
      }
      default: return point_in_polygon(poly, x, y);
    }
  };
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x) {
      int hits = 0;
      for (int sy = 0; sy < 4; ++sy)
        for (int sx = 0; sx < 4; ++sx) hits += inside(x + (sx + 0.5) / 4.0, y + (sy + 0.5) / 4.0) ? 1 : 0;
      if (hits)
        out.set(x - x0, y - y0,
                Rgba{layer.fill.r, layer.fill.g, layer.fill.b, static_cast<std::uint8_t>((hits * 255 + 8) / 16)});
    }
  apply_stroke(out, layer.stroke);
  return out;
}

/// Composites an unrotated shape, rasterizing only the part that can reach
/// the canvas. The window keeps a margin wider than the stroke so stroke
/// distances inside the visible part match a full rasterization.
void draw_shape_clipped(Raster& canvas, const Layer& layer) {
  const auto [w, h] = layer_pixel_size(layer);
  const int ox = px(layer.x), oy = px(layer.y);
  const int vx0 = std::clamp(-ox, 0, w), vx1 = std::clamp(canvas.width() - ox, 0, w);
  const int vy0 = std::clamp(-oy, 0, h), vy1 = std::clamp(canvas.height() - oy, 0, h);
  if (vx0 >= vx1 || vy0 >= vy1) return;
  const int margin = static_cast<int>(std::ceil(layer.stroke.width)) + 2;
  const int x0 = std::max(0, vx0 - margin), x1 = std::min(w, vx1 + margin);
  const int y0 = std::max(0, vy0 - margin), y1 = std::min(h, vy1 + margin);
  const Raster part = render_shape_window(layer, x0, y0, x1, y1);
  Raster visible(vx1 - vx0, vy1 - vy0);
  for (int y = vy0; y < vy1; ++y)
    std::copy_n(part.row(y - y0) + 4 * (vx0 - x0), 4 * (vx1 - vx0), visible.row(y - vy0));
  composite_over(canvas, visible, ox + vx0, oy + vy0, quantize_opacity(layer.opacity));
}

}  // namespace

Raster render_shape(const Layer& layer) {
  const auto [w, h] = layer_pixel_size(layer);
  return render_shape_window(layer, 0, 0, w, h);
}

Raster render(const Document& doc) {
  Raster canvas(doc.width, doc.height, doc.background);
  for (const Layer& layer : doc.layers) {
    switch (layer.kind) {
      case LayerKind::Text: draw_text_layer(canvas, layer); break;
      case LayerKind::Shape: {
        const FixedTrig t = fixed_trig(layer.rotation);
        if (t.sin_q == 0 && t.cos_q == 65536)
          draw_shape_clipped(canvas, layer);
        else
          composite_layer_raster(canvas, render_shape(layer), layer);
        break;
      }
      case LayerKind::Object: {
        if (!layer.source || layer.source->empty()) break;
        const auto [w, h] = layer_pixel_size(layer);
        composite_layer_raster(canvas, resample(*layer.source, w, h), layer);
        break;
      }
    }
  }
  return canvas;
}

bool VirtualFs::put(const std::string& key, SavedDoc doc) {
  const bool replaced = entries_.count(key) > 0;
  entries_[key] = Entry{std::move(doc), next_seq_++};
  return replaced;
}

const SavedDoc* VirtualFs::find(std::string_view name) const {
  auto it = entries_.find(name);
  if (it != entries_.end()) return &it->second.doc;
  const Entry* best = nullptr;
  for (const auto& [key, entry] : entries_) {
    const json& fn = entry.doc.meta["fileName"];
    if (fn.is_string() && fn.get_ref<const std::string&>() == name && (!best || entry.seq > best->seq)) best = &entry;
  }
  return best ? &best->doc : nullptr;
}

std::vector<std::string> VirtualFs::keys() const {
  std::vector<std::string> out;
  for (const auto& [key, entry] : entries_) out.push_back(key);
  return out;
}

void VirtualFs::spill(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  json manifest = json::array();
  for (const auto& [key, entry] : entries_) {
    const std::string file = key + ".png";
    write_png(dir / file, entry.doc.raster);
    manifest.push_back({{"file", key}, {"png", file}, {"format", entry.doc.format}, {"meta", entry.doc.meta}});
  }
  std::ofstream(dir / "manifest.json") << manifest.dump(2) << "\n";
}

Engine::Engine(const Registry& registry, const DesignInstance& instance, EngineOptions options)
    : registry_(registry), instance_(instance), options_(options) {}

void Engine::begin_session() { doc_.reset(); }

std::optional<LayerKind> Engine::layer_kind(std::string_view name) const {
  if (!doc_) return std::nullopt;
  for (const Layer& l : doc_->layers)
    if (l.name == name) return l.kind;
  return std::nullopt;
}

const ImageRef* Engine::instance_image(std::string_view name) const {
  for (const ImageRef& img : instance_.images)
    if (img.path == name || std::filesystem::path(img.path).filename().string() == name) return &img;
  return nullptr;
}

bool Engine::has_file(std::string_view name) const { return fs_.contains(name) || instance_image(name) != nullptr; }

namespace {

// Raised inside apply() to turn a runtime fault into a classified failure.
struct StepFailure {
  StepError error;
};

Layer* find_layer(Document& doc, const std::string& name) {
  for (Layer& l : doc.layers)
    if (l.name == name) return &l;
  return nullptr;
}

void add_layer(Document& doc, Layer layer) {
  std::erase_if(doc.layers, [&](const Layer& l) { return l.name == layer.name; });
  doc.layers.push_back(std::move(layer));
}

Rgba rgb_of(const json& p) {
  return Rgba{static_cast<std::uint8_t>(p.at("red").get<int>()), static_cast<std::uint8_t>(p.at("green").get<int>()),
              static_cast<std::uint8_t>(p.at("blue").get<int>()), 255};
}

json layer_meta(const Layer& l) {
  json j = {{"name", l.name}, {"kind", layer_kind_name(l.kind)}};
  if (l.kind == LayerKind::Text) j["text"] = l.text.content;
  if (l.kind == LayerKind::Shape) j["shape"] = shape_kind_name(l.shape.kind);
  if (l.kind == LayerKind::Object && !l.source_file.empty()) j["source"] = l.source_file;
  return j;
}

}  // namespace

ExecRecord Engine::execute_step(const WorkflowStep& step) {
  ExecRecord rec{step.id, ExecStatus::Ok, std::nullopt};
  StepCheck check = check_step_signature(step, registry_, options_.alias_export_document);
  if (!check.error) check.error = check_dependencies(*check.spec, *check.params, *this);
  if (check.error) {
    rec.status = ExecStatus::Failed;
    rec.error = check.error;
    return rec;
  }
  const ActionEffect effect = action_effect(check.spec->name);
  try {
    std::vector<std::string> notices;
    if (effect.role == ActionEffect::Role::Save) {
      const json& p = *check.params;
      const std::string key = saved_file_key(p);
      SavedDoc saved;
      saved.raster = render(*doc_);
      saved.format = p.at("format").get<std::string>();
      json layers = json::array();
      for (const Layer& l : doc_->layers) layers.push_back(layer_meta(l));
      saved.meta = {{"fileName", p.at("fileName")}, {"format", saved.format}, {"docType", doc_->doc_type},
                    {"width", doc_->width},         {"height", doc_->height}, {"layers", layers}};
      if (fs_.put(key, std::move(saved))) notices.push_back("step " + std::to_string(step.id) + ": replaced " + key);
      last_saved_ = key;
    } else {
      Document next = doc_ ? *doc_ : Document{};
      apply(*check.spec, *check.params, next, notices);
      doc_ = std::move(next);
    }
    notices_.insert(notices_.end(), notices.begin(), notices.end());
  } catch (const StepFailure& f) {
    rec.status = ExecStatus::Failed;
    rec.error = f.error;
  }
  return rec;
}

void Engine::apply(const ActionSpec& spec, const json& p, Document& doc, std::vector<std::string>& notices) {
  const std::string& a = spec.name;
  auto num = [&](const char* k) { return p.at(k).get<double>(); };
  auto str = [&](const char* k) { return p.at(k).get<std::string>(); };
  auto target = [&]() -> Layer& { return *find_layer(doc, str("layerName")); };

  if (a == "CreateDocument") {
    doc = create_document(str("docType"));
  } else if (a == "CreateDocumentCustom") {
    doc = create_document_custom(px(num("width")), px(num("height")));
  } else if (a == "SetBackgroundColor") {
    doc.background = rgb_of(p);
  } else if (a == "CreateText") {
    Layer l;
    l.name = str("layerName");
    l.kind = LayerKind::Text;
    l.text.content = str("textString");
    const auto [bw, bh] = text_block_size(l.text);
    l.x = (doc.width - bw) / 2.0;
    l.y = (doc.height - bh) / 2.0;
    add_layer(doc, std::move(l));
  } else if (a == "ApplyFont") {
    target().text.font = str("fontName");
    if (str("fontName") != kBundledFont)
      notices.push_back("font \"" + str("fontName") + "\" is not bundled; rendering with " + std::string(kBundledFont));
  } else if (a == "ColorText") {
    target().text.color = rgb_of(p);
  } else if (a == "AlignText") {
    target().text.alignment = str("alignment");
  } else if (a == "ResizeText") {
    target().text.size = num("fontSize");
  } else if (a == "ArrangeText") {
    auto it = std::find_if(doc.layers.begin(), doc.layers.end(), [&](const Layer& l) { return l.name == str("layerName"); });
    const std::string how = str("arrangement");
    const auto idx = static_cast<std::size_t>(it - doc.layers.begin());
    if (how == "front") {
      std::rotate(it, it + 1, doc.layers.end());
    } else if (how == "back") {
      std::rotate(doc.layers.begin(), it, it + 1);
    } else if (how == "frontward" && idx + 1 < doc.layers.size()) {
      std::swap(doc.layers[idx], doc.layers[idx + 1]);
    } else if (how == "backward" && idx > 0) {
      std::swap(doc.layers[idx], doc.layers[idx - 1]);
    }
  } else if (a == "StrokeText" || a == "StrokeDrawing") {
    target().stroke = Stroke{num("strokeWidth"), rgb_of(p)};
  } else if (a.rfind("Draw", 0) == 0) {
    Layer l;
    l.name = str("layerName");
    l.kind = LayerKind::Shape;
    l.fill = rgb_of(p);
    ShapeGeometry& g = l.shape;
    if (a == "DrawCircle") {
      g.kind = ShapeKind::Circle;
      l.width = l.height = 2 * num("radius");
    } else if (a == "DrawEllipse") {
      g.kind = ShapeKind::Ellipse;
      l.width = 2 * num("majorRadius");
      l.height = 2 * num("minorRadius");
    } else if (a == "DrawPolygon" || a == "DrawStar") {
      g.kind = a == "DrawPolygon" ? ShapeKind::Polygon : ShapeKind::Star;
      g.sides = p.at(a == "DrawPolygon" ? "sides" : "numPoints").get<int>();
      l.width = l.height = 2 * num("radius");
    } else if (a == "DrawRectangle") {
      g.kind = ShapeKind::Rectangle;
      l.width = num("width");
      l.height = num("height");
    } else if (a == "DrawTriangle") {
      g.kind = ShapeKind::Triangle;
      l.width = num("base");
      l.height = num("height");
    } else {
      g.kind = ShapeKind::Line;
      g.line_width = std::max(1.0, num("strokeWidth"));
      const double sx = num("startX"), sy = num("startY"), ex = num("endX"), ey = num("endY");
      l.x = std::min(sx, ex) - g.line_width / 2;
      l.y = std::min(sy, ey) - g.line_width / 2;
      l.width = std::abs(ex - sx) + g.line_width;
      l.height = std::abs(ey - sy) + g.line_width;
      g.line = {(sx - l.x) / l.width, (sy - l.y) / l.height, (ex - l.x) / l.width, (ey - l.y) / l.height};
    }
    if (g.kind != ShapeKind::Line) {
      l.x = (doc.width - l.width) / 2.0;
      l.y = (doc.height - l.height) / 2.0;
    }
    add_layer(doc, std::move(l));
  } else if (a == "ImportObject") {
    const std::string file = str("fileName");
    Layer l;
    l.name = str("layerName");
    l.kind = LayerKind::Object;
    l.source_file = file;
    if (const SavedDoc* saved = fs_.find(file)) {
      l.source = std::make_shared<const Raster>(saved->raster);
    } else if (const ImageRef* img = instance_image(file)) {
      try {
        l.source = std::make_shared<const Raster>(read_image(img->resolved.empty() ? std::filesystem::path(img->path) : img->resolved));
      } catch (const std::exception& e) {
        throw StepFailure{StepError::global("cannot load \"" + file + "\": " + e.what())};
      }
    } else {
      throw StepFailure{StepError::global("\"" + file + "\" is not available")};
    }
    l.width = l.source->width();
    l.height = l.source->height();
    add_layer(doc, std::move(l));
  } else if (a == "GenerateQRObject") {
    Layer l;
    l.name = str("layerName");
    l.kind = LayerKind::Object;
    l.source_file = "qr:" + str("linkURL");
    try {
      l.source = std::make_shared<const Raster>(QrCode::encode(str("linkURL")).render(8));
    } catch (const std::length_error& e) {
      throw StepFailure{StepError::invalid_params(e.what())};
    }
    l.width = l.source->width();
    l.height = l.source->height();
    add_layer(doc, std::move(l));
  } else if (a == "RemoveText" || a == "RemoveDrawing" || a == "RemoveObject") {
    std::erase_if(doc.layers, [&](const Layer& l) { return l.name == str("layerName"); });
  } else if (a == "RepositionText" || a == "RepositionDrawing" || a == "RepositionObject") {
    target().x = num("posX");
    target().y = num("posY");
  } else if (a == "ResizeDrawing" || a == "ResizeObject") {
    target().width = num("width");
    target().height = num("height");
  } else if (a == "RotateText" || a == "RotateDrawing" || a == "RotateObject") {
    target().rotation = num("angle");
  } else if (a == "OpacityText" || a == "OpacityDrawing" || a == "OpacityObject") {
    target().opacity = num("opacity");
  } else if (is_adjustment(a)) {
    Layer& l = target();
    if (l.kind == LayerKind::Object) {
      l.source = std::make_shared<const Raster>(apply_adjustment(a, p, *l.source));
    } else {
      notices.push_back(a + " on non-object layer \"" + l.name + "\" recorded without pixel changes");
    }
    json adj = p;
    adj["action"] = a;
    l.adjustments.push_back(std::move(adj));
  } else {
    throw StepFailure{StepError::invalid_action("no engine semantics for " + a)};
  }
}

RunResult run_workflow(const Workflow& workflow, const DesignInstance& instance, const Registry& registry,
                       const EngineOptions& options) {
  Engine engine(registry, instance, options);
  RunResult result;
  std::optional<ExpertId> current;
  for (const WorkflowStep& step : workflow.steps) {
    if (auto e = parse_expert(step.expert); e && e != current) {
      engine.begin_session();
      current = e;
    }
    result.records.push_back(engine.execute_step(step));
  }
  if (const auto& key = engine.last_saved()) {
    if (const SavedDoc* saved = engine.fs().find(*key)) {
      result.final_design = saved->raster;
      result.final_file = *key;
    }
  }
  result.fs = engine.fs();
  result.notices = engine.notices();
  return result;
}

}  // namespace gtown
