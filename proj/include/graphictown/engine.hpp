#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "graphictown/errors.hpp"
#include "graphictown/raster.hpp"
#include "graphictown/registry.hpp"
#include "graphictown/semantics.hpp"
#include "graphictown/workflow.hpp"

namespace gtown {

enum class ShapeKind { Circle, Ellipse, Line, Polygon, Rectangle, Star, Triangle };
std::string_view shape_kind_name(ShapeKind kind);

struct Stroke {
  double width = 0.0;  // px, drawn inside the shape or glyph boundary
  Rgba color{0, 0, 0, 255};
};

struct TextStyle {
  std::string content;
  std::string font = "Arial";
  double size = 24.0;  // pt, 1 pt = 1 px
  Rgba color{0, 0, 0, 255};
  std::string alignment = "left";
};

struct ShapeGeometry {
  ShapeKind kind = ShapeKind::Rectangle;
  int sides = 0;                     // polygon sides or star points
  std::array<double, 4> line{};      // endpoints as fractions of the layer box
  double line_width = 1.0;
};

struct Layer {
  std::string name;
  LayerKind kind = LayerKind::Object;
  double x = 0.0, y = 0.0;  // top-left, px
  double width = 1.0, height = 1.0;  // shapes and objects; text derives it from the style
  double rotation = 0.0;     // degrees clockwise about the layer center
  double opacity = 100.0;    // percent
  Stroke stroke;

  TextStyle text;
  ShapeGeometry shape;
  Rgba fill{0, 0, 0, 255};

  std::shared_ptr<const Raster> source;  // objects, after adjustments
  std::string source_file;
  std::vector<json> adjustments;
};

struct Document {
  std::string doc_type;
  int width = 0, height = 0;
  Rgba background{255, 255, 255, 255};
  std::vector<Layer> layers;  // paint order, bottom first
};

/// Preset dimensions for the docType enumeration. Throws
/// std::invalid_argument for anything else.
Document create_document(std::string_view doc_type);
Document create_document_custom(int width, int height);

/// Text block size for a style in px (max line width, line count * line height).
std::pair<int, int> text_block_size(const TextStyle& style);
/// Pixel size of a layer as it will be rasterized before rotation.
std::pair<int, int> layer_pixel_size(const Layer& layer);

Raster render_shape(const Layer& layer);
Raster render(const Document& doc);

struct SavedDoc {
  Raster raster;
  json meta;
  std::string format;
};

/// Files written by SaveDocument, shared by every expert session of a run.
class VirtualFs {
 public:
  /// Returns true when an earlier entry was replaced.
  bool put(const std::string& key, SavedDoc doc);
  /// Exact "fileName.format" key, or the bare fileName of the most recent save.
  const SavedDoc* find(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }
  std::vector<std::string> keys() const;
  std::size_t size() const { return entries_.size(); }

  /// Writes "<key>.png" per entry and manifest.json.
  void spill(const std::filesystem::path& dir) const;

 private:
  struct Entry {
    SavedDoc doc;
    std::uint64_t seq = 0;
  };
  std::map<std::string, Entry, std::less<>> entries_;
  std::uint64_t next_seq_ = 0;
};

struct EngineOptions {
  bool alias_export_document = false;
};

/// Interpreter state for one workflow run.
class Engine : public SessionView {
 public:
  Engine(const Registry& registry, const DesignInstance& instance, EngineOptions options = {});

  /// Drops the current document; the next expert starts from scratch.
  void begin_session();
  /// Checks, then applies. A failed step leaves all state untouched.
  ExecRecord execute_step(const WorkflowStep& step);

  const std::optional<Document>& document() const { return doc_; }
  const VirtualFs& fs() const { return fs_; }
  const std::vector<std::string>& notices() const { return notices_; }
  const std::optional<std::string>& last_saved() const { return last_saved_; }

  bool has_document() const override { return doc_.has_value(); }
  std::optional<LayerKind> layer_kind(std::string_view name) const override;
  bool has_file(std::string_view name) const override;

 private:
  const ImageRef* instance_image(std::string_view name) const;
  void apply(const ActionSpec& spec, const json& params, Document& doc, std::vector<std::string>& notices);

  const Registry& registry_;
  const DesignInstance& instance_;
  EngineOptions options_;
  std::optional<Document> doc_;
  VirtualFs fs_;
  std::vector<std::string> notices_;
  std::optional<std::string> last_saved_;
};

struct RunResult {
  std::vector<ExecRecord> records;
  std::optional<Raster> final_design;
  std::optional<std::string> final_file;  // VirtualFs key of the final design
  VirtualFs fs;
  std::vector<std::string> notices;
};

/// Executes every step, opening a fresh session whenever the step's expert
/// parses and differs from the previous one.
RunResult run_workflow(const Workflow& workflow, const DesignInstance& instance, const Registry& registry,
                       const EngineOptions& options = {});

}  // namespace gtown
