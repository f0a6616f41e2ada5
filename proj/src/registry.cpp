#include "graphictown/registry.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "text_util.hpp"

namespace gtown {

namespace {

constexpr double kMaxExtent = 20000.0;

struct ExpertNames {
  ExpertId id;
  std::string_view display;
  std::string_view key;
};

constexpr std::array<ExpertNames, 3> kExpertNames = {{
    {ExpertId::PhotoEditor, "Photo Editor", "PhotoEditor"},
    {ExpertId::VectorGraphicEditor, "Vector Graphic Editor", "VectorGraphicEditor"},
    {ExpertId::LayoutDesigner, "Layout Designer", "LayoutDesigner"},
}};

// Parameter vocabulary shared by all actions.
ParamSpec text_param(std::string name, double min_len = 1.0, double max_len = 100000.0) {
  return {std::move(name), ParamKind::Text, Interval{min_len, max_len}, {}, "text"};
}

ParamSpec int_param(std::string name, double lo, double hi, std::string unit) {
  return {std::move(name), ParamKind::Integer, Interval{lo, hi}, {}, std::move(unit)};
}

ParamSpec real_param(std::string name, double lo, double hi, std::string unit) {
  return {std::move(name), ParamKind::Real, Interval{lo, hi}, {}, std::move(unit)};
}

ParamSpec enum_param(std::string name, std::vector<std::string> allowed) {
  return {std::move(name), ParamKind::Enumerated, std::nullopt, std::move(allowed), "choice"};
}

ParamSpec layer_name() { return text_param("layerName"); }
ParamSpec color(std::string name) { return int_param(std::move(name), 0, 255, "RGB 0-255"); }
ParamSpec position(std::string name) { return real_param(std::move(name), -kMaxExtent, kMaxExtent, "px"); }
ParamSpec extent(std::string name) { return real_param(std::move(name), 1, kMaxExtent, "px"); }
ParamSpec angle() { return real_param("angle", 0, 360, "degrees"); }
ParamSpec opacity() { return real_param("opacity", 0, 100, "percent"); }
ParamSpec stroke_width() { return real_param("strokeWidth", 0, 1000, "px"); }

std::vector<ParamSpec> with_rgb(std::vector<ParamSpec> params) {
  params.push_back(color("red"));
  params.push_back(color("green"));
  params.push_back(color("blue"));
  return params;
}

constexpr auto P = ExpertId::PhotoEditor;
constexpr auto V = ExpertId::VectorGraphicEditor;
constexpr auto L = ExpertId::LayoutDesigner;

std::vector<ActionSpec> builtin_actions() {
  using C = ActionCategory;
  const std::vector<std::string> doc_types = {"book cover", "business card", "postcard", "poster"};
  const std::vector<std::string> formats = {"psd", "ai",  "pdf", "png",  "jpg", "jpeg", "indd",
                                            "svg", "tif", "tiff", "eps", "gif", "bmp"};
  std::vector<ActionSpec> a;

  // Basic
  a.push_back({"CreateDocument", C::Basic, {enum_param("docType", doc_types)}, {P, V, L},
               "Create new document with pre-defined dimensions."});
  a.push_back({"CreateDocumentCustom", C::Basic, {extent("width"), extent("height")}, {P, V, L},
               "Create new document with desired width and height values."});
  a.push_back({"SetBackgroundColor", C::Basic, with_rgb({}), {P, V, L},
               "Set the background color to desired RGB color."});
  a.push_back({"SaveDocument", C::Basic, {text_param("fileName"), enum_param("format", formats)},
               {P, V, L}, "Save the current document into desired format."});

  // Drawing
  a.push_back({"DrawCircle", C::Drawing, with_rgb({layer_name(), extent("radius")}), {V},
               "Draw a circle of desired radius and RGB color."});
  a.push_back({"DrawEllipse", C::Drawing,
               with_rgb({layer_name(), extent("majorRadius"), extent("minorRadius")}), {V},
               "Draw an ellipse of desired radius and RGB color."});
  a.push_back({"DrawLine", C::Drawing,
               with_rgb({layer_name(), position("startX"), position("startY"), position("endX"),
                         position("endY"), stroke_width()}),
               {V}, "Draw a line of desired length, stroke, and RGB color."});
  a.push_back({"DrawPolygon", C::Drawing,
               with_rgb({layer_name(), int_param("sides", 3, 100, "count"), extent("radius")}), {V},
               "Draw a polygon of desired number of sides, radius, and RGB color."});
  a.push_back({"DrawRectangle", C::Drawing, with_rgb({layer_name(), extent("width"), extent("height")}),
               {V}, "Draw a rectangle of desired size and RGB color."});
  a.push_back({"DrawStar", C::Drawing,
               with_rgb({layer_name(), int_param("numPoints", 3, 100, "count"), extent("radius")}),
               {V}, "Draw a star of desired number of points, radius, and RGB color."});
  a.push_back({"DrawTriangle", C::Drawing, with_rgb({layer_name(), extent("base"), extent("height")}),
               {V}, "Draw a triangle of desired size and RGB color."});
  a.push_back({"OpacityDrawing", C::Drawing, {layer_name(), opacity()}, {V},
               "Adjust opacity of a drawing."});
  a.push_back({"RemoveDrawing", C::Drawing, {layer_name()}, {V}, "Remove a drawing."});
  a.push_back({"RepositionDrawing", C::Drawing, {layer_name(), position("posX"), position("posY")},
               {V}, "Reposition a drawing to desired x and y-axis position."});
  a.push_back({"ResizeDrawing", C::Drawing, {layer_name(), extent("width"), extent("height")}, {V},
               "Resize a drawing to desired width and height."});
  a.push_back({"RotateDrawing", C::Drawing, {layer_name(), angle()}, {V},
               "Rotate a drawing to desired angle."});
  a.push_back({"StrokeDrawing", C::Drawing, with_rgb({layer_name(), stroke_width()}), {V},
               "Adjust stroke of a drawing with desired width and RGB color."});

  // Text
  a.push_back({"AlignText", C::Text, {layer_name(), enum_param("alignment", {"left", "center", "right"})},
               {P, V, L}, "Align text to desired alignment (left, center, right)."});
  a.push_back({"ApplyFont", C::Text, {layer_name(), text_param("fontName")}, {P, V, L},
               "Apply font to text."});
  a.push_back({"ArrangeText", C::Text,
               {layer_name(), enum_param("arrangement", {"front", "frontward", "back", "backward"})},
               {P, V, L}, "Arrange text to desired arrangement (front, frontward, back, backward)."});
  a.push_back({"ColorText", C::Text, with_rgb({layer_name()}), {P, V, L},
               "Color text to desired RGB color."});
  a.push_back({"CreateText", C::Text, {layer_name(), text_param("textString", 0.0)}, {P, V, L},
               "Create a new text (default to Arial font)."});
  a.push_back({"OpacityText", C::Text, {layer_name(), opacity()}, {P, V}, "Adjust opacity of text."});
  a.push_back({"RemoveText", C::Text, {layer_name()}, {P, V, L}, "Remove text."});
  a.push_back({"RepositionText", C::Text, {layer_name(), position("posX"), position("posY")}, {P, V, L},
               "Reposition text to desired x and y-axis position."});
  a.push_back({"ResizeText", C::Text, {layer_name(), real_param("fontSize", 1, 1000, "pt")}, {P, V, L},
               "Resize text to desired font size."});
  a.push_back({"RotateText", C::Text, {layer_name(), angle()}, {P, V, L},
               "Rotate text to desired angle."});
  a.push_back({"StrokeText", C::Text, with_rgb({layer_name(), stroke_width()}), {V, L},
               "Adjust stroke of text with desired width and RGB color."});

  // Object
  a.push_back({"ImportObject", C::Object, {text_param("fileName"), layer_name()}, {P, V, L},
               "Import an image or object from file path."});
  a.push_back({"OpacityObject", C::Object, {layer_name(), opacity()}, {P, V},
               "Adjust opacity of an object."});
  a.push_back({"RemoveObject", C::Object, {layer_name()}, {P, V, L}, "Remove an object."});
  a.push_back({"RepositionObject", C::Object, {layer_name(), position("posX"), position("posY")},
               {P, V, L}, "Reposition an object to desired x and y-axis position."});
  a.push_back({"ResizeObject", C::Object, {layer_name(), extent("width"), extent("height")}, {P, V, L},
               "Resize an object to desired width and height."});
  a.push_back({"RotateObject", C::Object, {layer_name(), angle()}, {P, V, L},
               "Rotate an object to desired angle."});
  a.push_back({"GenerateQRObject", C::Object, {layer_name(), text_param("linkURL", 1, 2331)}, {L},
               "Generate a QR code with desired URL embedded."});
  a.push_back({"AdjustBC", C::Object,
               {layer_name(), real_param("brightness", -150, 150, "level"),
                real_param("contrast", -150, 150, "level")},
               {P}, "Adjust brightness and contrast level of an object."});
  a.push_back({"AdjustBW", C::Object, {layer_name()}, {P}, "Change an object to black & white."});
  a.push_back({"AdjustHSL", C::Object,
               {layer_name(), real_param("hue", -180, 180, "degrees"),
                real_param("saturation", -100, 100, "percent"), real_param("light", -100, 100, "percent")},
               {P}, "Adjust hue, saturation, and lightness level of an object."});
  a.push_back({"BlurObject", C::Object, {layer_name(), real_param("blurAmount", 0, 250, "px")}, {P},
               "Blur an object to desired amount."});
  a.push_back({"PhotoFilter", C::Object,
               {layer_name(), text_param("filterType"), real_param("density", 0, 100, "percent")},
               {P}, "Apply a photo filter to an object with desired density."});
  a.push_back({"GlassFilter", C::Object,
               {layer_name(), real_param("distortion", 0, 20, "level"),
                real_param("smoothness", 1, 15, "level"), real_param("scaling", 50, 200, "percent")},
               {P}, "Apply a glass filter to an object with the specified parameters."});
  a.push_back({"GlowFilter", C::Object,
               {layer_name(), real_param("graininess", 0, 10, "level"),
                real_param("glowAmount", 0, 20, "level"), real_param("clearAmount", 0, 20, "level")},
               {P}, "Apply a glow filter to an object with the specified parameters."});
  a.push_back({"OceanRippleFilter", C::Object,
               {layer_name(), real_param("rippleSize", 1, 15, "level"),
                real_param("rippleMagnitude", 0, 20, "level")},
               {P}, "Apply an ocean ripple filter to an object with the specified parameters."});
  a.push_back({"StainedGlassFilter", C::Object,
               {layer_name(), real_param("cellSize", 2, 50, "px"),
                real_param("borderThickness", 1, 20, "px"), real_param("lightIntensity", 0, 10, "level")},
               {P}, "Apply a stained glass filter to an object with the specified parameters."});
  a.push_back({"PatchWorkFilter", C::Object,
               {layer_name(), real_param("squareSize", 0, 10, "level"), real_param("relief", 0, 25, "level")},
               {P}, "Apply a patchwork filter to an object with the specified parameters."});
  a.push_back({"WatercolorFilter", C::Object,
               {layer_name(), real_param("brushDetail", 1, 14, "level"),
                real_param("shadowIntensity", 0, 10, "level"), int_param("texture", 1, 3, "level")},
               {P}, "Apply a watercolor filter to an object with the specified parameters."});
  return a;
}

// Numeric view of a JSON value; numeric strings are coerced.
std::optional<double> as_number(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (!v.is_string()) return std::nullopt;
  const std::string s = detail::trim(v.get_ref<const std::string&>());
  if (s.empty()) return std::nullopt;
  double out = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || !std::isfinite(out)) return std::nullopt;
  return out;
}

std::string format_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

struct CheckedValue {
  std::optional<json> value;
  std::optional<ParamViolation> violation;
};

CheckedValue check_value(const ParamSpec& spec, const json& v) {
  using K = ParamViolation::Kind;
  auto fail = [&](K kind, std::string msg) {
    return CheckedValue{std::nullopt, ParamViolation{kind, spec.name, std::move(msg)}};
  };
  switch (spec.kind) {
    case ParamKind::Integer:
    case ParamKind::Real: {
      auto num = as_number(v);
      if (!num) return fail(K::TypeMismatch, "expected a number for \"" + spec.name + "\"");
      if (spec.kind == ParamKind::Integer && std::floor(*num) != *num)
        return fail(K::TypeMismatch, "expected an integer for \"" + spec.name + "\"");
      if (spec.range && !spec.range->contains(*num))
        return fail(K::OutOfRange, "\"" + spec.name + "\" = " + format_number(*num) + " outside [" +
                                       format_number(spec.range->lo) + ", " +
                                       format_number(spec.range->hi) + "]");
      if (spec.kind == ParamKind::Integer) return {json(static_cast<std::int64_t>(*num)), std::nullopt};
      return {json(*num), std::nullopt};
    }
    case ParamKind::Text: {
      if (!v.is_string()) return fail(K::TypeMismatch, "expected text for \"" + spec.name + "\"");
      const auto len = static_cast<double>(v.get_ref<const std::string&>().size());
      if (spec.range && !spec.range->contains(len))
        return fail(K::OutOfRange, "length of \"" + spec.name + "\" outside [" +
                                       format_number(spec.range->lo) + ", " +
                                       format_number(spec.range->hi) + "]");
      return {v, std::nullopt};
    }
    case ParamKind::Enumerated: {
      if (!v.is_string()) return fail(K::TypeMismatch, "expected one of the listed values for \"" + spec.name + "\"");
      const std::string given = detail::collapse_ws(detail::lower(v.get<std::string>()));
      for (const auto& allowed : spec.allowed) {
        if (detail::lower(allowed) == given) return {json(allowed), std::nullopt};
      }
      return fail(K::OutOfRange, "\"" + v.get<std::string>() + "\" is not an allowed value for \"" +
                                     spec.name + "\"");
    }
  }
  return fail(K::TypeMismatch, "unsupported parameter kind");
}

std::vector<ParamViolation> check_all(const ActionSpec& spec, const json& given, json* normalized) {
  std::vector<ParamViolation> out;
  if (!given.is_null() && !given.is_object()) {
    out.push_back({ParamViolation::Kind::TypeMismatch, "", "parameters must be a JSON object"});
    return out;
  }
  const json empty = json::object();
  const json& obj = given.is_null() ? empty : given;
  for (const auto& p : spec.params) {
    auto it = obj.find(p.name);
    if (it == obj.end()) {
      out.push_back({ParamViolation::Kind::Missing, p.name, "missing parameter \"" + p.name + "\""});
      continue;
    }
    auto checked = check_value(p, *it);
    if (checked.violation) {
      out.push_back(*checked.violation);
    } else if (normalized) {
      (*normalized)[p.name] = *checked.value;
    }
  }
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!spec.param(it.key())) {
      out.push_back({ParamViolation::Kind::Unknown, it.key(), "unknown parameter \"" + it.key() + "\""});
    }
  }
  return out;
}

std::optional<Interval> interval_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw std::invalid_argument("range must be [lo, hi]");
  return Interval{j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

std::string_view expert_name(ExpertId expert) {
  for (const auto& e : kExpertNames)
    if (e.id == expert) return e.display;
  return "?";
}

std::string_view expert_key(ExpertId expert) {
  for (const auto& e : kExpertNames)
    if (e.id == expert) return e.key;
  return "?";
}

std::optional<ExpertId> parse_expert(std::string_view text) {
  const std::string norm = detail::collapse_ws(detail::lower(text));
  for (const auto& e : kExpertNames) {
    if (norm == detail::lower(e.display) || norm == detail::lower(e.key)) return e.id;
  }
  return std::nullopt;
}

std::string_view category_name(ActionCategory category) {
  switch (category) {
    case ActionCategory::Basic: return "Basic";
    case ActionCategory::Drawing: return "Drawing";
    case ActionCategory::Text: return "Text";
    case ActionCategory::Object: return "Object";
  }
  return "?";
}

std::optional<ActionCategory> parse_category(std::string_view text) {
  for (auto c : {ActionCategory::Basic, ActionCategory::Drawing, ActionCategory::Text, ActionCategory::Object})
    if (category_name(c) == text) return c;
  return std::nullopt;
}

std::string_view param_kind_name(ParamKind kind) {
  switch (kind) {
    case ParamKind::Integer: return "integer";
    case ParamKind::Real: return "real";
    case ParamKind::Text: return "text";
    case ParamKind::Enumerated: return "enumerated";
  }
  return "?";
}

std::optional<ParamKind> parse_param_kind(std::string_view text) {
  for (auto k : {ParamKind::Integer, ParamKind::Real, ParamKind::Text, ParamKind::Enumerated})
    if (param_kind_name(k) == text) return k;
  return std::nullopt;
}

std::string_view violation_kind_name(ParamViolation::Kind kind) {
  switch (kind) {
    case ParamViolation::Kind::Missing: return "missing";
    case ParamViolation::Kind::Unknown: return "unknown";
    case ParamViolation::Kind::TypeMismatch: return "type_mismatch";
    case ParamViolation::Kind::OutOfRange: return "out_of_range";
  }
  return "?";
}

bool ActionSpec::supports(ExpertId expert) const {
  return std::find(experts.begin(), experts.end(), expert) != experts.end();
}

const ParamSpec* ActionSpec::param(std::string_view n) const {
  for (const auto& p : params)
    if (p.name == n) return &p;
  return nullptr;
}

Registry::Registry(std::vector<ActionSpec> actions) : actions_(std::move(actions)) {
  for (std::size_t i = 0; i < actions_.size(); ++i) {
    auto& spec = actions_[i];
    if (spec.experts.empty()) throw std::invalid_argument("action " + spec.name + " has no experts");
    std::sort(spec.experts.begin(), spec.experts.end());
    spec.experts.erase(std::unique(spec.experts.begin(), spec.experts.end()), spec.experts.end());
    for (const auto& p : spec.params) {
      if (p.kind == ParamKind::Enumerated && p.allowed.empty())
        throw std::invalid_argument("enumerated parameter " + spec.name + "." + p.name + " has no values");
    }
    if (!index_.emplace(spec.name, i).second)
      throw std::invalid_argument("duplicate action name " + spec.name);
  }
}

const ActionSpec* Registry::lookup(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? nullptr : &actions_[it->second];
}

std::vector<const ActionSpec*> Registry::actions_for_expert(ExpertId expert) const {
  std::vector<const ActionSpec*> out;
  for (const auto& a : actions_)
    if (a.supports(expert)) out.push_back(&a);
  return out;
}

Registry load_builtin_registry() { return Registry(builtin_actions()); }

const Registry& builtin_registry() {
  static const Registry registry = load_builtin_registry();
  return registry;
}

std::vector<ParamViolation> validate_params(const ActionSpec& spec, const json& given) {
  return check_all(spec, given, nullptr);
}

std::optional<json> normalize_params(const ActionSpec& spec, const json& given) {
  json normalized = json::object();
  if (!check_all(spec, given, &normalized).empty()) return std::nullopt;
  return normalized;
}

std::string render_action_catalog(const Registry& registry, ExpertId expert) {
  std::ostringstream os;
  for (const ActionSpec* spec : registry.actions_for_expert(expert)) {
    os << "- " << spec->name << "(";
    for (std::size_t i = 0; i < spec->params.size(); ++i) os << (i ? ", " : "") << spec->params[i].name;
    os << "): " << spec->description << "\n";
    for (const auto& p : spec->params) {
      os << "    " << p.name << ": " << param_kind_name(p.kind);
      if (p.kind == ParamKind::Enumerated) {
        os << " {";
        for (std::size_t i = 0; i < p.allowed.size(); ++i) os << (i ? ", " : "") << p.allowed[i];
        os << "}";
      } else if (p.range && p.kind != ParamKind::Text) {
        os << " [" << format_number(p.range->lo) << ", " << format_number(p.range->hi) << "] " << p.unit;
      }
      os << "\n";
    }
  }
  return os.str();
}

json registry_to_json(const Registry& registry) {
  json actions = json::array();
  for (const auto& a : registry.actions()) {
    json params = json::array();
    for (const auto& p : a.params) {
      params.push_back({{"name", p.name},
                        {"kind", param_kind_name(p.kind)},
                        {"range", p.range ? json::array({p.range->lo, p.range->hi}) : json(nullptr)},
                        {"allowed", p.allowed},
                        {"unit", p.unit}});
    }
    json experts = json::array();
    for (auto e : a.experts) experts.push_back(expert_key(e));
    actions.push_back({{"name", a.name},
                       {"category", category_name(a.category)},
                       {"params", std::move(params)},
                       {"experts", std::move(experts)},
                       {"description", a.description}});
  }
  return json{{"actions", std::move(actions)}};
}

Registry registry_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("actions") || !doc["actions"].is_array())
    throw std::invalid_argument("catalog must be an object with an \"actions\" array");
  std::vector<ActionSpec> actions;
  for (const auto& ja : doc["actions"]) {
    ActionSpec a;
    a.name = ja.at("name").get<std::string>();
    auto cat = parse_category(ja.at("category").get<std::string>());
    if (!cat) throw std::invalid_argument("unknown category for " + a.name);
    a.category = *cat;
    a.description = ja.value("description", "");
    for (const auto& jp : ja.at("params")) {
      ParamSpec p;
      p.name = jp.at("name").get<std::string>();
      auto kind = parse_param_kind(jp.at("kind").get<std::string>());
      if (!kind) throw std::invalid_argument("unknown parameter kind in " + a.name);
      p.kind = *kind;
      p.range = interval_from_json(jp.value("range", json(nullptr)));
      p.allowed = jp.value("allowed", std::vector<std::string>{});
      p.unit = jp.value("unit", "");
      a.params.push_back(std::move(p));
    }
    for (const auto& je : ja.at("experts")) {
      auto e = parse_expert(je.get<std::string>());
      if (!e) throw std::invalid_argument("unknown expert in " + a.name);
      a.experts.push_back(*e);
    }
    actions.push_back(std::move(a));
  }
  return Registry(std::move(actions));
}

const ActionSpec* resolve_action(const Registry& registry, std::string_view name, bool alias_export_document) {
  if (alias_export_document && name == "ExportDocument") return registry.lookup("SaveDocument");
  return registry.lookup(name);
}

}  // namespace gtown
