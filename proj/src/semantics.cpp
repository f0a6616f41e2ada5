#include "graphictown/semantics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gtown {

std::string_view layer_kind_name(LayerKind kind) {
  switch (kind) {
    case LayerKind::Text: return "text";
    case LayerKind::Shape: return "drawing";
    case LayerKind::Object: return "object";
  }
  return "?";
}

ActionEffect action_effect(std::string_view name) {
  using R = ActionEffect::Role;
  if (name == "CreateDocument" || name == "CreateDocumentCustom") return {R::OpenDocument, std::nullopt, false};
  if (name == "SetBackgroundColor") return {R::EditDocument, std::nullopt, false};
  if (name == "SaveDocument") return {R::Save, std::nullopt, false};
  if (name == "CreateText") return {R::CreateLayer, LayerKind::Text, false};
  if (name == "ImportObject") return {R::CreateLayer, LayerKind::Object, true};
  if (name == "GenerateQRObject") return {R::CreateLayer, LayerKind::Object, false};
  if (name.rfind("Draw", 0) == 0) return {R::CreateLayer, LayerKind::Shape, false};
  if (name == "RemoveText") return {R::RemoveLayer, LayerKind::Text, false};
  if (name == "RemoveDrawing") return {R::RemoveLayer, LayerKind::Shape, false};
  if (name == "RemoveObject") return {R::RemoveLayer, LayerKind::Object, false};
  if (name.size() > 4 && name.substr(name.size() - 4) == "Text") return {R::MutateLayer, LayerKind::Text, false};
  if (name.size() > 7 && name.substr(name.size() - 7) == "Drawing") return {R::MutateLayer, LayerKind::Shape, false};
  if (name == "OpacityObject" || name == "RepositionObject" || name == "ResizeObject" || name == "RotateObject")
    return {R::MutateLayer, LayerKind::Object, false};
  // Adjustments and filters work on any layer.
  return {R::MutateLayer, std::nullopt, false};
}

StepCheck check_step_signature(const WorkflowStep& step, const Registry& registry, bool alias_export_document) {
  StepCheck out;
  out.expert = parse_expert(step.expert);
  if (!out.expert) {
    out.error = StepError::invalid_expert("\"" + step.expert + "\" is not a recruitable expert");
    return out;
  }
  if (!step.action) {
    out.error = StepError::invalid_action("step has no action");
    return out;
  }
  out.spec = resolve_action(registry, *step.action, alias_export_document);
  if (!out.spec) {
    out.error = StepError::invalid_action("\"" + *step.action + "\" is not a defined action");
    return out;
  }
  if (!out.spec->supports(*out.expert)) {
    out.error = StepError::invalid_action("\"" + *step.action + "\" is not available to " +
                                          std::string(expert_name(*out.expert)));
    out.spec = nullptr;
    return out;
  }
  const json given = step.parameters.value_or(json::object());
  auto violations = validate_params(*out.spec, given);
  if (!violations.empty()) {
    std::ostringstream os;
    for (std::size_t i = 0; i < violations.size(); ++i) os << (i ? "; " : "") << violations[i].message;
    out.error = StepError::invalid_params(os.str());
    return out;
  }
  out.params = normalize_params(*out.spec, given);
  if (auto err = check_param_constraints(*out.spec, *out.params)) out.error = std::move(err);
  return out;
}

std::optional<StepError> check_dependencies(const ActionSpec& spec, const json& params, const SessionView& session) {
  using R = ActionEffect::Role;
  const ActionEffect effect = action_effect(spec.name);
  if (effect.role == R::OpenDocument) return std::nullopt;
  if (!session.has_document())
    return StepError::local(spec.name + " needs a document created earlier in this expert session");
  if (effect.imports_file) {
    const std::string file = params.at("fileName").get<std::string>();
    if (!session.has_file(file)) return StepError::global("\"" + file + "\" has not been provided or saved before");
  }
  if (effect.role == R::MutateLayer || effect.role == R::RemoveLayer) {
    const std::string layer = params.at("layerName").get<std::string>();
    auto kind = session.layer_kind(layer);
    if (!kind) return StepError::local("layer \"" + layer + "\" does not exist in this expert session");
    if (effect.layer_kind && *kind != *effect.layer_kind)
      return StepError::local("layer \"" + layer + "\" is a " + std::string(layer_kind_name(*kind)) +
                              " layer, not a " + std::string(layer_kind_name(*effect.layer_kind)) + " layer");
  }
  return std::nullopt;
}

std::optional<StepError> check_param_constraints(const ActionSpec& spec, const json& params) {
  auto num = [&](const char* key) { return params.at(key).get<double>(); };
  std::optional<double> area;
  const std::string& n = spec.name;
  if (n == "CreateDocumentCustom" || n == "ResizeObject" || n == "ResizeDrawing" || n == "DrawRectangle") {
    area = num("width") * num("height");
  } else if (n == "DrawCircle" || n == "DrawPolygon" || n == "DrawStar") {
    area = 4.0 * num("radius") * num("radius");
  } else if (n == "DrawEllipse") {
    area = 4.0 * num("majorRadius") * num("minorRadius");
  } else if (n == "DrawTriangle") {
    area = num("base") * num("height");
  } else if (n == "DrawLine") {
    const double w = std::max(1.0, num("strokeWidth"));
    area = (std::abs(num("endX") - num("startX")) + w) * (std::abs(num("endY") - num("startY")) + w);
  }
  if (area && *area > kMaxPixelArea)
    return StepError::invalid_params(n + ": area of " + std::to_string(static_cast<long long>(*area)) +
                                     " px exceeds the limit of " +
                                     std::to_string(static_cast<long long>(kMaxPixelArea)) + " px");
  return std::nullopt;
}

std::string saved_file_key(const json& save_params) {
  return save_params.at("fileName").get<std::string>() + "." + save_params.at("format").get<std::string>();
}

}  // namespace gtown
