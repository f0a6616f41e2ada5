#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "graphictown/errors.hpp"
#include "graphictown/registry.hpp"
#include "graphictown/workflow.hpp"

namespace gtown {

enum class LayerKind { Text, Shape, Object };
std::string_view layer_kind_name(LayerKind kind);

/// What an action does to the session, independent of pixels. Shared by the
/// static validator and the engine so both agree on dependencies.
struct ActionEffect {
  enum class Role { OpenDocument, EditDocument, Save, CreateLayer, MutateLayer, RemoveLayer };
  Role role = Role::EditDocument;
  /// Kind created, or kind required by mutate/remove. nullopt on a
  /// mutate means any layer kind is accepted.
  std::optional<LayerKind> layer_kind;
  bool imports_file = false;  // ImportObject
};

/// Effect of a registry action (by canonical name).
ActionEffect action_effect(std::string_view action_name);

/// Read-only view of session state the dependency rules consult.
class SessionView {
 public:
  virtual ~SessionView() = default;
  virtual bool has_document() const = 0;
  virtual std::optional<LayerKind> layer_kind(std::string_view name) const = 0;
  virtual bool has_file(std::string_view name) const = 0;
};

struct StepCheck {
  std::optional<ExpertId> expert;
  const ActionSpec* spec = nullptr;
  std::optional<json> params;  // normalized
  std::optional<StepError> error;
};

/// Expert, action and parameter checks in precedence order
/// (InvalidExpert > InvalidAction > InvalidParameters).
StepCheck check_step_signature(const WorkflowStep& step, const Registry& registry, bool alias_export_document);

/// Dependency rules for a step whose signature already checked out.
std::optional<StepError> check_dependencies(const ActionSpec& spec, const json& params, const SessionView& session);

/// Largest canvas or layer area, in pixels, the engine will allocate.
inline constexpr double kMaxPixelArea = 64'000'000.0;

/// Cross-parameter limits that single-parameter ranges cannot express
/// (document and layer areas). Returns an InvalidParameters error.
std::optional<StepError> check_param_constraints(const ActionSpec& spec, const json& params);

/// Joined "fileName.format" key a SaveDocument writes.
std::string saved_file_key(const json& save_params);

}  // namespace gtown
