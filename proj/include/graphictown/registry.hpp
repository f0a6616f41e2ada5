#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace gtown {

using json = nlohmann::json;

enum class ExpertId { PhotoEditor, VectorGraphicEditor, LayoutDesigner };

inline constexpr std::array<ExpertId, 3> kAllExperts = {
    ExpertId::PhotoEditor, ExpertId::VectorGraphicEditor, ExpertId::LayoutDesigner};

/// Display name used in prompts and workflow files ("Photo Editor", ...).
std::string_view expert_name(ExpertId expert);
/// CamelCase identifier used in catalog files ("PhotoEditor", ...).
std::string_view expert_key(ExpertId expert);
/// Accepts the display name or the CamelCase key, ignoring case and
/// surrounding/repeated whitespace. Everything else is rejected.
std::optional<ExpertId> parse_expert(std::string_view text);

enum class ActionCategory { Basic, Drawing, Text, Object };
std::string_view category_name(ActionCategory category);
std::optional<ActionCategory> parse_category(std::string_view text);

enum class ParamKind { Integer, Real, Text, Enumerated };
std::string_view param_kind_name(ParamKind kind);
std::optional<ParamKind> parse_param_kind(std::string_view text);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v) const { return v >= lo && v <= hi; }
  bool operator==(const Interval&) const = default;
};

/// One parameter of an action. For numeric kinds `range` bounds the value; for
/// text kinds it bounds the UTF-8 byte length. Enumerated values compare
/// case-insensitively against `allowed`.
struct ParamSpec {
  std::string name;
  ParamKind kind = ParamKind::Real;
  std::optional<Interval> range;
  std::vector<std::string> allowed;
  std::string unit;

  bool operator==(const ParamSpec&) const = default;
};

struct ActionSpec {
  std::string name;
  ActionCategory category = ActionCategory::Basic;
  std::vector<ParamSpec> params;
  std::vector<ExpertId> experts;  // sorted, non-empty
  std::string description;

  bool supports(ExpertId expert) const;
  const ParamSpec* param(std::string_view name) const;

  bool operator==(const ActionSpec&) const = default;
};

/// Immutable action catalog. Safe to share between threads once built.
class Registry {
 public:
  Registry() = default;
  /// Throws std::invalid_argument on duplicate names or empty expert sets.
  explicit Registry(std::vector<ActionSpec> actions);

  const ActionSpec* lookup(std::string_view name) const;
  const std::vector<ActionSpec>& actions() const { return actions_; }
  std::size_t size() const { return actions_.size(); }

  /// Actions the expert may execute, in catalog order.
  std::vector<const ActionSpec*> actions_for_expert(ExpertId expert) const;

  bool operator==(const Registry& other) const { return actions_ == other.actions_; }

 private:
  std::vector<ActionSpec> actions_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// The 46-action catalog.
Registry load_builtin_registry();
/// Process-wide shared instance of load_builtin_registry().
const Registry& builtin_registry();

struct ParamViolation {
  enum class Kind { Missing, Unknown, TypeMismatch, OutOfRange };
  Kind kind;
  std::string param;
  std::string message;

  bool operator==(const ParamViolation&) const = default;
};

std::string_view violation_kind_name(ParamViolation::Kind kind);

/// One violation per missing key, unknown key, type mismatch or out-of-range
/// value. Numeric strings ("255") are coerced before type checking.
std::vector<ParamViolation> validate_params(const ActionSpec& spec, const json& given);

/// Returns the parameters with numeric strings coerced and enumerated values
/// canonicalized, or nullopt if validate_params would report anything.
std::optional<json> normalize_params(const ActionSpec& spec, const json& given);

/// Listing of actions_for_expert(expert) for the "{list of actions}" slot.
std::string render_action_catalog(const Registry& registry, ExpertId expert);

json registry_to_json(const Registry& registry);
/// Throws std::invalid_argument on schema violations.
Registry registry_from_json(const json& doc);

/// Resolves an action name, honoring the optional ExportDocument ->
/// SaveDocument alias.
const ActionSpec* resolve_action(const Registry& registry, std::string_view name,
                                 bool alias_export_document);

}  // namespace gtown
