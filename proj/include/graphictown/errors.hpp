#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

namespace gtown {

using json = nlohmann::json;

enum class ErrorClass { Format, InvalidExpert, InvalidAction, InvalidParameters, Dependency };
enum class DependencyKind { Local, Global };

inline constexpr std::array<ErrorClass, 5> kAllErrorClasses = {
    ErrorClass::Format, ErrorClass::InvalidExpert, ErrorClass::InvalidAction, ErrorClass::InvalidParameters,
    ErrorClass::Dependency};

std::string_view error_class_name(ErrorClass cls);  // "Format", "InvalidExpert", ...
std::optional<ErrorClass> parse_error_class(std::string_view text);
std::string_view dependency_kind_name(DependencyKind kind);  // "Local" / "Global"
std::optional<DependencyKind> parse_dependency_kind(std::string_view text);

/// A classified defect. `dependency_kind` is set iff cls == Dependency.
struct StepError {
  ErrorClass cls = ErrorClass::Format;
  std::optional<DependencyKind> dependency_kind;
  std::string message;

  static StepError invalid_expert(std::string msg) { return {ErrorClass::InvalidExpert, std::nullopt, std::move(msg)}; }
  static StepError invalid_action(std::string msg) { return {ErrorClass::InvalidAction, std::nullopt, std::move(msg)}; }
  static StepError invalid_params(std::string msg) {
    return {ErrorClass::InvalidParameters, std::nullopt, std::move(msg)};
  }
  static StepError local(std::string msg) { return {ErrorClass::Dependency, DependencyKind::Local, std::move(msg)}; }
  static StepError global(std::string msg) { return {ErrorClass::Dependency, DependencyKind::Global, std::move(msg)}; }
};

struct ValidationError {
  std::optional<int> step_id;  // absent for Format
  ErrorClass cls = ErrorClass::Format;
  std::optional<DependencyKind> dependency_kind;
  std::string message;
};

enum class ExecStatus { Ok, Skipped, Failed };
std::string_view exec_status_name(ExecStatus status);

/// Runtime outcome of one step. Failed/Skipped carry an error, Ok never does.
struct ExecRecord {
  int step_id = 0;
  ExecStatus status = ExecStatus::Ok;
  std::optional<StepError> error;
};

/// Count per error class, indexed by ErrorClass.
struct ErrorHistogram {
  std::array<int, 5> counts{};

  int& operator[](ErrorClass cls) { return counts[static_cast<std::size_t>(cls)]; }
  int operator[](ErrorClass cls) const { return counts[static_cast<std::size_t>(cls)]; }
  int total() const;
  /// Percent share per class; all zero when total() == 0.
  std::array<double, 5> shares() const;
  ErrorHistogram& operator+=(const ErrorHistogram& other);
  bool operator==(const ErrorHistogram&) const = default;
};

ErrorHistogram error_histogram(std::span<const ValidationError> errors,
                               std::span<const ExecRecord> records = {});

json to_json(const StepError& error);
json to_json(const ValidationError& error);
json to_json(const ExecRecord& record);
json to_json(const ErrorHistogram& histogram);
ExecRecord exec_record_from_json(const json& j);
ValidationError validation_error_from_json(const json& j);
ErrorHistogram histogram_from_json(const json& j);

}  // namespace gtown
