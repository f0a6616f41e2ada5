#include "graphictown/errors.hpp"

namespace gtown {

std::string_view error_class_name(ErrorClass cls) {
  switch (cls) {
    case ErrorClass::Format: return "Format";
    case ErrorClass::InvalidExpert: return "InvalidExpert";
    case ErrorClass::InvalidAction: return "InvalidAction";
    case ErrorClass::InvalidParameters: return "InvalidParameters";
    case ErrorClass::Dependency: return "Dependency";
  }
  return "?";
}

std::optional<ErrorClass> parse_error_class(std::string_view text) {
  for (auto c : kAllErrorClasses)
    if (error_class_name(c) == text) return c;
  return std::nullopt;
}

std::string_view dependency_kind_name(DependencyKind kind) {
  return kind == DependencyKind::Local ? "Local" : "Global";
}

std::optional<DependencyKind> parse_dependency_kind(std::string_view text) {
  if (text == "Local") return DependencyKind::Local;
  if (text == "Global") return DependencyKind::Global;
  return std::nullopt;
}

std::string_view exec_status_name(ExecStatus status) {
  switch (status) {
    case ExecStatus::Ok: return "Ok";
    case ExecStatus::Skipped: return "Skipped";
    case ExecStatus::Failed: return "Failed";
  }
  return "?";
}

int ErrorHistogram::total() const {
  int sum = 0;
  for (int c : counts) sum += c;
  return sum;
}

std::array<double, 5> ErrorHistogram::shares() const {
  std::array<double, 5> out{};
  const int t = total();
  if (t == 0) return out;
  for (std::size_t i = 0; i < counts.size(); ++i) out[i] = 100.0 * counts[i] / t;
  return out;
}

ErrorHistogram& ErrorHistogram::operator+=(const ErrorHistogram& other) {
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
  return *this;
}

ErrorHistogram error_histogram(std::span<const ValidationError> errors, std::span<const ExecRecord> records) {
  ErrorHistogram h;
  for (const auto& e : errors) ++h[e.cls];
  for (const auto& r : records)
    if (r.error) ++h[r.error->cls];
  return h;
}

json to_json(const StepError& error) {
  return {{"class", error_class_name(error.cls)},
          {"dependency_kind", error.dependency_kind ? json(dependency_kind_name(*error.dependency_kind)) : json()},
          {"message", error.message}};
}

json to_json(const ValidationError& error) {
  return {{"step_id", error.step_id ? json(*error.step_id) : json()},
          {"class", error_class_name(error.cls)},
          {"dependency_kind", error.dependency_kind ? json(dependency_kind_name(*error.dependency_kind)) : json()},
          {"message", error.message}};
}

json to_json(const ExecRecord& record) {
  json j = {{"step_id", record.step_id}, {"status", exec_status_name(record.status)}};
  j["error"] = record.error ? to_json(*record.error) : json();
  return j;
}

json to_json(const ErrorHistogram& histogram) {
  json j = json::object();
  for (auto c : kAllErrorClasses) j[std::string(error_class_name(c))] = histogram[c];
  return j;
}

namespace {

StepError step_error_from_json(const json& j) {
  StepError e;
  e.cls = parse_error_class(j.at("class").get<std::string>()).value_or(ErrorClass::Format);
  if (j.contains("dependency_kind") && j["dependency_kind"].is_string())
    e.dependency_kind = parse_dependency_kind(j["dependency_kind"].get<std::string>());
  e.message = j.value("message", "");
  return e;
}

}  // namespace

ExecRecord exec_record_from_json(const json& j) {
  ExecRecord r;
  r.step_id = j.at("step_id").get<int>();
  const std::string status = j.at("status").get<std::string>();
  r.status = status == "Ok" ? ExecStatus::Ok : status == "Skipped" ? ExecStatus::Skipped : ExecStatus::Failed;
  if (j.contains("error") && j["error"].is_object()) r.error = step_error_from_json(j["error"]);
  return r;
}

ValidationError validation_error_from_json(const json& j) {
  ValidationError e;
  if (j.contains("step_id") && j["step_id"].is_number_integer()) e.step_id = j["step_id"].get<int>();
  const StepError se = step_error_from_json(j);
  e.cls = se.cls;
  e.dependency_kind = se.dependency_kind;
  e.message = se.message;
  return e;
}

ErrorHistogram histogram_from_json(const json& j) {
  ErrorHistogram h;
  for (auto c : kAllErrorClasses) h[c] = j.value(std::string(error_class_name(c)), 0);
  return h;
}

}  // namespace gtown
