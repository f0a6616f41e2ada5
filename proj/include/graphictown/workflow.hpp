#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "graphictown/expected.hpp"
#include "graphictown/registry.hpp"

namespace gtown {

enum class DesignType { BookCover, BusinessCard, Postcard, Poster };
std::string_view design_type_name(DesignType type);  // "book cover", ...
/// Accepts "Poster", "poster", "BookCover", "book cover", "book_cover".
std::optional<DesignType> parse_design_type(std::string_view text);

struct ImageRef {
  std::string path;     // as written in the instance file
  std::string caption;
  std::filesystem::path resolved;  // path joined with the assets root
};

struct DesignInstance {
  std::string id;
  DesignType design_type = DesignType::Poster;
  std::string query;
  std::vector<ImageRef> images;
  std::optional<std::vector<std::string>> questions;
};

/// Raised when an instance file cannot be ingested; `field` names the culprit.
class IngestError : public std::runtime_error {
 public:
  IngestError(std::string field, const std::string& what)
      : std::runtime_error(what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

DesignInstance parse_instance(std::string_view bytes, const std::filesystem::path& assets_root = {});
json instance_to_json(const DesignInstance& instance);

/// Position/reason of a parse failure. This is the Format error signal.
struct FormatFailure {
  std::optional<std::size_t> index;  // offending array element, if any
  std::string reason;
};

struct TextChoices {
  std::string content, position, color, size;
};
struct ImageChoices {
  std::string content, position, size;
};
struct DesignOutline {
  std::string user_request;
  std::string background_color;
  TextChoices text;
  ImageChoices image;
};

json outline_to_json(const DesignOutline& outline);
/// Accepts the outline object either bare or wrapped in a one-element array.
/// Leaf values that are not strings are kept as their compact JSON text.
Expected<DesignOutline, FormatFailure> parse_outline(std::string_view llm_text);

struct RecruitmentEntry {
  ExpertId expert;
  std::string task;
};

struct RecruitmentParse {
  std::vector<RecruitmentEntry> entries;
  std::vector<std::string> warnings;  // dropped duplicates / unknown experts
};

/// Keeps entry order, drops unknown experts and repeated experts (first wins).
Expected<RecruitmentParse, FormatFailure> parse_recruitment(std::string_view llm_text);
json recruitment_to_json(std::span<const RecruitmentEntry> entries);

enum class Stage { ExpertPlan, Supervised, Retrieved };
std::string_view stage_name(Stage stage);

struct WorkflowStep {
  int id = 0;
  std::string expert;  // raw; validated by the static validator
  std::string description;
  std::optional<std::string> action;
  std::optional<json> parameters;
};

struct Workflow {
  Stage stage = Stage::Retrieved;
  std::vector<WorkflowStep> steps;
};

/// First balanced top-level JSON array in `llm_text`, after stripping code
/// fences. Brackets inside string literals are ignored.
std::optional<std::string> extract_json_array(std::string_view llm_text);
/// Same for a JSON object.
std::optional<std::string> extract_json_object(std::string_view llm_text);

/// Parses a workflow array. Every stage needs id/expert/description.
/// Retrieved steps keep "action" (or "skill") and "parameters" when present;
/// other stages drop them. Ids must be integers (numeric strings accepted).
Expected<Workflow, FormatFailure> parse_workflow(std::string_view json_text, Stage stage);
/// Runs extract_json_array first, then parse_workflow.
Expected<Workflow, FormatFailure> parse_workflow_output(std::string_view llm_text, Stage stage);

json workflow_to_json(const Workflow& workflow);
std::string serialize_workflow(const Workflow& workflow);

enum class Tier { Easy, Medium, Hard };
std::string_view tier_name(Tier tier);

struct Difficulty {
  Tier tier = Tier::Easy;
  int step_limit = 10;
  bool operator==(const Difficulty&) const = default;
};

/// Throws std::domain_error when no valid expert is present.
Difficulty difficulty_for_expert_count(std::size_t distinct_experts);
Difficulty difficulty_of(std::span<const RecruitmentEntry> recruitment);
/// Distinct experts among steps whose expert string parses.
Difficulty difficulty_of(const Workflow& workflow);

}  // namespace gtown
