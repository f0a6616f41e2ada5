#include "graphictown/workflow.hpp"

#include <algorithm>
#include <set>

#include "text_util.hpp"

namespace gtown {

namespace {

struct DesignTypeName {
  DesignType type;
  std::string_view name;
};

constexpr std::array<DesignTypeName, 4> kDesignTypes = {{
    {DesignType::BookCover, "book cover"},
    {DesignType::BusinessCard, "business card"},
    {DesignType::Postcard, "postcard"},
    {DesignType::Poster, "poster"},
}};

std::string strip_code_fences(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    std::size_t first = line.find_first_not_of(" \t\r");
    const bool fence = first != std::string_view::npos && line.substr(first).rfind("```", 0) == 0;
    if (!fence) {
      out.append(line);
      if (eol < text.size()) out.push_back('\n');
    }
    pos = eol + 1;
  }
  return out;
}

// End index (inclusive) of the balanced group opened at `start`, or npos.
std::size_t balanced_end(const std::string& s, std::size_t start) {
  const char open = s[start];
  const char close = open == '[' ? ']' : '}';
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = start; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '[' || c == '{') {
      ++depth;
    } else if (c == ']' || c == '}') {
      --depth;
      if (depth == 0) return c == close ? i : std::string::npos;
      if (depth < 0) return std::string::npos;
    }
  }
  return std::string::npos;
}

std::optional<std::string> extract_group(std::string_view llm_text, char open) {
  const std::string text = strip_code_fences(llm_text);
  for (std::size_t start = text.find(open); start != std::string::npos; start = text.find(open, start + 1)) {
    const std::size_t end = balanced_end(text, start);
    if (end == std::string::npos) continue;
    std::string candidate = text.substr(start, end - start + 1);
    const json parsed = json::parse(candidate, nullptr, false);
    if (parsed.is_discarded()) continue;
    if ((open == '[' && parsed.is_array()) || (open == '{' && parsed.is_object())) return candidate;
  }
  return std::nullopt;
}

std::string leaf_text(const json& obj, const char* key) {
  if (!obj.is_object()) return {};
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  if (it->is_string()) return it->get<std::string>();
  return it->dump();
}

std::optional<int> parse_id(const json& v) {
  if (v.is_number_integer()) return v.get<int>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d == static_cast<double>(static_cast<int>(d))) return static_cast<int>(d);
    return std::nullopt;
  }
  if (v.is_string()) {
    const std::string s = detail::trim(v.get<std::string>());
    if (s.empty()) return std::nullopt;
    std::size_t used = 0;
    try {
      const int id = std::stoi(s, &used);
      if (used == s.size()) return id;
    } catch (const std::exception&) {
    }
  }
  return std::nullopt;
}

FormatFailure step_failure(std::size_t index, const std::string& reason) {
  return FormatFailure{index, "step " + std::to_string(index) + ": " + reason};
}

}  // namespace

std::string_view design_type_name(DesignType type) {
  for (const auto& d : kDesignTypes)
    if (d.type == type) return d.name;
  return "?";
}

std::optional<DesignType> parse_design_type(std::string_view text) {
  std::string norm = detail::lower(text);
  std::replace(norm.begin(), norm.end(), '_', ' ');
  norm = detail::collapse_ws(norm);
  for (const auto& d : kDesignTypes) {
    std::string compact(d.name);
    compact.erase(std::remove(compact.begin(), compact.end(), ' '), compact.end());
    if (norm == d.name || norm == compact) return d.type;
  }
  return std::nullopt;
}

DesignInstance parse_instance(std::string_view bytes, const std::filesystem::path& assets_root) {
  const json doc = json::parse(bytes, nullptr, false);
  if (doc.is_discarded()) throw IngestError("<document>", "instance is not valid JSON");
  if (!doc.is_object()) throw IngestError("<document>", "instance must be a JSON object");

  DesignInstance inst;
  if (!doc.contains("id")) throw IngestError("id", "missing field \"id\"");
  inst.id = doc["id"].is_string() ? doc["id"].get<std::string>() : doc["id"].dump();

  if (!doc.contains("design_type") || !doc["design_type"].is_string())
    throw IngestError("design_type", "missing or non-text field \"design_type\"");
  auto type = parse_design_type(doc["design_type"].get<std::string>());
  if (!type) throw IngestError("design_type", "unknown design_type \"" + doc["design_type"].get<std::string>() + "\"");
  inst.design_type = *type;

  if (!doc.contains("query") || !doc["query"].is_string() || doc["query"].get<std::string>().empty())
    throw IngestError("query", "missing or empty field \"query\"");
  inst.query = doc["query"].get<std::string>();

  if (!doc.contains("images") || !doc["images"].is_array() || doc["images"].empty())
    throw IngestError("images", "field \"images\" must be a non-empty array");
  for (std::size_t i = 0; i < doc["images"].size(); ++i) {
    const json& ji = doc["images"][i];
    const std::string field = "images[" + std::to_string(i) + "]";
    if (!ji.is_object() || !ji.contains("path") || !ji["path"].is_string())
      throw IngestError(field + ".path", "image entry needs a text \"path\"");
    ImageRef ref;
    ref.path = ji["path"].get<std::string>();
    ref.caption = ji.value("caption", "");
    std::filesystem::path p(ref.path);
    ref.resolved = p.is_absolute() || assets_root.empty() ? p : assets_root / p;
    inst.images.push_back(std::move(ref));
  }

  if (doc.contains("questions") && !doc["questions"].is_null()) {
    if (!doc["questions"].is_array()) throw IngestError("questions", "\"questions\" must be an array");
    std::vector<std::string> qs;
    for (const auto& q : doc["questions"]) {
      if (!q.is_string()) throw IngestError("questions", "questions must be text");
      qs.push_back(q.get<std::string>());
    }
    inst.questions = std::move(qs);
  }
  return inst;
}

json instance_to_json(const DesignInstance& instance) {
  json images = json::array();
  for (const auto& img : instance.images) images.push_back({{"path", img.path}, {"caption", img.caption}});
  json out = {{"id", instance.id},
              {"design_type", design_type_name(instance.design_type)},
              {"query", instance.query},
              {"images", std::move(images)}};
  if (instance.questions) out["questions"] = *instance.questions;
  return out;
}

json outline_to_json(const DesignOutline& o) {
  return {{"user_request", o.user_request},
          {"design_choices",
           {{"background_color", o.background_color},
            {"text",
             {{"content", o.text.content},
              {"position", o.text.position},
              {"color", o.text.color},
              {"size", o.text.size}}},
            {"image", {{"content", o.image.content}, {"position", o.image.position}, {"size", o.image.size}}}}}};
}

Expected<DesignOutline, FormatFailure> parse_outline(std::string_view llm_text) {
  auto obj_text = extract_json_object(llm_text);
  if (!obj_text) return FormatFailure{std::nullopt, "no JSON object found"};
  const json doc = json::parse(*obj_text);
  if (!doc.contains("user_request") && !doc.contains("design_choices"))
    return FormatFailure{std::nullopt, "object is not a design outline"};
  DesignOutline o;
  o.user_request = leaf_text(doc, "user_request");
  const json choices = doc.value("design_choices", json::object());
  o.background_color = leaf_text(choices, "background_color");
  const json text = choices.is_object() ? choices.value("text", json::object()) : json::object();
  o.text = {leaf_text(text, "content"), leaf_text(text, "position"), leaf_text(text, "color"),
            leaf_text(text, "size")};
  const json image = choices.is_object() ? choices.value("image", json::object()) : json::object();
  o.image = {leaf_text(image, "content"), leaf_text(image, "position"), leaf_text(image, "size")};
  return o;
}

Expected<RecruitmentParse, FormatFailure> parse_recruitment(std::string_view llm_text) {
  auto arr_text = extract_json_array(llm_text);
  if (!arr_text) return FormatFailure{std::nullopt, "no JSON array found"};
  const json arr = json::parse(*arr_text);
  RecruitmentParse out;
  std::set<ExpertId> seen;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& e = arr[i];
    if (!e.is_object()) return step_failure(i, "entry is not an object");
    if (!e.contains("expert") || !e["expert"].is_string()) return step_failure(i, "missing \"expert\"");
    const std::string raw = e["expert"].get<std::string>();
    auto expert = parse_expert(raw);
    if (!expert) {
      out.warnings.push_back("dropped unknown expert \"" + raw + "\"");
      continue;
    }
    if (!seen.insert(*expert).second) {
      out.warnings.push_back("dropped repeated expert \"" + raw + "\"");
      continue;
    }
    std::string task = leaf_text(e, "task");
    if (task.empty()) task = leaf_text(e, "description");
    out.entries.push_back({*expert, std::move(task)});
  }
  return out;
}

json recruitment_to_json(std::span<const RecruitmentEntry> entries) {
  json arr = json::array();
  for (const auto& e : entries) arr.push_back({{"expert", expert_name(e.expert)}, {"task", e.task}});
  return arr;
}

std::string_view stage_name(Stage stage) {
  switch (stage) {
    case Stage::ExpertPlan: return "expert_plan";
    case Stage::Supervised: return "supervised";
    case Stage::Retrieved: return "retrieved";
  }
  return "?";
}

std::optional<std::string> extract_json_array(std::string_view llm_text) { return extract_group(llm_text, '['); }

std::optional<std::string> extract_json_object(std::string_view llm_text) { return extract_group(llm_text, '{'); }

Expected<Workflow, FormatFailure> parse_workflow(std::string_view json_text, Stage stage) {
  const json arr = json::parse(json_text, nullptr, false);
  if (arr.is_discarded()) return FormatFailure{std::nullopt, "invalid JSON"};
  if (!arr.is_array()) return FormatFailure{std::nullopt, "not a JSON array"};
  Workflow wf;
  wf.stage = stage;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& s = arr[i];
    if (!s.is_object()) return step_failure(i, "not a JSON object");
    WorkflowStep step;
    if (!s.contains("id")) return step_failure(i, "missing \"id\"");
    auto id = parse_id(s["id"]);
    if (!id) return step_failure(i, "\"id\" is not an integer");
    step.id = *id;
    if (!s.contains("expert") || !s["expert"].is_string()) return step_failure(i, "missing \"expert\"");
    step.expert = s["expert"].get<std::string>();
    if (!s.contains("description") || !s["description"].is_string())
      return step_failure(i, "missing \"description\"");
    step.description = s["description"].get<std::string>();
    if (stage == Stage::Retrieved) {
      // null counts as absent.
      const char* action_key = s.contains("action") ? "action" : (s.contains("skill") ? "skill" : nullptr);
      if (action_key && !s[action_key].is_null()) {
        if (!s[action_key].is_string()) return step_failure(i, "\"action\" is not a string");
        step.action = s[action_key].get<std::string>();
      }
      if (s.contains("parameters") && !s["parameters"].is_null()) {
        if (!s["parameters"].is_object()) return step_failure(i, "\"parameters\" is not an object");
        step.parameters = s["parameters"];
      }
    }
    wf.steps.push_back(std::move(step));
  }
  return wf;
}

Expected<Workflow, FormatFailure> parse_workflow_output(std::string_view llm_text, Stage stage) {
  auto arr = extract_json_array(llm_text);
  if (!arr) return FormatFailure{std::nullopt, "no JSON array found"};
  return parse_workflow(*arr, stage);
}

json workflow_to_json(const Workflow& workflow) {
  json arr = json::array();
  for (const auto& s : workflow.steps) {
    json j = {{"id", s.id}, {"expert", s.expert}, {"description", s.description}};
    if (s.action) j["action"] = *s.action;
    if (s.parameters) j["parameters"] = *s.parameters;
    arr.push_back(std::move(j));
  }
  return arr;
}

std::string serialize_workflow(const Workflow& workflow) { return workflow_to_json(workflow).dump(2); }

std::string_view tier_name(Tier tier) {
  switch (tier) {
    case Tier::Easy: return "Easy";
    case Tier::Medium: return "Medium";
    case Tier::Hard: return "Hard";
  }
  return "?";
}

Difficulty difficulty_for_expert_count(std::size_t distinct_experts) {
  switch (distinct_experts) {
    case 1: return {Tier::Easy, 10};
    case 2: return {Tier::Medium, 20};
    case 3: return {Tier::Hard, 30};
    default: throw std::domain_error("difficulty is undefined without a valid expert");
  }
}

Difficulty difficulty_of(std::span<const RecruitmentEntry> recruitment) {
  std::set<ExpertId> experts;
  for (const auto& e : recruitment) experts.insert(e.expert);
  return difficulty_for_expert_count(experts.size());
}

Difficulty difficulty_of(const Workflow& workflow) {
  std::set<ExpertId> experts;
  for (const auto& s : workflow.steps)
    if (auto e = parse_expert(s.expert)) experts.insert(*e);
  return difficulty_for_expert_count(experts.size());
}

}  // namespace gtown
