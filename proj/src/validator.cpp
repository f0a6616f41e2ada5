#include "graphictown/validator.hpp"

#include <filesystem>
#include <map>

#include "graphictown/semantics.hpp"

namespace gtown {

std::string_view lint_kind_name(Lint::Kind kind) {
  switch (kind) {
    case Lint::Kind::ExpertReentry: return "ExpertReentry";
    case Lint::Kind::SessionStart: return "SessionStart";
    case Lint::Kind::SessionEnd: return "SessionEnd";
    case Lint::Kind::NonContiguousIds: return "NonContiguousIds";
    case Lint::Kind::DuplicateStep: return "DuplicateStep";
    case Lint::Kind::LayerNaming: return "LayerNaming";
  }
  return "?";
}

std::set<std::string> seed_file_ledger(const DesignInstance& instance) {
  std::set<std::string> ledger;
  for (const auto& img : instance.images) {
    ledger.insert(img.path);
    ledger.insert(std::filesystem::path(img.path).filename().string());
  }
  return ledger;
}

namespace {

class SymbolicSession : public SessionView {
 public:
  explicit SymbolicSession(std::set<std::string> files) : files_(std::move(files)) {}

  bool has_document() const override { return document_; }
  std::optional<LayerKind> layer_kind(std::string_view name) const override {
    auto it = layers_.find(std::string(name));
    if (it == layers_.end()) return std::nullopt;
    return it->second;
  }
  bool has_file(std::string_view name) const override { return files_.count(std::string(name)) > 0; }

  void reset() {
    document_ = false;
    layers_.clear();
  }

  void apply(const ActionSpec& spec, const json& params) {
    using R = ActionEffect::Role;
    const ActionEffect effect = action_effect(spec.name);
    switch (effect.role) {
      case R::OpenDocument:
        document_ = true;
        layers_.clear();
        break;
      case R::Save:
        files_.insert(saved_file_key(params));
        files_.insert(params.at("fileName").get<std::string>());
        break;
      case R::CreateLayer:
        layers_[params.at("layerName").get<std::string>()] = *effect.layer_kind;
        break;
      case R::RemoveLayer:
        layers_.erase(params.at("layerName").get<std::string>());
        break;
      case R::EditDocument:
      case R::MutateLayer:
        break;
    }
  }

  const std::set<std::string>& files() const { return files_; }

 private:
  bool document_ = false;
  std::map<std::string, LayerKind> layers_;
  std::set<std::string> files_;
};

std::string step_fingerprint(const WorkflowStep& s) {
  json j = {{"expert", s.expert}, {"description", s.description}};
  if (s.action) j["action"] = *s.action;
  if (s.parameters) j["parameters"] = *s.parameters;
  return j.dump();
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

ValidationReport validate(const Workflow& workflow, const Registry& registry, const DesignInstance& instance,
                          const ValidatorOptions& options) {
  ValidationReport report;
  SymbolicSession session(seed_file_ledger(instance));
  std::optional<ExpertId> current;
  std::set<ExpertId> retired;
  std::set<std::string> seen_steps;

  // Session boundary lints look at the resolved actions of each segment.
  struct Segment {
    std::optional<std::string> first_action, last_action;
    int first_id = 0, last_id = 0;
  };
  std::vector<Segment> segments;

  for (std::size_t i = 0; i < workflow.steps.size(); ++i) {
    const WorkflowStep& step = workflow.steps[i];
    if (step.id != static_cast<int>(i) + 1)
      report.lints.push_back({Lint::Kind::NonContiguousIds, step.id,
                              "expected id " + std::to_string(i + 1) + ", found " + std::to_string(step.id)});
    if (!seen_steps.insert(step_fingerprint(step)).second)
      report.lints.push_back({Lint::Kind::DuplicateStep, step.id, "repeats an earlier step"});

    StepCheck check = check_step_signature(step, registry, options.alias_export_document);
    if (check.expert && check.expert != current) {
      if (current) retired.insert(*current);
      if (retired.count(*check.expert))
        report.lints.push_back({Lint::Kind::ExpertReentry, step.id,
                                std::string(expert_name(*check.expert)) + " is used again after handing off"});
      current = check.expert;
      session.reset();
      segments.push_back({});
      segments.back().first_id = step.id;
    }
    if (!segments.empty()) {
      auto& seg = segments.back();
      const std::optional<std::string> name =
          check.spec ? std::optional<std::string>(check.spec->name) : step.action;
      if (!seg.first_action && seg.last_id == 0) seg.first_action = name;
      seg.last_action = name;
      seg.last_id = step.id;
    }

    if (check.error) {
      report.errors.push_back({step.id, check.error->cls, check.error->dependency_kind, check.error->message});
      continue;
    }
    if (auto dep = check_dependencies(*check.spec, *check.params, session)) {
      report.errors.push_back({step.id, dep->cls, dep->dependency_kind, dep->message});
      continue;
    }
    const ActionEffect effect = action_effect(check.spec->name);
    if (effect.role == ActionEffect::Role::CreateLayer) {
      const std::string layer = check.params->at("layerName").get<std::string>();
      if (!ends_with(layer, "Layer"))
        report.lints.push_back({Lint::Kind::LayerNaming, step.id, "layer \"" + layer + "\" does not end in Layer"});
    }
    session.apply(*check.spec, *check.params);
  }

  for (const auto& seg : segments) {
    if (!seg.first_action || seg.first_action->rfind("CreateDocument", 0) != 0)
      report.lints.push_back({Lint::Kind::SessionStart, seg.first_id, "session does not start with CreateDocument"});
    if (!seg.last_action || *seg.last_action != "SaveDocument")
      report.lints.push_back({Lint::Kind::SessionEnd, seg.last_id, "session does not end with SaveDocument"});
  }
  report.file_ledger = session.files();
  return report;
}

ValidationReport format_failure_report(const FormatFailure& failure) {
  ValidationReport report;
  report.errors.push_back({std::nullopt, ErrorClass::Format, std::nullopt, failure.reason});
  return report;
}

json to_json(const Lint& lint) {
  return {{"kind", lint_kind_name(lint.kind)},
          {"step_id", lint.step_id ? json(*lint.step_id) : json()},
          {"message", lint.message}};
}

json to_json(const ValidationReport& report) {
  json errors = json::array(), lints = json::array();
  for (const auto& e : report.errors) errors.push_back(to_json(e));
  for (const auto& l : report.lints) lints.push_back(to_json(l));
  return {{"errors", errors}, {"lints", lints}, {"histogram", to_json(error_histogram(report.errors))}};
}

}  // namespace gtown
