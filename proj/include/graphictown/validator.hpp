#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "graphictown/errors.hpp"
#include "graphictown/registry.hpp"
#include "graphictown/workflow.hpp"

namespace gtown {

/// Advisory finding. Never counted as an error class.
struct Lint {
  enum class Kind { ExpertReentry, SessionStart, SessionEnd, NonContiguousIds, DuplicateStep, LayerNaming };
  Kind kind;
  std::optional<int> step_id;
  std::string message;
};

std::string_view lint_kind_name(Lint::Kind kind);

struct ValidatorOptions {
  bool alias_export_document = false;
};

struct ValidationReport {
  std::vector<ValidationError> errors;
  std::vector<Lint> lints;
  /// Files available after the last step, sorted.
  std::set<std::string> file_ledger;

  bool ok() const { return errors.empty(); }
};

/// Symbolic execution of a retrieved workflow. At most one error per step.
ValidationReport validate(const Workflow& workflow, const Registry& registry, const DesignInstance& instance,
                          const ValidatorOptions& options = {});

/// Report for a plan that never parsed: a single Format error.
ValidationReport format_failure_report(const FormatFailure& failure);

json to_json(const Lint& lint);
json to_json(const ValidationReport& report);

/// Seeds a file ledger with each instance image path and its basename.
std::set<std::string> seed_file_ledger(const DesignInstance& instance);

}  // namespace gtown
