#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "graphictown/chat.hpp"
#include "graphictown/engine.hpp"
#include "graphictown/errors.hpp"
#include "graphictown/validator.hpp"
#include "graphictown/workflow.hpp"

namespace gtown {

struct PipelineConfig {
  std::string model = "default";
  double temperature = 0.0;
  int retries = 0;  // re-asks after a malformed answer
  /// Run retrieval and execution even when W_s missed delivery.
  bool execute_undelivered = true;
  EngineOptions engine;
};

struct Transcript {
  std::string stage;  // "outline", "recruitment", "expert_plan:<expert>", ...
  std::string prompt;
  std::string response;
  std::optional<std::string> client_error;
};

struct StageFailure {
  std::string stage;
  FormatFailure failure;
};

struct ExpertPlan {
  ExpertId expert;
  Workflow plan;  // empty when the answer did not parse
};

struct PipelineRun {
  std::string instance_id;
  std::string model;
  DesignInstance instance;
  std::optional<DesignOutline> outline;
  bool outline_degraded = false;
  std::optional<std::vector<RecruitmentEntry>> recruitment;
  std::vector<std::string> warnings;
  std::vector<ExpertPlan> expert_plans;
  std::optional<Workflow> supervised;
  std::optional<Difficulty> difficulty;
  bool delivery = false;
  std::optional<std::string> delivery_failure;
  std::optional<Workflow> retrieved;
  std::optional<ValidationReport> validation;  // of the retrieved workflow
  std::vector<ExecRecord> exec;
  std::optional<std::string> final_design;  // file name inside the run dir
  std::optional<Raster> final_raster;       // not serialized
  std::vector<std::string> notices;         // engine notices
  std::vector<StageFailure> format_failures;
  std::vector<std::string> client_errors;
  std::vector<Transcript> transcripts;
  std::optional<std::string> aborted_at;

  /// Format failures plus the static classes found in the retrieved plan.
  ErrorHistogram error_histogram() const;
};

/// Image files as "path (caption)" lines.
std::string image_file_lines(const DesignInstance& instance);
/// Fallback outline when step 1 failed.
DesignOutline degraded_outline(const DesignInstance& instance);

/// ≥3 consecutive identical (expert, description) steps, or more than three
/// times `step_limit` steps.
bool has_dead_loop(const Workflow& workflow, int step_limit);

/// Maximal runs of consecutive steps sharing the same expert string.
std::vector<Workflow> expert_segments(const Workflow& workflow);

class Pipeline {
 public:
  Pipeline(ChatClient& client, const Registry& registry, PipelineConfig config = {});

  DesignOutline step1_outline(PipelineRun& run);
  std::optional<std::vector<RecruitmentEntry>> step2_recruit(PipelineRun& run);
  Workflow step3_expert_plan(PipelineRun& run, const DesignOutline& outline, const RecruitmentEntry& entry);
  std::optional<Workflow> step4_supervise(PipelineRun& run);
  Workflow step5_retrieve(PipelineRun& run, const Workflow& supervised);
  void step6_execute(PipelineRun& run);

  /// All six steps. Never throws on model misbehaviour.
  PipelineRun run(const DesignInstance& instance);

 private:
  /// Sends `prompt` (retrying on parse failure) and returns the last answer
  /// for which `accept` succeeded, or the last failure.
  template <class T>
  Expected<T, FormatFailure> ask(PipelineRun& run, const std::string& stage, const std::string& prompt,
                                 const std::function<Expected<T, FormatFailure>(std::string_view)>& parse);

  ChatClient& client_;
  const Registry& registry_;
  PipelineConfig config_;
};

json to_json(const PipelineRun& run);
/// Inverse of to_json; final_raster stays empty.
PipelineRun pipeline_run_from_json(const json& j, const std::filesystem::path& assets_root = {});

/// Writes run.json, transcripts.jsonl, exec.jsonl and final.png.
void write_run_dir(const PipelineRun& run, const std::filesystem::path& dir);
PipelineRun read_run_dir(const std::filesystem::path& dir, const std::filesystem::path& assets_root = {});

}  // namespace gtown
