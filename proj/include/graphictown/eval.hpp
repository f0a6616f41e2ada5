#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphictown/chat.hpp"
#include "graphictown/metrics.hpp"
#include "graphictown/pipeline.hpp"

namespace gtown {

class SidecarError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct VqaAnswer {
  bool yes = false;
  std::optional<double> confidence;
};

/// Client for the scoring service (/health, /score/similarity, /score/vqa).
class SidecarClient {
 public:
  explicit SidecarClient(std::string base_url, int timeout_seconds = 60);

  /// True when /health answers 200.
  bool healthy() const;
  /// Throws SidecarError on transport or protocol failure.
  double similarity(const std::string& query, const std::vector<std::uint8_t>& png) const;
  VqaAnswer vqa(const std::string& question, const std::vector<std::uint8_t>& png) const;

 private:
  std::string base_url_;
  int timeout_seconds_;
};

struct DesignPassScores {
  std::optional<int> color, text, image;
  /// Present only when all three aspects parsed.
  std::optional<double> aggregate() const;
};

struct CreativityScores {
  std::optional<int> originality, elaboration;
};

struct EvalOptions {
  ChatClient* judge = nullptr;  // design pass, creativity, question generation
  std::string judge_model = "default";
  const SidecarClient* sidecar = nullptr;
  /// Send the final PNG to the judge instead of a text description.
  bool creativity_with_image = false;
  /// Ask the judge for yes/no questions when the instance has none.
  bool generate_questions = false;
};

struct RunScores {
  std::string instance_id;
  std::string model;
  std::string design_type;
  bool delivery = false;
  std::optional<double> step_efficiency;
  std::optional<double> expert_use_efficiency;
  std::optional<DesignPassScores> design_pass;
  std::optional<double> success_rate;
  std::optional<double> fidelity;
  std::optional<double> content_similarity;
  std::optional<double> vqa_pass_rate;
  std::optional<CreativityScores> creativity;
  int supervised_steps = 0;
  int retrieved_steps = 0;
  ErrorHistogram errors;
  std::vector<std::string> warnings;
};

/// Judge prompts for color, text and image adherence of W_s.
DesignPassScores design_pass(ChatClient& judge, const std::string& model, const DesignOutline& outline,
                             const Workflow& supervised);
CreativityScores creativity(ChatClient& judge, const std::string& model, const std::string& query,
                            const Raster& final_design, const std::optional<std::string>& description);
/// Short text description of a run's final design (for text-only judges).
std::string describe_design(const PipelineRun& run);

/// 100 * yes / total. Throws std::invalid_argument when total is 0.
double vqa_pass_rate(std::size_t yes, std::size_t total);

/// Input images of the instance, loaded from their resolved paths.
std::vector<Raster> load_input_images(const DesignInstance& instance, std::vector<std::string>* warnings = nullptr);

RunScores score_run(const PipelineRun& run, const EvalOptions& options);

json to_json(const RunScores& scores);

/// Metric columns in report order.
inline constexpr const char* kMetricNames[] = {
    "delivery_rate",       "step_efficiency",   "expert_use_efficiency", "design_pass_color",
    "design_pass_text",    "design_pass_image", "design_pass",           "success_rate",
    "fidelity",            "content_similarity", "vqa_pass_rate",        "originality",
    "elaboration"};

struct AggregateRow {
  std::string model;
  std::string design_type;
  int run_count = 0;
  /// Indexed like kMetricNames; absent when no run had the metric.
  std::vector<std::optional<double>> means;
  ErrorHistogram errors;
};

/// Groups by (model, design type), sorted by key.
std::vector<AggregateRow> aggregate(std::span<const RunScores> runs);

json report_to_json(std::span<const AggregateRow> rows);
std::string report_markdown(std::span<const AggregateRow> rows);
/// Bar chart of error-class shares for one group.
std::string error_chart_svg(const AggregateRow& row);
/// report.json, report.md and charts/<model>__<design type>.svg.
void write_report(const std::filesystem::path& dir, std::span<const AggregateRow> rows);

}  // namespace gtown
