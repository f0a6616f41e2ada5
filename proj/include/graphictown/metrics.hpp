#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "graphictown/errors.hpp"
#include "graphictown/raster.hpp"
#include "graphictown/workflow.hpp"

namespace gtown {

/// (expert, action or normalized description, canonical parameters).
std::string step_canonical_key(const WorkflowStep& step);

/// Non-duplicate steps over all steps. Throws std::invalid_argument when empty.
double step_efficiency(const Workflow& workflow);

/// (E - 1) / S with E distinct experts and S expert switches; 1.0 when only
/// one expert appears. Throws std::invalid_argument when empty.
double expert_use_efficiency(const Workflow& workflow);
double expert_use_efficiency(std::span<const std::string> experts);

/// mean(color, text, image) / 5.
double design_pass_aggregate(double color, double text, double image);
/// One aspect score mapped from [1,5] onto [0,1].
double design_pass_normalized(double score);

/// First standalone integer in `text`, if it lies in [1,5].
std::optional<int> parse_judge_score(std::string_view text);
/// "yes"/"no" from a free-form answer, case-insensitive, first token wins.
std::optional<bool> parse_yes_no(std::string_view text);

/// 100 * Ok / all. Throws std::invalid_argument when empty.
double success_rate(std::span<const ExecRecord> records);

/// Fidelity scales tried for each input image.
inline constexpr double kFidelityScales[] = {0.25, 0.5, 0.75, 1.0, 1.5, 2.0};

/// Both images are flattened over white and reduced to luma.
/// Best normalized cross-correlation of `tmpl` inside `design` over the
/// fidelity scales; templates larger than the design are skipped.
double template_match_score(const Raster& design, const Raster& tmpl);

/// Mean of per-image best scores, clamped to [0,1]. No design scores 0.
double fidelity(const Raster* design, std::span<const Raster> inputs);

}  // namespace gtown
