#pragma once

#include <string>
#include <vector>

#include "graphictown/raster.hpp"
#include "graphictown/workflow.hpp"

namespace gtown::testing {

/// Straightforward double-precision reimplementations used as test oracles.
namespace oracle {

using Gray = std::vector<std::vector<double>>;

Gray gray_over_white(const Raster& r);
/// Area averaging with fractional pixel coverage.
Gray shrink_area(const Gray& src, int w, int h);
/// Bilinear with half-pixel centers and edge clamping.
Gray grow_linear(const Gray& src, int w, int h);
/// Best zero-mean normalized correlation over all placements; 0 for flat windows.
double best_ncc(const Gray& image, const Gray& tmpl);
/// best_ncc over the fidelity scales, clamped to [0,1].
double match_score(const Raster& design, const Raster& tmpl);

/// (E - 1) / S by direct counting.
double expert_use(const std::vector<std::string>& experts);

}  // namespace oracle

struct FidelityPair {
  std::string label;
  Raster design;
  Raster tmpl;
};

/// Ten design/template pairs: exact embeds, a 50 px shifted embed, a blank
/// design, rescaled and translucent embeds, and unrelated noise.
std::vector<FidelityPair> fidelity_pairs();

}  // namespace gtown::testing
