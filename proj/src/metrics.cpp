#include "graphictown/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <stdexcept>

#include <opencv2/imgproc.hpp>

#include "graphictown/registry.hpp"

namespace gtown {

namespace {

std::string normalize_description(std::string_view text) {
  std::string out;
  bool space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  while (!out.empty() && out.back() == '.') out.pop_back();
  return out;
}

std::string expert_label(const std::string& raw) {
  if (auto e = parse_expert(raw)) return std::string(expert_key(*e));
  return normalize_description(raw);
}

}  // namespace

std::string step_canonical_key(const WorkflowStep& step) {
  json key = json::array();
  key.push_back(expert_label(step.expert));
  key.push_back(step.action ? json(*step.action) : json(normalize_description(step.description)));
  key.push_back(step.parameters ? *step.parameters : json());
  return key.dump();
}

double step_efficiency(const Workflow& workflow) {
  if (workflow.steps.empty()) throw std::invalid_argument("step efficiency of an empty workflow");
  std::set<std::string> seen;
  std::size_t duplicates = 0;
  for (const auto& s : workflow.steps)
    if (!seen.insert(step_canonical_key(s)).second) ++duplicates;
  const double n = static_cast<double>(workflow.steps.size());
  return (n - static_cast<double>(duplicates)) / n;
}

double expert_use_efficiency(std::span<const std::string> experts) {
  if (experts.empty()) throw std::invalid_argument("expert-use efficiency of an empty workflow");
  std::set<std::string> distinct(experts.begin(), experts.end());
  int switches = 0;
  for (std::size_t i = 1; i < experts.size(); ++i)
    if (experts[i] != experts[i - 1]) ++switches;
  if (switches == 0) return 1.0;
  return static_cast<double>(distinct.size() - 1) / switches;
}

double expert_use_efficiency(const Workflow& workflow) {
  std::vector<std::string> experts;
  for (const auto& s : workflow.steps) experts.push_back(expert_label(s.expert));
  return expert_use_efficiency(experts);
}

double design_pass_aggregate(double color, double text, double image) { return (color + text + image) / 3.0 / 5.0; }

double design_pass_normalized(double score) { return (score - 1.0) / 4.0; }

std::optional<int> parse_judge_score(std::string_view text) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) continue;
    if (i > 0 && (std::isalnum(static_cast<unsigned char>(text[i - 1])) || text[i - 1] == '.')) {
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
    // "4.5" is not an integer score
    if (j < text.size() && text[j] == '.' && j + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[j + 1])))
      return std::nullopt;
    if (j - i > 1) return std::nullopt;
    int v = text[i] - '0';
    if (v >= 1 && v <= 5) return v;
    return std::nullopt;
  }
  return std::nullopt;
}

std::optional<bool> parse_yes_no(std::string_view text) {
  std::string word;
  for (char c : text) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      word += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!word.empty()) {
      break;
    }
  }
  if (word == "yes") return true;
  if (word == "no") return false;
  return std::nullopt;
}

double success_rate(std::span<const ExecRecord> records) {
  if (records.empty()) throw std::invalid_argument("success rate of an empty execution");
  const auto ok = std::count_if(records.begin(), records.end(), [](const auto& r) { return r.status == ExecStatus::Ok; });
  return 100.0 * static_cast<double>(ok) / static_cast<double>(records.size());
}

namespace {

cv::Mat gray_of(const Raster& r) {
  cv::Mat out(r.height(), r.width(), CV_32F);
  for (int y = 0; y < r.height(); ++y) {
    float* row = out.ptr<float>(y);
    for (int x = 0; x < r.width(); ++x) {
      Rgba c = r.at(x, y);
      auto flat = [&](int v) { return static_cast<std::uint8_t>((v * c.a + 255 * (255 - c.a) + 127) / 255); };
      row[x] = static_cast<float>(luma({flat(c.r), flat(c.g), flat(c.b), 255}));
    }
  }
  return out;
}

}  // namespace

double template_match_score(const Raster& design, const Raster& tmpl) {
  if (design.empty() || tmpl.empty()) return 0.0;
  const cv::Mat d = gray_of(design);
  const cv::Mat t = gray_of(tmpl);
  double best = 0.0;
  for (double s : kFidelityScales) {
    const int w = std::max(1, static_cast<int>(std::lround(tmpl.width() * s)));
    const int h = std::max(1, static_cast<int>(std::lround(tmpl.height() * s)));
    if (w > design.width() || h > design.height()) continue;
    cv::Mat scaled;
    if (w == t.cols && h == t.rows)
      scaled = t;
    else
      cv::resize(t, scaled, cv::Size(w, h), 0, 0, s < 1.0 ? cv::INTER_AREA : cv::INTER_LINEAR);
    cv::Mat result;
    cv::matchTemplate(d, scaled, result, cv::TM_CCOEFF_NORMED);
    double max_val = 0.0;
    cv::minMaxLoc(result, nullptr, &max_val);
    if (std::isfinite(max_val)) best = std::max(best, max_val);
  }
  return std::clamp(best, 0.0, 1.0);
}

double fidelity(const Raster* design, std::span<const Raster> inputs) {
  if (!design || inputs.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& img : inputs) sum += template_match_score(*design, img);
  return std::clamp(sum / static_cast<double>(inputs.size()), 0.0, 1.0);
}

}  // namespace gtown
