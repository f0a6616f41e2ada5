#pragma once

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gtown {

/// A prompt body with `{placeholder}` slots (lowercase words and spaces).
struct PromptTemplate {
  std::string_view name;
  std::string_view body;
};

/// Built-in templates: outline, recruitment, expert_plan, supervision,
/// retrieval, judge_color, judge_text, judge_image, vqa, originality,
/// elaboration.
std::span<const PromptTemplate> prompt_templates();
/// Throws std::out_of_range for an unknown name.
const PromptTemplate& prompt_template(std::string_view name);

struct PlaceholderSite {
  std::size_t offset = 0;  // byte offset of '{'
  std::size_t length = 0;  // including braces
  std::string name;        // without braces
};

std::vector<PlaceholderSite> placeholder_sites(std::string_view body);
/// Distinct placeholder names in first-use order.
std::vector<std::string> placeholder_names(std::string_view body);

class PromptError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using PromptValues = std::map<std::string, std::string, std::less<>>;

/// Substitutes every site. Values are inserted literally (never rescanned).
/// Throws PromptError on an unfilled placeholder or an unused value.
std::string render_prompt(const PromptTemplate& tmpl, const PromptValues& values);
std::string render_prompt(std::string_view name, const PromptValues& values);

/// Template whose text before its first placeholder (or whole body) starts
/// `prompt`; used by scripted clients to tell stages apart.
std::optional<std::string_view> identify_prompt(std::string_view prompt);

}  // namespace gtown
