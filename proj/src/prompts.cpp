#include "graphictown/prompts.hpp"

#include <algorithm>

namespace gtown {

namespace {

bool is_lower(char c) { return c >= 'a' && c <= 'z'; }

}  // namespace

const PromptTemplate& prompt_template(std::string_view name) {
  for (const auto& t : prompt_templates())
    if (t.name == name) return t;
  throw std::out_of_range("unknown prompt template \"" + std::string(name) + "\"");
}

std::vector<PlaceholderSite> placeholder_sites(std::string_view body) {
  std::vector<PlaceholderSite> out;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] != '{') continue;
    std::size_t j = i + 1;
    while (j < body.size() && (is_lower(body[j]) || body[j] == ' ')) ++j;
    if (j >= body.size() || body[j] != '}') continue;
    // at least two chars, first and last a letter
    if (j - i - 1 < 2 || !is_lower(body[i + 1]) || !is_lower(body[j - 1])) continue;
    out.push_back({i, j - i + 1, std::string(body.substr(i + 1, j - i - 1))});
    i = j;
  }
  return out;
}

std::vector<std::string> placeholder_names(std::string_view body) {
  std::vector<std::string> names;
  for (auto& site : placeholder_sites(body))
    if (std::find(names.begin(), names.end(), site.name) == names.end()) names.push_back(site.name);
  return names;
}

std::string render_prompt(const PromptTemplate& tmpl, const PromptValues& values) {
  const auto sites = placeholder_sites(tmpl.body);
  for (const auto& [key, _] : values) {
    bool used = std::any_of(sites.begin(), sites.end(), [&](const auto& s) { return s.name == key; });
    if (!used) throw PromptError(std::string(tmpl.name) + ": no placeholder {" + key + "}");
  }
  std::string out;
  std::size_t pos = 0;
  for (const auto& site : sites) {
    auto it = values.find(site.name);
    if (it == values.end()) throw PromptError(std::string(tmpl.name) + ": unfilled placeholder {" + site.name + "}");
    out.append(tmpl.body.substr(pos, site.offset - pos));
    out.append(it->second);
    pos = site.offset + site.length;
  }
  out.append(tmpl.body.substr(pos));
  return out;
}

std::string render_prompt(std::string_view name, const PromptValues& values) {
  return render_prompt(prompt_template(name), values);
}

std::optional<std::string_view> identify_prompt(std::string_view prompt) {
  std::optional<std::string_view> best;
  std::size_t best_len = 0;
  for (const auto& t : prompt_templates()) {
    std::size_t lit_pos = 0, at = 0, matched = 0;
    bool ok = true;
    auto take = [&](std::string_view lit, bool anchored) {
      std::size_t found = anchored ? (prompt.substr(at, lit.size()) == lit ? at : std::string_view::npos)
                                   : prompt.find(lit, at);
      if (found == std::string_view::npos) return false;
      at = found + lit.size();
      matched += lit.size();
      return true;
    };
    for (const auto& site : placeholder_sites(t.body)) {
      if (!take(t.body.substr(lit_pos, site.offset - lit_pos), lit_pos == 0)) {
        ok = false;
        break;
      }
      lit_pos = site.offset + site.length;
    }
    if (ok) ok = take(t.body.substr(lit_pos), lit_pos == 0);
    if (ok && matched > best_len) {
      best = t.name;
      best_len = matched;
    }
  }
  return best;
}

}  // namespace gtown
