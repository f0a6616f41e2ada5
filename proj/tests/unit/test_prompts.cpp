#include <doctest.h>

#include "fixtures.hpp"
#include "graphictown/prompts.hpp"

using namespace gtown;
using namespace gtown::testing;

namespace {

const std::vector<std::string> kPlanningPrompts = {"outline", "recruitment", "expert_plan", "supervision", "retrieval"};

PromptValues values_for(const std::string& name) {
  PromptValues v;
  const json doc = read_json(source_fixtures() / "prompts" / (name + ".json"));
  for (auto it = doc.begin(); it != doc.end(); ++it) v[it.key()] = it.value().get<std::string>();
  return v;
}

}  // namespace

TEST_CASE("planning prompts render to the golden files") {
  for (const auto& name : kPlanningPrompts) {
    CAPTURE(name);
    const std::string golden = read_text(source_fixtures() / "golden" / (name + ".txt"));
    CHECK(render_prompt(name, values_for(name)) == golden);
  }
}

TEST_CASE("rendered prompts differ from the bodies only at placeholder sites") {
  for (const auto& name : kPlanningPrompts) {
    CAPTURE(name);
    const std::string_view body = prompt_template(name).body;
    const PromptValues values = values_for(name);
    const std::string golden = read_text(source_fixtures() / "golden" / (name + ".txt"));
    std::size_t in = 0, out = 0;
    for (const auto& site : placeholder_sites(body)) {
      const std::string_view literal = body.substr(in, site.offset - in);
      REQUIRE(golden.compare(out, literal.size(), literal) == 0);
      out += literal.size();
      const std::string& value = values.find(site.name)->second;
      REQUIRE(golden.compare(out, value.size(), value) == 0);
      out += value.size();
      in = site.offset + site.length;
    }
    CHECK(golden.substr(out) == body.substr(in));
  }
}

TEST_CASE("template inventory") {
  std::vector<std::string> names;
  for (const auto& t : prompt_templates()) names.emplace_back(t.name);
  CHECK(names == std::vector<std::string>{"outline", "recruitment", "expert_plan", "supervision", "retrieval",
                                          "judge_color", "judge_text", "judge_image", "vqa", "originality",
                                          "elaboration"});
  CHECK(placeholder_names(prompt_template("outline").body) ==
        std::vector<std::string>{"user request", "user image files"});
  CHECK(placeholder_names(prompt_template("retrieval").body).size() == 3);
  CHECK_THROWS_AS(prompt_template("nope"), std::out_of_range);
}

TEST_CASE("render errors") {
  PromptValues v = values_for("outline");
  v.erase("user request");
  CHECK_THROWS_AS(render_prompt("outline", v), PromptError);
  v = values_for("outline");
  v["extra"] = "x";
  CHECK_THROWS_AS(render_prompt("outline", v), PromptError);
  v = values_for("outline");
  v["user request"] = "{user image files}";
  CHECK(render_prompt("outline", v).find("{user image files}") != std::string::npos);
}

TEST_CASE("prompt identification") {
  for (const auto& name : kPlanningPrompts)
    CHECK(identify_prompt(read_text(source_fixtures() / "golden" / (name + ".txt"))) == std::optional<std::string_view>(name));
  CHECK_FALSE(identify_prompt("hello"));
}
