#include <doctest.h>

#include <algorithm>
#include <map>

#include "fixtures.hpp"
#include "graphictown/registry.hpp"

using namespace gtown;
using namespace gtown::testing;

namespace {

// Deliberate departures of the built-in catalog from the transcribed table.
const std::map<std::string, std::string> kRenamed = {{"StorkeDrawing", "StrokeDrawing"}};
const std::map<std::string, std::vector<std::string>> kParamOverrides = {
    {"OpacityObject", {"layerName", "opacity"}},
    {"RemoveObject", {"layerName"}},
    {"RepositionObject", {"layerName", "posX", "posY"}},
    {"ResizeObject", {"layerName", "width", "height"}},
    {"RotateObject", {"layerName", "angle"}},
    {"AdjustHSL", {"layerName", "hue", "saturation", "light"}},
};

}  // namespace

TEST_CASE("catalog matches the checked-in transcription") {
  const json doc = read_json(source_fixtures() / "catalog" / "actions.json");
  const Registry& reg = builtin_registry();
  REQUIRE(doc["actions"].size() == 46);
  CHECK(reg.size() == 46);

  std::map<std::string, int> per_category;
  for (const auto& row : doc["actions"]) {
    std::string name = row["name"];
    if (auto it = kRenamed.find(name); it != kRenamed.end()) name = it->second;
    CAPTURE(name);
    const ActionSpec* spec = reg.lookup(name);
    REQUIRE(spec);
    CHECK(category_name(spec->category) == row["category"].get<std::string>());
    ++per_category[row["category"]];

    std::vector<std::string> experts;
    for (ExpertId e : spec->experts) experts.emplace_back(expert_key(e));
    auto want = row["experts"].get<std::vector<std::string>>();
    std::sort(want.begin(), want.end());
    std::sort(experts.begin(), experts.end());
    CHECK(experts == want);

    std::vector<std::string> params;
    for (const auto& p : spec->params) params.push_back(p.name);
    auto want_params = row["parameters"].get<std::vector<std::string>>();
    if (auto it = kParamOverrides.find(name); it != kParamOverrides.end()) want_params = it->second;
    CHECK(params == want_params);
  }
  CHECK(per_category["Basic"] == 4);
  CHECK(per_category["Drawing"] == 13);
  CHECK(per_category["Text"] == 11);
  CHECK(per_category["Object"] == 18);
}

TEST_CASE("expert names") {
  for (ExpertId e : kAllExperts) {
    CHECK(parse_expert(expert_name(e)) == e);
    CHECK(parse_expert(expert_key(e)) == e);
  }
  CHECK(parse_expert("  photo   editor ") == ExpertId::PhotoEditor);
  CHECK_FALSE(parse_expert("Text Editor"));
  CHECK_FALSE(parse_expert("Photoshop"));
  CHECK_FALSE(parse_expert(""));
}

TEST_CASE("per-expert catalogs") {
  const Registry& reg = builtin_registry();
  std::map<ExpertId, std::size_t> n;
  for (ExpertId e : kAllExperts) n[e] = reg.actions_for_expert(e).size();
  CHECK(n[ExpertId::VectorGraphicEditor] == 4 + 13 + 11 + 6);
  CHECK(n[ExpertId::LayoutDesigner] == 4 + 10 + 6);
  CHECK(n[ExpertId::PhotoEditor] == 4 + 10 + 17);
  const std::string listing = render_action_catalog(reg, ExpertId::LayoutDesigner);
  CHECK(listing.find("GenerateQRObject") != std::string::npos);
  CHECK(listing.find("DrawCircle") == std::string::npos);
}

TEST_CASE("parameter validation") {
  const ActionSpec& bg = *builtin_registry().lookup("SetBackgroundColor");
  CHECK(validate_params(bg, {{"red", 1}, {"green", 2}, {"blue", 3}}).empty());
  CHECK(validate_params(bg, {{"red", "255"}, {"green", 0}, {"blue", 0}}).empty());

  auto v = validate_params(bg, {{"red", 256}, {"green", "x"}, {"alpha", 1}});
  std::map<ParamViolation::Kind, int> kinds;
  for (const auto& x : v) ++kinds[x.kind];
  CHECK(kinds[ParamViolation::Kind::OutOfRange] == 1);
  CHECK(kinds[ParamViolation::Kind::TypeMismatch] == 1);
  CHECK(kinds[ParamViolation::Kind::Unknown] == 1);
  CHECK(kinds[ParamViolation::Kind::Missing] == 1);

  const ActionSpec& doc = *builtin_registry().lookup("CreateDocument");
  auto norm = normalize_params(doc, {{"docType", "Book Cover"}});
  REQUIRE(norm);
  CHECK((*norm)["docType"] == "book cover");
  CHECK_FALSE(normalize_params(doc, {{"docType", "doc"}}));
}

TEST_CASE("export alias is opt-in") {
  const Registry& reg = builtin_registry();
  CHECK(resolve_action(reg, "ExportDocument", false) == nullptr);
  const ActionSpec* s = resolve_action(reg, "ExportDocument", true);
  REQUIRE(s);
  CHECK(s->name == "SaveDocument");
}

TEST_CASE("registry json round trip") {
  const Registry& reg = builtin_registry();
  CHECK(registry_from_json(registry_to_json(reg)) == reg);
  json bad = registry_to_json(reg);
  bad["actions"][0]["experts"] = json::array();
  CHECK_THROWS_AS(registry_from_json(bad), std::invalid_argument);
  ActionSpec a{"X", ActionCategory::Basic, {}, {ExpertId::PhotoEditor}, ""};
  CHECK_THROWS_AS(Registry({a, a}), std::invalid_argument);
}
