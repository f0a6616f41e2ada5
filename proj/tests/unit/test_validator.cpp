#include <doctest.h>

#include <cmath>
#include <map>

#include "fixtures.hpp"
#include "graphictown/validator.hpp"

using namespace gtown;
using namespace gtown::testing;

namespace {

std::vector<ValidationError> classify(const std::string& text, const DesignInstance& inst) {
  auto parsed = parse_workflow_output(text, Stage::Retrieved);
  if (!parsed) return format_failure_report(parsed.error()).errors;
  return validate(*parsed, builtin_registry(), inst).errors;
}

}  // namespace

TEST_CASE("reference plans validate cleanly") {
  for (const auto& name : kReferenceNames) {
    CAPTURE(name);
    const auto report = validate(load_plan(name), builtin_registry(), load_instance(name));
    CHECK(report.errors.empty());
  }
}

TEST_CASE("plan with missing actions reports InvalidAction on those steps") {
  const auto report = validate(load_plan("book_cover_missing_actions"), builtin_registry(), load_instance("book_cover"));
  REQUIRE(report.errors.size() == 2);
  for (const auto& e : report.errors) CHECK(e.cls == ErrorClass::InvalidAction);
  CHECK(report.errors[0].step_id == 7);
  CHECK(report.errors[1].step_id == 8);
}

TEST_CASE("injection corpus is classified exactly") {
  const json doc = read_json(source_fixtures() / "corpus" / "injection_cases.json");
  const DesignInstance inst = parse_instance(doc["instance"].dump());
  REQUIRE(doc["cases"].size() == 25);

  ErrorHistogram expected, got;
  std::map<std::string, int> per_class;
  int correct = 0;
  for (const auto& c : doc["cases"]) {
    const std::string name = c["name"];
    const ErrorClass want = *parse_error_class(c["expected"].get<std::string>());
    ++per_class[c["expected"]];
    ++expected[want];
    const auto errors = classify(c["text"], inst);
    CAPTURE(name);
    REQUIRE_FALSE(errors.empty());
    // First finding is the injected defect.
    const ValidationError& first = errors.front();
    if (c.contains("step")) CHECK(first.step_id == c["step"].get<int>());
    else CHECK_FALSE(first.step_id);
    CHECK(first.cls == want);
    if (first.cls == want) ++correct;
    ++got[first.cls];
  }
  for (ErrorClass cls : kAllErrorClasses) CHECK(per_class[std::string(error_class_name(cls))] == 5);
  CHECK(correct == 25);
  CHECK(got == expected);
  const auto shares = got.shares();
  for (std::size_t i = 0; i < shares.size(); ++i) CHECK(std::abs(shares[i] - 100.0 * 5 / 25) <= 0.1);
}

TEST_CASE("dependency kinds") {
  const json doc = read_json(source_fixtures() / "corpus" / "injection_cases.json");
  const DesignInstance inst = parse_instance(doc["instance"].dump());
  std::map<std::string, DependencyKind> want = {{"import_before_save", DependencyKind::Global},
                                                {"text_before_document", DependencyKind::Local},
                                                {"unknown_layer", DependencyKind::Local},
                                                {"layer_from_previous_session", DependencyKind::Local}};
  for (const auto& c : doc["cases"]) {
    auto it = want.find(c["name"]);
    if (it == want.end()) continue;
    const auto errors = classify(c["text"], inst);
    REQUIRE_FALSE(errors.empty());
    CHECK(errors.front().dependency_kind == it->second);
  }
}

TEST_CASE("saved files become importable for later experts") {
  const auto report = validate(load_plan("postcard"), builtin_registry(), load_instance("postcard"));
  CHECK(report.file_ledger.count("floral_background.png") == 1);
  CHECK(report.file_ledger.count("floral_image_edited.ai") == 1);
  CHECK(report.file_ledger.count("floral_postcard.png") == 1);
}

TEST_CASE("histogram shares") {
  ErrorHistogram h;
  h[ErrorClass::Format] = 1;
  h[ErrorClass::Dependency] = 3;
  const auto s = h.shares();
  CHECK(s[0] == doctest::Approx(25.0));
  CHECK(s[4] == doctest::Approx(75.0));
  CHECK(ErrorHistogram{}.shares()[0] == 0.0);
  CHECK(histogram_from_json(to_json(h)) == h);
}
