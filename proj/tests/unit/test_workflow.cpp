#include <doctest.h>

#include "fixtures.hpp"
#include "graphictown/workflow.hpp"

using namespace gtown;
using namespace gtown::testing;

TEST_CASE("json extraction skips prose and fences") {
  CHECK(extract_json_array("Sure!\n```json\n[1, [2], \"]\"]\n```\nDone") == std::optional<std::string>("[1, [2], \"]\"]"));
  CHECK(extract_json_array("no array here") == std::nullopt);
  CHECK(extract_json_array("[1, 2") == std::nullopt);
  CHECK(extract_json_object("x {\"a\": \"}\"} y") == std::optional<std::string>("{\"a\": \"}\"}"));
}

TEST_CASE("workflow parsing by stage") {
  const std::string text =
      R"([{"id": "1", "expert": "Photo Editor", "description": "d", "skill": "CreateDocument",
           "parameters": {"docType": "poster"}}])";
  auto retrieved = parse_workflow(text, Stage::Retrieved);
  REQUIRE(retrieved);
  CHECK(retrieved->steps[0].id == 1);
  CHECK(retrieved->steps[0].action == std::optional<std::string>("CreateDocument"));
  CHECK(retrieved->steps[0].parameters->at("docType") == "poster");

  auto supervised = parse_workflow(text, Stage::Supervised);
  REQUIRE(supervised);
  CHECK_FALSE(supervised->steps[0].action);
  CHECK_FALSE(supervised->steps[0].parameters);

  CHECK_FALSE(parse_workflow(R"([{"id": 1, "expert": "Photo Editor"}])", Stage::Supervised));
  CHECK_FALSE(parse_workflow(R"([{"id": 1.5, "expert": "Photo Editor", "description": "d"}])", Stage::Supervised));
  CHECK_FALSE(parse_workflow(R"({"id": 1})", Stage::Supervised));
  auto failure = parse_workflow(R"([{"id": 1, "expert": "E", "description": "d"}, 7])", Stage::Supervised);
  REQUIRE_FALSE(failure);
  CHECK(failure.error().index == std::optional<std::size_t>(1));
}

TEST_CASE("workflow serialization round trip") {
  for (const auto& name : kReferenceNames) {
    const Workflow w = load_plan(name);
    auto back = parse_workflow(serialize_workflow(w), Stage::Retrieved);
    REQUIRE(back);
    CHECK(workflow_to_json(*back) == workflow_to_json(w));
  }
}

TEST_CASE("outline parsing") {
  auto o = parse_outline(
      R"([{"user_request": "r", "design_choices": {"background_color": "white", "text": {"content": "c",
          "position": "p", "color": "k", "size": 12}, "image": {"content": "i", "position": "q", "size": "s"}}}])");
  REQUIRE(o);
  CHECK(o->user_request == "r");
  CHECK(o->text.size == "12");
  CHECK(o->image.position == "q");
  CHECK_FALSE(parse_outline("not json"));
}

TEST_CASE("recruitment keeps first occurrence of each known expert") {
  auto r = parse_recruitment(R"([{"expert": "Layout Designer", "task": "a"},
                                 {"expert": "Text Editor", "task": "b"},
                                 {"expert": "layout designer", "task": "c"},
                                 {"expert": "Photo Editor", "task": "d"}])");
  REQUIRE(r);
  REQUIRE(r->entries.size() == 2);
  CHECK(r->entries[0].expert == ExpertId::LayoutDesigner);
  CHECK(r->entries[0].task == "a");
  CHECK(r->entries[1].expert == ExpertId::PhotoEditor);
  CHECK(r->warnings.size() == 2);
}

TEST_CASE("difficulty tiers") {
  CHECK(difficulty_for_expert_count(1) == Difficulty{Tier::Easy, 10});
  CHECK(difficulty_for_expert_count(2) == Difficulty{Tier::Medium, 20});
  CHECK(difficulty_for_expert_count(3) == Difficulty{Tier::Hard, 30});
  CHECK_THROWS_AS(difficulty_for_expert_count(0), std::domain_error);
  CHECK(difficulty_of(load_plan("business_card")).step_limit == 10);
  CHECK(difficulty_of(load_plan("book_cover")).step_limit == 20);
}

TEST_CASE("instance ingestion") {
  const DesignInstance inst = load_instance("book_cover");
  CHECK(inst.design_type == DesignType::BookCover);
  REQUIRE(inst.images.size() == 2);
  CHECK(inst.images[0].resolved == assets_dir() / inst.images[0].path);
  REQUIRE(inst.questions);
  CHECK(inst.questions->size() == 3);
  CHECK(parse_design_type("book_cover") == DesignType::BookCover);
  CHECK(parse_design_type("BusinessCard") == DesignType::BusinessCard);

  try {
    parse_instance(R"({"id": "x", "design_type": "flyer", "query": "q", "images": [{"path": "a.png"}]})");
    FAIL("expected IngestError");
  } catch (const IngestError& e) {
    CHECK(e.field() == "design_type");
  }
  CHECK_THROWS_AS(parse_instance(R"({"id": "x", "design_type": "poster", "query": "q", "images": []})"),
                  IngestError);
}
