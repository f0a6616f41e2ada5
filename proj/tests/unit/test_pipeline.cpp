#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "graphictown/metrics.hpp"
#include "graphictown/pipeline.hpp"
#include "graphictown/prompts.hpp"

using namespace gtown;
using namespace gtown::testing;

namespace {

/// Reference script with the answer for one prompt kind replaced.
ScriptedClient::Script with_answer(const std::string& name, const std::string& kind,
                                   std::function<std::string(const ChatRequest&)> answer) {
  auto base = reference_script(name);
  return [base, kind, answer](const ChatRequest& r) {
    return identify_prompt(r.messages[0].content) == std::optional<std::string_view>(kind) ? answer(r) : base(r);
  };
}

PipelineRun run_with(ScriptedClient::Script script, const std::string& instance, PipelineConfig config = {}) {
  ScriptedClient client(std::move(script));
  return Pipeline(client, builtin_registry(), config).run(load_instance(instance));
}

int count_stage(const PipelineRun& run, const std::string& prefix) {
  int n = 0;
  for (const auto& t : run.transcripts) n += t.stage.rfind(prefix, 0) == 0;
  return n;
}

}  // namespace

TEST_CASE("reference scripts reproduce the reference plans") {
  const std::map<std::string, bool> delivered = {
      {"book_cover", false}, {"business_card", false}, {"postcard", true}, {"poster", false}};
  for (const auto& name : kReferenceNames) {
    CAPTURE(name);
    const PipelineRun run = run_with(reference_script(name), name);
    CHECK(run.format_failures.empty());
    CHECK(run.client_errors.empty());
    CHECK_FALSE(run.outline_degraded);
    REQUIRE(run.retrieved);
    CHECK(workflow_to_json(*run.retrieved) == workflow_to_json(load_plan(name)));
    CHECK(run.validation->ok());
    CHECK(success_rate(run.exec) == 100.0);
    CHECK(run.delivery == delivered.at(name));
    CHECK(run.final_raster);
    CHECK(run.error_histogram().total() == 0);
  }
}

TEST_CASE("step limits follow the recruited tier") {
  const PipelineRun book = run_with(reference_script("book_cover"), "book_cover");
  REQUIRE(book.difficulty);
  CHECK(*book.difficulty == Difficulty{Tier::Medium, 20});
  CHECK(book.supervised->steps.size() == 32);
  CHECK_FALSE(book.delivery);
  CHECK(book.delivery_failure == std::optional<std::string>("32 steps exceed the Medium limit of 20"));

  const PipelineRun card = run_with(reference_script("business_card"), "business_card");
  CHECK(card.difficulty->step_limit == 10);
  CHECK_FALSE(card.delivery);

  PipelineConfig strict;
  strict.execute_undelivered = false;
  const PipelineRun skipped = run_with(reference_script("book_cover"), "book_cover", strict);
  CHECK_FALSE(skipped.retrieved);
  CHECK(skipped.exec.empty());
  CHECK(count_stage(skipped, "retrieval") == 0);
}

TEST_CASE("a model that never answers with json") {
  const PipelineRun run = run_with([](const ChatRequest&) { return "no json"; }, "poster");
  CHECK(run.outline_degraded);
  CHECK(run.outline->user_request == load_instance("poster").query);
  CHECK(run.aborted_at == std::optional<std::string>("recruitment"));
  CHECK_FALSE(run.delivery);
  CHECK(run.format_failures.size() == 2);
  CHECK(run.error_histogram()[ErrorClass::Format] == 2);
  CHECK_FALSE(run.final_raster);
}

TEST_CASE("transport errors are not format failures") {
  const PipelineRun run = run_with(
      [](const ChatRequest&) -> std::string { throw ChatError("connection refused"); }, "poster");
  CHECK(run.format_failures.empty());
  CHECK(run.client_errors.size() == 2);
  CHECK(run.aborted_at == std::optional<std::string>("recruitment"));
  CHECK(run.error_histogram().total() == 0);
  CHECK(run.transcripts[0].client_error);
}

TEST_CASE("retries re-ask after a malformed answer") {
  int outline_calls = 0;
  auto script = with_answer("postcard", "outline", [&](const ChatRequest&) {
    return ++outline_calls == 1 ? std::string("garbage") : read_json(source_fixtures() / "outlines" / "postcard.json").dump();
  });
  PipelineConfig config;
  config.retries = 1;
  const PipelineRun run = run_with(script, "postcard", config);
  CHECK(outline_calls == 2);
  CHECK_FALSE(run.outline_degraded);
  CHECK(run.format_failures.empty());
  CHECK(count_stage(run, "outline") == 2);
}

TEST_CASE("recruitment drops unknown and repeated experts") {
  auto script = with_answer("postcard", "recruitment", [](const ChatRequest&) {
    return R"([{"expert": "Vector Graphic Editor", "task": "edit"}, {"expert": "Text Editor", "task": "type"},
               {"expert": "Vector Graphic Editor", "task": "again"}, {"expert": "Layout Designer", "task": "lay out"}])";
  });
  const PipelineRun run = run_with(script, "postcard");
  REQUIRE(run.recruitment);
  REQUIRE(run.recruitment->size() == 2);
  CHECK(run.recruitment->at(0).expert == ExpertId::VectorGraphicEditor);
  CHECK(run.recruitment->at(1).expert == ExpertId::LayoutDesigner);
  CHECK(run.expert_plans.size() == 2);
  CHECK(count_stage(run, "expert_plan") == 2);
  CHECK(run.warnings.size() == 2);

  auto none = with_answer("postcard", "recruitment", [](const ChatRequest&) { return R"([{"expert": "Text Editor", "task": "t"}])"; });
  const PipelineRun aborted = run_with(none, "postcard");
  CHECK(aborted.aborted_at == std::optional<std::string>("recruitment"));
  CHECK(aborted.expert_plans.empty());
}

TEST_CASE("dead loops block delivery") {
  Workflow w;
  for (int i = 1; i <= 3; ++i) w.steps.push_back({i, "Photo Editor", "Adjust the photo", {}, {}});
  CHECK(has_dead_loop(w, 10));
  w.steps[1].description = "Crop";
  CHECK_FALSE(has_dead_loop(w, 10));
  Workflow long_plan;
  for (int i = 1; i <= 31; ++i) long_plan.steps.push_back({i, "Photo Editor", "step " + std::to_string(i), {}, {}});
  CHECK(has_dead_loop(long_plan, 10));
  CHECK_FALSE(has_dead_loop(long_plan, 20));

  auto looping = with_answer("postcard", "supervision", [](const ChatRequest&) {
    json arr = json::array();
    for (int i = 1; i <= 4; ++i) arr.push_back({{"id", i}, {"expert", "Layout Designer"}, {"description", "Add text"}});
    return arr.dump();
  });
  const PipelineRun run = run_with(looping, "postcard");
  CHECK_FALSE(run.delivery);
  CHECK(run.delivery_failure == std::optional<std::string>("dead loop in supervised plan"));
}

TEST_CASE("retrieval renumbers steps and scopes catalogs per expert") {
  auto script = with_answer("postcard", "retrieval", [](const ChatRequest& r) {
    const std::string& p = r.messages[0].content;
    const bool layout = p.find("You are a proficient Layout Designer.") != std::string::npos;
    json arr = json::array();
    arr.push_back({{"id", 40}, {"expert", layout ? "Layout Designer" : "Vector Graphic Editor"}, {"description", "d"},
                   {"action", "CreateDocument"}, {"parameters", {{"docType", "postcard"}}}});
    return arr.dump();
  });
  std::vector<std::string> prompts;
  ScriptedClient spy([&](const ChatRequest& r) {
    if (identify_prompt(r.messages[0].content) == std::optional<std::string_view>("retrieval"))
      prompts.push_back(r.messages[0].content);
    return script(r);
  });
  const PipelineRun run = Pipeline(spy, builtin_registry()).run(load_instance("postcard"));
  REQUIRE(run.retrieved);
  REQUIRE(run.retrieved->steps.size() == 2);
  CHECK(run.retrieved->steps[0].id == 1);
  CHECK(run.retrieved->steps[1].id == 2);
  REQUIRE(prompts.size() == 2);
  CHECK(prompts[0].find("DrawCircle") != std::string::npos);
  CHECK(prompts[0].find("GenerateQRObject") == std::string::npos);
  CHECK(prompts[1].find("GenerateQRObject") != std::string::npos);
  CHECK(prompts[1].find("DrawCircle") == std::string::npos);
}

TEST_CASE("segments with unknown experts are carried over without actions") {
  auto script = with_answer("postcard", "supervision", [](const ChatRequest&) {
    return R"([{"id": 1, "expert": "Vector Graphic Editor", "description": "Create a postcard document."},
               {"id": 2, "expert": "Text Editor", "description": "Write the greeting."}])";
  });
  const PipelineRun run = run_with(script, "postcard");
  REQUIRE(run.retrieved);
  REQUIRE(run.retrieved->steps.size() >= 2);
  const auto& last = run.retrieved->steps.back();
  CHECK(last.expert == "Text Editor");
  CHECK_FALSE(last.action);
  CHECK(run.error_histogram()[ErrorClass::InvalidExpert] == 1);
  CHECK(count_stage(run, "retrieval") == 1);
}

TEST_CASE("expert segments") {
  const auto segs = expert_segments(load_plan("book_cover"));
  REQUIRE(segs.size() == 2);
  CHECK(segs[0].steps.size() == 10);
  CHECK(segs[1].steps.size() == 22);
}

TEST_CASE("run directories round trip") {
  const PipelineRun run = run_with(reference_script("postcard"), "postcard");
  const fs::path dir = build_fixtures() / "tmp" / "pipeline_run";
  fs::remove_all(dir);
  write_run_dir(run, dir);
  CHECK(fs::exists(dir / "final.png"));
  CHECK(read_png(dir / "final.png") == *run.final_raster);
  const PipelineRun back = read_run_dir(dir, assets_dir());
  CHECK(to_json(back) == to_json(run));
  int lines = 0;
  std::istringstream in(read_text(dir / "transcripts.jsonl"));
  for (std::string line; std::getline(in, line);) ++lines;
  CHECK(lines == static_cast<int>(run.transcripts.size()));
}

TEST_CASE("cassette replay is byte-identical") {
  Cassette cassette(cassette_path());
  REQUIRE(cassette.size() > 0);
  std::vector<std::string> outs;
  for (int i = 0; i < 2; ++i) {
    CassetteClient replay(cassette);
    const PipelineRun run = Pipeline(replay, builtin_registry()).run(load_instance("book_cover"));
    CHECK(run.client_errors.empty());
    REQUIRE(run.final_raster);
    const auto png = encode_png(*run.final_raster);
    outs.push_back(to_json(run).dump() + std::string(png.begin(), png.end()));
  }
  CHECK(outs[0] == outs[1]);
}
