#include "graphictown/pipeline.hpp"

#include <fstream>
#include <sstream>

#include "graphictown/prompts.hpp"
#include "graphictown/raster.hpp"

namespace gtown {

std::string image_file_lines(const DesignInstance& instance) {
  std::string out;
  for (std::size_t i = 0; i < instance.images.size(); ++i) {
    if (i) out += "\n";
    out += instance.images[i].path + " (" + instance.images[i].caption + ")";
  }
  return out.empty() ? "none" : out;
}

DesignOutline degraded_outline(const DesignInstance& instance) {
  DesignOutline o;
  o.user_request = instance.query;
  std::string paths;
  for (const auto& img : instance.images) paths += (paths.empty() ? "" : ", ") + img.path;
  o.image.content = paths;
  return o;
}

bool has_dead_loop(const Workflow& workflow, int step_limit) {
  if (static_cast<long>(workflow.steps.size()) > 3L * step_limit) return true;
  int run = 1;
  for (std::size_t i = 1; i < workflow.steps.size(); ++i) {
    const auto& a = workflow.steps[i - 1];
    const auto& b = workflow.steps[i];
    run = (a.expert == b.expert && a.description == b.description) ? run + 1 : 1;
    if (run >= 3) return true;
  }
  return false;
}

std::vector<Workflow> expert_segments(const Workflow& workflow) {
  std::vector<Workflow> out;
  for (const auto& step : workflow.steps) {
    if (out.empty() || out.back().steps.back().expert != step.expert) out.push_back({workflow.stage, {}});
    out.back().steps.push_back(step);
  }
  return out;
}

ErrorHistogram PipelineRun::error_histogram() const {
  ErrorHistogram h;
  h[ErrorClass::Format] += static_cast<int>(format_failures.size());
  if (validation)
    for (const auto& e : validation->errors) ++h[e.cls];
  return h;
}

Pipeline::Pipeline(ChatClient& client, const Registry& registry, PipelineConfig config)
    : client_(client), registry_(registry), config_(std::move(config)) {}

template <class T>
Expected<T, FormatFailure> Pipeline::ask(PipelineRun& run, const std::string& stage, const std::string& prompt,
                                         const std::function<Expected<T, FormatFailure>(std::string_view)>& parse) {
  FormatFailure last{std::nullopt, "no answer"};
  for (int attempt = 0; attempt <= config_.retries; ++attempt) {
    Transcript t{stage, prompt, "", std::nullopt};
    try {
      t.response = client_.complete(make_request(config_.model, prompt, config_.temperature)).content;
    } catch (const ChatError& e) {
      t.client_error = e.what();
      run.client_errors.push_back(stage + ": " + e.what());
      run.transcripts.push_back(std::move(t));
      return FormatFailure{std::nullopt, std::string("client error: ") + e.what()};
    }
    run.transcripts.push_back(t);
    auto parsed = parse(t.response);
    if (parsed) return parsed;
    last = parsed.error();
  }
  run.format_failures.push_back({stage, last});
  return last;
}

DesignOutline Pipeline::step1_outline(PipelineRun& run) {
  const std::string prompt = render_prompt(
      "outline", {{"user request", run.instance.query}, {"user image files", image_file_lines(run.instance)}});
  std::function<Expected<DesignOutline, FormatFailure>(std::string_view)> parse = parse_outline;
  auto got = ask(run, "outline", prompt, parse);
  if (got) {
    run.outline = *got;
  } else {
    run.outline = degraded_outline(run.instance);
    run.outline_degraded = true;
    run.warnings.push_back("outline degraded to the raw query: " + got.error().reason);
  }
  return *run.outline;
}

std::optional<std::vector<RecruitmentEntry>> Pipeline::step2_recruit(PipelineRun& run) {
  const std::string prompt = render_prompt(
      "recruitment", {{"user request", run.instance.query}, {"user image files", image_file_lines(run.instance)}});
  std::function<Expected<RecruitmentParse, FormatFailure>(std::string_view)> parse = parse_recruitment;
  auto got = ask(run, "recruitment", prompt, parse);
  if (!got) return std::nullopt;
  for (auto& w : got->warnings) run.warnings.push_back("recruitment: " + w);
  run.recruitment = got->entries;
  return got->entries;
}

Workflow Pipeline::step3_expert_plan(PipelineRun& run, const DesignOutline& outline, const RecruitmentEntry& entry) {
  const std::string name(expert_name(entry.expert));
  const std::string prompt = render_prompt(
      "expert_plan", {{"expert", name}, {"design outline", outline_to_json(outline).dump(4)}, {"task", entry.task}});
  std::function<Expected<Workflow, FormatFailure>(std::string_view)> parse = [](std::string_view text) {
    return parse_workflow_output(text, Stage::ExpertPlan);
  };
  auto got = ask(run, "expert_plan:" + name, prompt, parse);
  return got ? *got : Workflow{Stage::ExpertPlan, {}};
}

std::optional<Workflow> Pipeline::step4_supervise(PipelineRun& run) {
  std::string plans;
  for (const auto& p : run.expert_plans) {
    if (p.plan.steps.empty()) continue;
    if (!plans.empty()) plans += "\n";
    plans += serialize_workflow(p.plan);
  }
  if (plans.empty()) {
    run.aborted_at = "supervision";
    run.delivery_failure = "no expert produced a plan";
    return std::nullopt;
  }
  const std::string prompt = render_prompt(
      "supervision",
      {{"recruitment status", recruitment_to_json(*run.recruitment).dump(4)}, {"workflow plans", plans}});
  std::function<Expected<Workflow, FormatFailure>(std::string_view)> parse = [](std::string_view text) {
    return parse_workflow_output(text, Stage::Supervised);
  };
  auto got = ask(run, "supervision", prompt, parse);
  if (!got) {
    run.aborted_at = "supervision";
    run.delivery_failure = "supervised plan did not parse";
    return std::nullopt;
  }
  run.supervised = *got;
  run.difficulty = difficulty_of(*run.recruitment);
  const auto n = static_cast<int>(got->steps.size());
  if (n == 0) {
    run.delivery_failure = "supervised plan is empty";
  } else if (has_dead_loop(*got, run.difficulty->step_limit)) {
    run.delivery_failure = "dead loop in supervised plan";
  } else if (n > run.difficulty->step_limit) {
    run.delivery_failure = std::to_string(n) + " steps exceed the " + std::string(tier_name(run.difficulty->tier)) +
                           " limit of " + std::to_string(run.difficulty->step_limit);
  }
  run.delivery = !run.delivery_failure.has_value();
  return got.value();
}

Workflow Pipeline::step5_retrieve(PipelineRun& run, const Workflow& supervised) {
  Workflow out{Stage::Retrieved, {}};
  const auto segments = expert_segments(supervised);
  for (std::size_t k = 0; k < segments.size(); ++k) {
    const Workflow& seg = segments[k];
    auto carry_over = [&] {
      for (auto step : seg.steps) {
        step.action.reset();
        step.parameters.reset();
        out.steps.push_back(std::move(step));
      }
    };
    auto expert = parse_expert(seg.steps.front().expert);
    if (!expert) {
      run.warnings.push_back("retrieval: segment " + std::to_string(k + 1) + " has unknown expert \"" +
                             seg.steps.front().expert + "\"; steps carried over without actions");
      carry_over();
      continue;
    }
    const std::string name(expert_name(*expert));
    const std::string prompt =
        render_prompt("retrieval", {{"expert", name},
                                    {"workflow plan", serialize_workflow(seg)},
                                    {"list of actions", render_action_catalog(registry_, *expert)}});
    std::function<Expected<Workflow, FormatFailure>(std::string_view)> parse = [](std::string_view text) {
      return parse_workflow_output(text, Stage::Retrieved);
    };
    auto got = ask(run, "retrieval[" + std::to_string(k + 1) + "]:" + name, prompt, parse);
    if (!got) {
      carry_over();
      continue;
    }
    for (auto& step : got->steps) out.steps.push_back(std::move(step));
  }
  for (std::size_t i = 0; i < out.steps.size(); ++i) out.steps[i].id = static_cast<int>(i + 1);
  return out;
}

void Pipeline::step6_execute(PipelineRun& run) {
  RunResult result = run_workflow(*run.retrieved, run.instance, registry_, config_.engine);
  run.exec = std::move(result.records);
  run.notices = std::move(result.notices);
  if (result.final_design) {
    run.final_raster = std::move(result.final_design);
    run.final_design = "final.png";
  }
}

PipelineRun Pipeline::run(const DesignInstance& instance) {
  PipelineRun run;
  run.instance_id = instance.id;
  run.model = config_.model;
  run.instance = instance;

  const DesignOutline outline = step1_outline(run);
  auto recruitment = step2_recruit(run);
  if (!recruitment || recruitment->empty()) {
    run.aborted_at = "recruitment";
    run.delivery_failure = "no valid expert recruited";
    return run;
  }
  for (const auto& entry : *recruitment) run.expert_plans.push_back({entry.expert, step3_expert_plan(run, outline, entry)});
  auto supervised = step4_supervise(run);
  if (!supervised) return run;
  if (!run.delivery && !config_.execute_undelivered) return run;
  run.retrieved = step5_retrieve(run, *supervised);
  run.validation = validate(*run.retrieved, registry_, run.instance, {config_.engine.alias_export_document});
  step6_execute(run);
  return run;
}

namespace {

json opt_workflow(const std::optional<Workflow>& w) { return w ? workflow_to_json(*w) : json(); }

template <class T, class E>
T must(Expected<T, E> got, const char* what) {
  if (!got) throw std::runtime_error(std::string("run.json: bad ") + what + ": " + got.error().reason);
  return std::move(got).value();
}

std::optional<Workflow> read_workflow(const json& j, const char* key, Stage stage) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return must(parse_workflow(j[key].dump(), stage), key);
}

}  // namespace

json to_json(const PipelineRun& run) {
  json plans = json::array();
  for (const auto& p : run.expert_plans)
    plans.push_back({{"expert", expert_name(p.expert)}, {"plan", workflow_to_json(p.plan)}});
  json failures = json::array();
  for (const auto& f : run.format_failures)
    failures.push_back({{"stage", f.stage},
                        {"index", f.failure.index ? json(*f.failure.index) : json()},
                        {"reason", f.failure.reason}});
  json exec = json::array();
  for (const auto& r : run.exec) exec.push_back(to_json(r));
  auto opt_str = [](const std::optional<std::string>& s) { return s ? json(*s) : json(); };
  return {
      {"instance_id", run.instance_id},
      {"model", run.model},
      {"instance", instance_to_json(run.instance)},
      {"outline", run.outline ? outline_to_json(*run.outline) : json()},
      {"outline_degraded", run.outline_degraded},
      {"recruitment", run.recruitment ? recruitment_to_json(*run.recruitment) : json()},
      {"warnings", run.warnings},
      {"expert_plans", plans},
      {"supervised", opt_workflow(run.supervised)},
      {"difficulty", run.difficulty ? json{{"tier", tier_name(run.difficulty->tier)},
                                           {"step_limit", run.difficulty->step_limit}}
                                    : json()},
      {"delivery", run.delivery},
      {"delivery_failure", opt_str(run.delivery_failure)},
      {"retrieved", opt_workflow(run.retrieved)},
      {"validation", run.validation ? to_json(*run.validation) : json()},
      {"exec", exec},
      {"final_design", opt_str(run.final_design)},
      {"notices", run.notices},
      {"format_failures", failures},
      {"client_errors", run.client_errors},
      {"aborted_at", opt_str(run.aborted_at)},
      {"error_histogram", to_json(run.error_histogram())},
  };
}

PipelineRun pipeline_run_from_json(const json& j, const std::filesystem::path& assets_root) {
  PipelineRun run;
  run.instance_id = j.at("instance_id").get<std::string>();
  run.model = j.at("model").get<std::string>();
  run.instance = parse_instance(j.at("instance").dump(), assets_root);
  if (!j.at("outline").is_null()) run.outline = must(parse_outline(j["outline"].dump()), "outline");
  run.outline_degraded = j.value("outline_degraded", false);
  if (!j.at("recruitment").is_null())
    run.recruitment = must(parse_recruitment(j["recruitment"].dump()), "recruitment").entries;
  run.warnings = j.value("warnings", std::vector<std::string>{});
  for (const auto& p : j.at("expert_plans")) {
    auto expert = parse_expert(p.at("expert").get<std::string>());
    if (!expert) throw std::runtime_error("run.json: bad expert in expert_plans");
    run.expert_plans.push_back({*expert, must(parse_workflow(p.at("plan").dump(), Stage::ExpertPlan), "plan")});
  }
  run.supervised = read_workflow(j, "supervised", Stage::Supervised);
  if (j.contains("difficulty") && j["difficulty"].is_object()) {
    const std::string tier = j["difficulty"].at("tier").get<std::string>();
    run.difficulty = Difficulty{tier == "Easy" ? Tier::Easy : tier == "Medium" ? Tier::Medium : Tier::Hard,
                                j["difficulty"].at("step_limit").get<int>()};
  }
  run.delivery = j.at("delivery").get<bool>();
  if (j.at("delivery_failure").is_string()) run.delivery_failure = j["delivery_failure"].get<std::string>();
  run.retrieved = read_workflow(j, "retrieved", Stage::Retrieved);
  if (j.contains("validation") && j["validation"].is_object()) {
    ValidationReport report;
    for (const auto& e : j["validation"].at("errors")) report.errors.push_back(validation_error_from_json(e));
    run.validation = std::move(report);
  }
  for (const auto& r : j.at("exec")) run.exec.push_back(exec_record_from_json(r));
  if (j.at("final_design").is_string()) run.final_design = j["final_design"].get<std::string>();
  run.notices = j.value("notices", std::vector<std::string>{});
  for (const auto& f : j.at("format_failures")) {
    FormatFailure ff;
    if (f.at("index").is_number_unsigned()) ff.index = f["index"].get<std::size_t>();
    ff.reason = f.at("reason").get<std::string>();
    run.format_failures.push_back({f.at("stage").get<std::string>(), ff});
  }
  run.client_errors = j.value("client_errors", std::vector<std::string>{});
  if (j.at("aborted_at").is_string()) run.aborted_at = j["aborted_at"].get<std::string>();
  return run;
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

void write_run_dir(const PipelineRun& run, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text(dir / "run.json", to_json(run).dump(2) + "\n");
  std::string lines;
  for (const auto& t : run.transcripts) {
    json j = {{"stage", t.stage}, {"prompt", t.prompt}, {"response", t.response}};
    if (t.client_error) j["client_error"] = *t.client_error;
    lines += j.dump() + "\n";
  }
  write_text(dir / "transcripts.jsonl", lines);
  lines.clear();
  for (const auto& r : run.exec) lines += to_json(r).dump() + "\n";
  write_text(dir / "exec.jsonl", lines);
  const auto png = dir / "final.png";
  if (run.final_raster)
    write_png(png, *run.final_raster);
  else
    std::filesystem::remove(png);
}

PipelineRun read_run_dir(const std::filesystem::path& dir, const std::filesystem::path& assets_root) {
  std::ifstream in(dir / "run.json", std::ios::binary);
  if (!in) throw std::runtime_error("no run.json in " + dir.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw std::runtime_error(dir.string() + "/run.json is not valid JSON");
  PipelineRun run = pipeline_run_from_json(j, assets_root);
  std::ifstream tin(dir / "transcripts.jsonl", std::ios::binary);
  std::string line;
  while (std::getline(tin, line)) {
    if (line.empty()) continue;
    json t = json::parse(line);
    Transcript tr{t.at("stage").get<std::string>(), t.at("prompt").get<std::string>(),
                  t.at("response").get<std::string>(), std::nullopt};
    if (t.contains("client_error")) tr.client_error = t["client_error"].get<std::string>();
    run.transcripts.push_back(std::move(tr));
  }
  if (run.final_design && std::filesystem::exists(dir / *run.final_design))
    run.final_raster = read_png(dir / *run.final_design);
  return run;
}

}  // namespace gtown
