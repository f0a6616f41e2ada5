#include "graphictown/cli.hpp"

#include <glob.h>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "graphictown/chat.hpp"
#include "graphictown/eval.hpp"
#include "graphictown/metrics.hpp"
#include "graphictown/pipeline.hpp"
#include "graphictown/validator.hpp"
#include "http_util.hpp"

namespace gtown {

namespace fs = std::filesystem;

void apply_config_json(CliConfig& c, const json& doc) {
  if (!doc.is_object()) throw std::runtime_error("config must be a JSON object");
  static const std::set<std::string> known = {
      "assets",  "out",     "endpoint",  "api_key",  "model", "temperature", "retries", "workers", "sidecar",
      "cassette", "alias_export_document", "execute_undelivered", "judge", "judge_model", "creativity_with_image",
      "generate_questions"};
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (!known.count(it.key())) throw std::runtime_error("unknown config key \"" + it.key() + "\"");
  try {
    if (doc.contains("assets")) c.assets = fs::path(doc["assets"].get<std::string>());
    if (doc.contains("out")) c.out = fs::path(doc["out"].get<std::string>());
    if (doc.contains("endpoint")) c.endpoint = doc["endpoint"].get<std::string>();
    if (doc.contains("api_key")) c.api_key = doc["api_key"].get<std::string>();
    if (doc.contains("model")) c.model = doc["model"].get<std::string>();
    if (doc.contains("temperature")) c.temperature = doc["temperature"].get<double>();
    if (doc.contains("retries")) c.retries = doc["retries"].get<int>();
    if (doc.contains("workers")) c.workers = doc["workers"].get<int>();
    if (doc.contains("sidecar")) c.sidecar = doc["sidecar"].get<std::string>();
    if (doc.contains("cassette")) c.cassette = doc["cassette"].get<std::string>();
    if (doc.contains("alias_export_document")) c.alias_export_document = doc["alias_export_document"].get<bool>();
    if (doc.contains("execute_undelivered")) c.execute_undelivered = doc["execute_undelivered"].get<bool>();
    if (doc.contains("judge")) c.judge = doc["judge"].get<bool>();
    if (doc.contains("judge_model")) c.judge_model = doc["judge_model"].get<std::string>();
    if (doc.contains("creativity_with_image")) c.creativity_with_image = doc["creativity_with_image"].get<bool>();
    if (doc.contains("generate_questions")) c.generate_questions = doc["generate_questions"].get<bool>();
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("config: ") + e.what());
  }
}

void apply_env(CliConfig& c) {
  if (const char* v = std::getenv("GRAPHICTOWN_ENDPOINT"); v && *v) c.endpoint = v;
  if (const char* v = std::getenv("GRAPHICTOWN_API_KEY"); v && *v) c.api_key = v;
}

std::vector<std::string> expand_globs(const std::vector<std::string>& patterns) {
  std::vector<std::string> out;
  for (const auto& p : patterns) {
    if (p.find_first_of("*?[") == std::string::npos) {
      out.push_back(p);
      continue;
    }
    glob_t g{};
    if (::glob(p.c_str(), 0, nullptr, &g) == 0) {
      for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
    } else {
      out.push_back(p);
    }
    globfree(&g);
  }
  return out;
}

namespace {

std::optional<std::string> read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Runs `task(i)` for i in [0, n) on up to `workers` threads.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& task) {
  std::atomic<std::size_t> next{0};
  auto loop = [&] {
    for (std::size_t i = next++; i < n; i = next++) task(i);
  };
  std::vector<std::thread> pool;
  const std::size_t count = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
  for (std::size_t k = 1; k < count; ++k) pool.emplace_back(loop);
  loop();
  for (auto& t : pool) t.join();
}

struct ClientStack {
  std::unique_ptr<Cassette> cassette;
  std::unique_ptr<HttpChatClient> http;
  std::unique_ptr<CassetteClient> replay;
  ChatClient* client = nullptr;

  void save() {
    if (cassette && http) cassette->save();
  }
};

/// Cassette (optionally recording through the endpoint) or a bare endpoint.
std::optional<ClientStack> make_clients(const CliConfig& c, std::ostream& err) {
  ClientStack s;
  if (!c.endpoint.empty()) {
    try {
      split_url(c.endpoint, "/chat/completions");
    } catch (const std::exception& e) {
      err << "error: bad endpoint: " << e.what() << "\n";
      return std::nullopt;
    }
    s.http = std::make_unique<HttpChatClient>(HttpClientOptions{c.endpoint, c.api_key, 120});
  }
  if (!c.cassette.empty()) {
    try {
      s.cassette = std::make_unique<Cassette>(c.cassette);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return std::nullopt;
    }
    s.replay = std::make_unique<CassetteClient>(*s.cassette, s.http.get());
    s.client = s.replay.get();
  } else if (s.http) {
    s.client = s.http.get();
  } else {
    err << "error: no chat endpoint or cassette configured\n";
    return std::nullopt;
  }
  return s;
}

std::optional<DesignInstance> load_instance(const fs::path& file, const CliConfig& c, std::ostream& err) {
  auto bytes = read_file(file);
  if (!bytes) {
    err << file.string() << ": cannot read file\n";
    return std::nullopt;
  }
  try {
    fs::path root = c.assets ? *c.assets : file.parent_path();
    return parse_instance(*bytes, root);
  } catch (const IngestError& e) {
    err << file.string() << ": " << e.field() << ": " << e.what() << "\n";
    return std::nullopt;
  }
}

std::string percent(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(1);
  os << v << "%";
  return os.str();
}

int cmd_run(const CliConfig& c, const std::vector<std::string>& patterns, std::ostream& out, std::ostream& err) {
  if (c.workers < 1) {
    err << "error: workers must be >= 1\n";
    return kExitHarnessFault;
  }
  bool fault = false;
  std::vector<DesignInstance> instances;
  std::set<std::string> ids;
  const auto files = expand_globs(patterns);
  if (files.empty()) {
    err << "error: no instance files given\n";
    return kExitHarnessFault;
  }
  for (const auto& f : files) {
    auto inst = load_instance(f, c, err);
    if (!inst) {
      fault = true;
      continue;
    }
    if (!ids.insert(inst->id).second) {
      err << f << ": duplicate instance id \"" << inst->id << "\"\n";
      fault = true;
      continue;
    }
    instances.push_back(std::move(*inst));
  }
  auto clients = make_clients(c, err);
  if (!clients) return kExitHarnessFault;

  PipelineConfig pc;
  pc.model = c.model;
  pc.temperature = c.temperature;
  pc.retries = c.retries;
  pc.execute_undelivered = c.execute_undelivered;
  pc.engine.alias_export_document = c.alias_export_document;
  const Registry& registry = builtin_registry();

  std::vector<std::string> lines(instances.size());
  std::vector<char> failed(instances.size(), 0);
  std::mutex err_mutex;
  parallel_for(instances.size(), c.workers, [&](std::size_t i) {
    const DesignInstance& inst = instances[i];
    try {
      Pipeline pipeline(*clients->client, registry, pc);
      PipelineRun run = pipeline.run(inst);
      write_run_dir(run, c.out.value_or("runs") / inst.id);
      std::ostringstream os;
      os << inst.id << ": delivery=" << (run.delivery ? "yes" : "no");
      if (run.delivery_failure) os << " (" << *run.delivery_failure << ")";
      os << " supervised=" << (run.supervised ? run.supervised->steps.size() : 0)
         << " retrieved=" << (run.retrieved ? run.retrieved->steps.size() : 0);
      if (!run.exec.empty()) os << " success=" << percent(success_rate(run.exec));
      os << " final=" << (run.final_design ? "yes" : "no");
      if (!run.client_errors.empty()) os << " client_errors=" << run.client_errors.size();
      lines[i] = os.str();
    } catch (const std::exception& e) {
      std::lock_guard lock(err_mutex);
      err << inst.id << ": harness fault: " << e.what() << "\n";
      failed[i] = 1;
    }
  });
  try {
    clients->save();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    fault = true;
  }
  int degraded = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (failed[i]) {
      fault = true;
      continue;
    }
    out << lines[i] << "\n";
    if (lines[i].find("delivery=no") != std::string::npos) ++degraded;
  }
  out << instances.size() << " run(s), " << degraded << " without delivery, output in " << c.out.value_or("runs").string() << "\n";
  return fault ? kExitHarnessFault : kExitOk;
}

struct LoadedWorkflow {
  std::optional<Workflow> workflow;
  std::optional<FormatFailure> failure;
};

std::optional<LoadedWorkflow> load_workflow(const fs::path& file, std::ostream& err) {
  auto bytes = read_file(file);
  if (!bytes) {
    err << file.string() << ": cannot read file\n";
    return std::nullopt;
  }
  auto parsed = parse_workflow(*bytes, Stage::Retrieved);
  if (parsed) return LoadedWorkflow{std::move(parsed).value(), std::nullopt};
  return LoadedWorkflow{std::nullopt, parsed.error()};
}

void print_report(const ValidationReport& report, bool as_json, std::ostream& out) {
  if (as_json) {
    out << to_json(report).dump(2) << "\n";
    return;
  }
  for (const auto& e : report.errors) {
    out << (e.step_id ? "step " + std::to_string(*e.step_id) : std::string("workflow")) << ": "
        << error_class_name(e.cls);
    if (e.dependency_kind) out << " (" << dependency_kind_name(*e.dependency_kind) << ")";
    out << ": " << e.message << "\n";
  }
  for (const auto& l : report.lints)
    out << "lint " << lint_kind_name(l.kind) << (l.step_id ? " step " + std::to_string(*l.step_id) : "") << ": "
        << l.message << "\n";
  out << report.errors.size() << " error(s), " << report.lints.size() << " lint(s)\n";
}

int cmd_validate(const CliConfig& c, const std::string& workflow_file, const std::string& instance_file, bool as_json,
                 std::ostream& out, std::ostream& err) {
  DesignInstance instance;
  if (!instance_file.empty()) {
    auto inst = load_instance(instance_file, c, err);
    if (!inst) return kExitHarnessFault;
    instance = std::move(*inst);
  }
  auto wf = load_workflow(workflow_file, err);
  if (!wf) return kExitHarnessFault;
  ValidationReport report = wf->failure ? format_failure_report(*wf->failure)
                                        : validate(*wf->workflow, builtin_registry(), instance,
                                                   {c.alias_export_document});
  print_report(report, as_json, out);
  return report.ok() ? kExitOk : kExitSubjectFailure;
}

int cmd_execute(const CliConfig& c, const std::string& workflow_file, const std::string& instance_file,
                std::ostream& out, std::ostream& err) {
  auto inst = load_instance(instance_file, c, err);
  if (!inst) return kExitHarnessFault;
  auto wf = load_workflow(workflow_file, err);
  if (!wf) return kExitHarnessFault;
  if (wf->failure) {
    print_report(format_failure_report(*wf->failure), false, out);
    return kExitSubjectFailure;
  }
  RunResult result = run_workflow(*wf->workflow, *inst, builtin_registry(), {c.alias_export_document});
  const fs::path dir = c.out.value_or("out");
  try {
    fs::create_directories(dir);
    std::ofstream exec(dir / "exec.jsonl", std::ios::binary | std::ios::trunc);
    for (const auto& r : result.records) exec << to_json(r).dump() << "\n";
    const auto png = dir / "final.png";
    if (result.final_design)
      write_png(png, *result.final_design);
    else
      fs::remove(png);
    fs::remove_all(dir / "files");
    if (result.fs.size()) result.fs.spill(dir / "files");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitHarnessFault;
  }
  std::size_t ok = 0;
  for (const auto& r : result.records) {
    if (r.status == ExecStatus::Ok) {
      ++ok;
      continue;
    }
    out << "step " << r.step_id << ": " << exec_status_name(r.status);
    if (r.error) {
      out << " " << error_class_name(r.error->cls);
      if (r.error->dependency_kind) out << " (" << dependency_kind_name(*r.error->dependency_kind) << ")";
      out << ": " << r.error->message;
    }
    out << "\n";
  }
  for (const auto& n : result.notices) out << "notice: " << n << "\n";
  out << ok << "/" << result.records.size() << " steps Ok";
  if (result.final_design)
    out << ", final " << result.final_design->width() << "x" << result.final_design->height() << " -> "
        << (dir / "final.png").string();
  out << "\n";
  const bool all_ok = !result.records.empty() && ok == result.records.size();
  return all_ok ? kExitOk : kExitSubjectFailure;
}

int cmd_evaluate(const CliConfig& c, const std::vector<std::string>& patterns, std::ostream& out, std::ostream& err) {
  bool fault = false;
  const fs::path assets = c.assets ? *c.assets : fs::current_path();
  std::vector<PipelineRun> runs;
  std::vector<fs::path> dirs;
  for (const auto& d : expand_globs(patterns)) {
    try {
      runs.push_back(read_run_dir(d, assets));
      dirs.emplace_back(d);
    } catch (const std::exception& e) {
      err << d << ": " << e.what() << "\n";
      fault = true;
    }
  }
  if (runs.empty()) {
    err << "error: no readable run directories\n";
    return kExitHarnessFault;
  }
  EvalOptions opts;
  std::optional<ClientStack> judge;
  if (c.judge) {
    judge = make_clients(c, err);
    if (!judge) return kExitHarnessFault;
    opts.judge = judge->client;
    opts.judge_model = c.judge_model.empty() ? c.model : c.judge_model;
  }
  std::optional<SidecarClient> sidecar;
  if (!c.sidecar.empty()) {
    sidecar.emplace(c.sidecar);
    if (sidecar->healthy()) {
      opts.sidecar = &*sidecar;
    } else {
      err << "warning: scoring service at " << c.sidecar << " is not ready; content similarity and VQA omitted\n";
    }
  }
  opts.creativity_with_image = c.creativity_with_image;
  opts.generate_questions = c.generate_questions;

  std::vector<RunScores> scores(runs.size());
  parallel_for(runs.size(), c.workers, [&](std::size_t i) { scores[i] = score_run(runs[i], opts); });
  try {
    for (std::size_t i = 0; i < runs.size(); ++i) {
      std::ofstream f(dirs[i] / "scores.json", std::ios::binary | std::ios::trunc);
      f << to_json(scores[i]).dump(2) << "\n";
    }
    auto rows = aggregate(scores);
    write_report(c.out.value_or("report"), rows);
    if (judge) judge->save();
    out << report_markdown(rows);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitHarnessFault;
  }
  return fault ? kExitHarnessFault : kExitOk;
}

int cmd_catalog(const std::string& expert, bool as_json, std::ostream& out, std::ostream& err) {
  const Registry& reg = builtin_registry();
  if (as_json) {
    out << registry_to_json(reg).dump(2) << "\n";
    return kExitOk;
  }
  std::vector<ExpertId> experts;
  if (!expert.empty()) {
    auto e = parse_expert(expert);
    if (!e) {
      err << "error: unknown expert \"" << expert << "\"\n";
      return kExitHarnessFault;
    }
    experts.push_back(*e);
  } else {
    experts = {ExpertId::PhotoEditor, ExpertId::VectorGraphicEditor, ExpertId::LayoutDesigner};
  }
  for (auto e : experts) out << "## " << expert_name(e) << "\n" << render_action_catalog(reg, e) << "\n";
  return kExitOk;
}

int cmd_ingest(const CliConfig& c, const std::vector<std::string>& patterns, bool write, std::ostream& out,
               std::ostream& err) {
  bool bad = false;
  for (const auto& f : expand_globs(patterns)) {
    auto inst = load_instance(f, c, err);
    if (!inst) {
      bad = true;
      continue;
    }
    std::size_t missing = 0;
    for (const auto& img : inst->images)
      if (!fs::exists(img.resolved)) {
        err << f << ": image " << img.path << " not found at " << img.resolved.string() << "\n";
        ++missing;
      }
    if (missing) bad = true;
    out << inst->id << ": " << design_type_name(inst->design_type) << ", " << inst->images.size() << " image(s)"
        << (missing ? ", " + std::to_string(missing) + " missing" : "") << ", "
        << (inst->questions ? inst->questions->size() : 0) << " question(s)\n";
    if (write) {
      const fs::path dir = c.out.value_or("instances");
      fs::create_directories(dir);
      std::ofstream(dir / (inst->id + ".json"), std::ios::binary) << instance_to_json(*inst).dump(2) << "\n";
    }
  }
  return bad ? kExitSubjectFailure : kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"GraphicTown: multi-agent graphic design planning, execution and evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "0.1.0");

  std::string config_file;
  std::optional<std::string> assets, out_dir, endpoint, model, sidecar, cassette;
  std::optional<int> workers, retries;
  std::optional<double> temperature;
  bool alias = false, judge = false, no_execute_undelivered = false, as_json = false, write = false;
  std::vector<std::string> positional;
  std::string workflow_file, instance_file, expert;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_file, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--assets", assets, "Root for instance image paths");
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_flag("--alias-export-document", alias, "Accept ExportDocument as SaveDocument");
  };
  auto model_opts = [&](CLI::App* sub) {
    sub->add_option("--endpoint", endpoint, "OpenAI-compatible chat endpoint base URL");
    sub->add_option("--model", model, "Model id");
    sub->add_option("--temperature", temperature, "Sampling temperature");
    sub->add_option("--cassette", cassette, "Replay cassette (records through --endpoint when given)");
    sub->add_option("--workers", workers, "Concurrent runs")->check(CLI::PositiveNumber);
  };

  auto* run = app.add_subcommand("run", "Run the agent pipeline on instance files");
  common(run);
  model_opts(run);
  run->add_option("--retries", retries, "Re-asks after a malformed answer");
  run->add_flag("--no-execute-undelivered", no_execute_undelivered, "Skip retrieval/execution when delivery fails");
  run->add_option("instances", positional, "Instance files or globs")->required();

  auto* val = app.add_subcommand("validate", "Statically validate a retrieved workflow file");
  common(val);
  val->add_option("workflow", workflow_file, "Workflow JSON")->required();
  val->add_option("instance", instance_file, "Instance JSON");
  val->add_flag("--json", as_json, "Print the report as JSON");

  auto* exe = app.add_subcommand("execute", "Execute a workflow file and write final.png");
  common(exe);
  exe->add_option("workflow", workflow_file, "Workflow JSON")->required();
  exe->add_option("instance", instance_file, "Instance JSON")->required();

  auto* ev = app.add_subcommand("evaluate", "Score run directories and write an aggregate report");
  common(ev);
  model_opts(ev);
  ev->add_option("--sidecar", sidecar, "Scoring service base URL");
  ev->add_flag("--judge", judge, "Use the chat model as judge (design pass, creativity)");
  ev->add_option("runs", positional, "Run directories or globs")->required();

  auto* cat = app.add_subcommand("catalog", "Print the action catalog");
  cat->add_option("--expert", expert, "Only this expert's actions");
  cat->add_flag("--json", as_json, "Full registry as JSON");

  auto* ing = app.add_subcommand("ingest", "Check instance files and their images");
  common(ing);
  ing->add_flag("--write", write, "Write normalized instances into --out");
  ing->add_option("instances", positional, "Instance files or globs")->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitHarnessFault;
  }

  CliConfig c;
  try {
    if (!config_file.empty()) {
      auto text = read_file(config_file);
      json doc = json::parse(text.value_or(""), nullptr, false);
      if (doc.is_discarded()) throw std::runtime_error(config_file + " is not valid JSON");
      apply_config_json(c, doc);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitHarnessFault;
  }
  apply_env(c);
  if (assets) c.assets = fs::path(*assets);
  if (out_dir) c.out = fs::path(*out_dir);
  if (endpoint) c.endpoint = *endpoint;
  if (model) c.model = *model;
  if (temperature) c.temperature = *temperature;
  if (retries) c.retries = *retries;
  if (workers) c.workers = *workers;
  if (sidecar) c.sidecar = *sidecar;
  if (cassette) c.cassette = *cassette;
  if (alias) c.alias_export_document = true;
  if (judge) c.judge = true;
  if (no_execute_undelivered) c.execute_undelivered = false;
  if (c.retries < 0) {
    err << "error: retries must be >= 0\n";
    return kExitHarnessFault;
  }

  try {
    if (run->parsed()) return cmd_run(c, positional, out, err);
    if (val->parsed()) return cmd_validate(c, workflow_file, instance_file, as_json, out, err);
    if (exe->parsed()) return cmd_execute(c, workflow_file, instance_file, out, err);
    if (ev->parsed()) return cmd_evaluate(c, positional, out, err);
    if (cat->parsed()) return cmd_catalog(expert, as_json, out, err);
    if (ing->parsed()) return cmd_ingest(c, positional, write, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitHarnessFault;
  }
  return kExitHarnessFault;
}

}  // namespace gtown
