#include "graphictown/eval.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "graphictown/prompts.hpp"
#include "http_util.hpp"

namespace gtown {

SidecarClient::SidecarClient(std::string base_url, int timeout_seconds)
    : base_url_(std::move(base_url)), timeout_seconds_(timeout_seconds) {}

bool SidecarClient::healthy() const {
  try {
    return http_get(split_url(base_url_, "/health"), timeout_seconds_).status == 200;
  } catch (const std::exception&) {
    return false;
  }
}

namespace {

json sidecar_post(const std::string& base, const char* route, const json& body, int timeout) {
  HttpReply reply;
  try {
    reply = http_post_json(split_url(base, route), body.dump(), "", timeout);
  } catch (const std::exception& e) {
    throw SidecarError(std::string(route) + ": " + e.what());
  }
  if (reply.status != 200) throw SidecarError(std::string(route) + " returned HTTP " + std::to_string(reply.status));
  json doc = json::parse(reply.body, nullptr, false);
  if (!doc.is_object()) throw SidecarError(std::string(route) + " returned a non-object payload");
  return doc;
}

std::string as_bytes(const std::vector<std::uint8_t>& png) { return std::string(png.begin(), png.end()); }

}  // namespace

double SidecarClient::similarity(const std::string& query, const std::vector<std::uint8_t>& png) const {
  json doc = sidecar_post(base_url_, "/score/similarity", {{"query", query}, {"image", base64_encode(as_bytes(png))}},
                          timeout_seconds_);
  if (!doc.contains("score") || !doc["score"].is_number()) throw SidecarError("/score/similarity: missing score");
  return doc["score"].get<double>();
}

VqaAnswer SidecarClient::vqa(const std::string& question, const std::vector<std::uint8_t>& png) const {
  json doc = sidecar_post(base_url_, "/score/vqa", {{"question", question}, {"image", base64_encode(as_bytes(png))}},
                          timeout_seconds_);
  const std::string answer = doc.contains("answer") && doc["answer"].is_string() ? doc["answer"].get<std::string>() : "";
  if (answer != "yes" && answer != "no") throw SidecarError("/score/vqa: answer must be \"yes\" or \"no\"");
  VqaAnswer out{answer == "yes", std::nullopt};
  if (doc.contains("confidence") && doc["confidence"].is_number()) out.confidence = doc["confidence"].get<double>();
  return out;
}

std::optional<double> DesignPassScores::aggregate() const {
  if (!color || !text || !image) return std::nullopt;
  return design_pass_aggregate(*color, *text, *image);
}

namespace {

std::optional<int> judge_score(ChatClient& judge, const std::string& model, const std::string& prompt) {
  try {
    return parse_judge_score(judge.complete(make_request(model, prompt)).content);
  } catch (const ChatError&) {
    return std::nullopt;
  }
}

}  // namespace

DesignPassScores design_pass(ChatClient& judge, const std::string& model, const DesignOutline& outline,
                             const Workflow& supervised) {
  const std::string plan = serialize_workflow(supervised);
  const std::string text = json{{"content", outline.text.content},
                                {"position", outline.text.position},
                                {"color", outline.text.color},
                                {"size", outline.text.size}}
                               .dump();
  const std::string image =
      json{{"content", outline.image.content}, {"position", outline.image.position}, {"size", outline.image.size}}
          .dump();
  DesignPassScores s;
  s.color = judge_score(
      judge, model,
      render_prompt("judge_color", {{"background color", outline.background_color}, {"text", text}, {"workflow plan", plan}}));
  s.text = judge_score(judge, model, render_prompt("judge_text", {{"text", text}, {"workflow plan", plan}}));
  s.image = judge_score(judge, model, render_prompt("judge_image", {{"image", image}, {"workflow plan", plan}}));
  return s;
}

CreativityScores creativity(ChatClient& judge, const std::string& model, const std::string& query,
                            const Raster& final_design, const std::optional<std::string>& description) {
  CreativityScores out;
  auto ask = [&](const char* name) -> std::optional<int> {
    ChatRequest req = make_request(model, render_prompt(name, {{"user query", query}}));
    if (description) {
      req.messages.push_back({"user", "Image description: " + *description, std::nullopt});
    } else {
      auto png = encode_png(final_design);
      req.messages.front().image_png = std::string(png.begin(), png.end());
    }
    try {
      return parse_judge_score(judge.complete(req).content);
    } catch (const ChatError&) {
      return std::nullopt;
    }
  };
  out.originality = ask("originality");
  out.elaboration = ask("elaboration");
  return out;
}

std::string describe_design(const PipelineRun& run) {
  std::ostringstream os;
  os << "A " << design_type_name(run.instance.design_type) << " design";
  if (run.final_raster) os << " of " << run.final_raster->width() << "x" << run.final_raster->height() << " px";
  std::vector<std::string> texts, images;
  std::optional<std::string> background;
  if (run.retrieved) {
    for (const auto& s : run.retrieved->steps) {
      if (!s.action || !s.parameters || !s.parameters->is_object()) continue;
      const json& p = *s.parameters;
      if (*s.action == "CreateText" && p.contains("textString") && p["textString"].is_string())
        texts.push_back(p["textString"].get<std::string>());
      if (*s.action == "ImportObject" && p.contains("fileName") && p["fileName"].is_string())
        images.push_back(p["fileName"].get<std::string>());
      if (*s.action == "SetBackgroundColor")
        background = "rgb(" + p.value("red", json(0)).dump() + ", " + p.value("green", json(0)).dump() + ", " +
                     p.value("blue", json(0)).dump() + ")";
    }
  }
  if (background) os << " on a " << *background << " background";
  os << ".";
  if (!texts.empty()) {
    os << " Text:";
    for (const auto& t : texts) os << " " << json(t).dump() << ";";
  }
  if (!images.empty()) {
    os << " Images:";
    for (const auto& i : images) {
      std::string caption;
      for (const auto& img : run.instance.images)
        if (img.path == i || std::filesystem::path(img.path).filename() == i) caption = img.caption;
      os << " " << i << (caption.empty() ? "" : " (" + caption + ")") << ";";
    }
  }
  return os.str();
}

double vqa_pass_rate(std::size_t yes, std::size_t total) {
  if (total == 0) throw std::invalid_argument("no questions");
  return 100.0 * static_cast<double>(yes) / static_cast<double>(total);
}

std::vector<Raster> load_input_images(const DesignInstance& instance, std::vector<std::string>* warnings) {
  std::vector<Raster> out;
  for (const auto& img : instance.images) {
    try {
      out.push_back(read_image(img.resolved.empty() ? std::filesystem::path(img.path) : img.resolved));
    } catch (const std::exception& e) {
      if (warnings) warnings->push_back("input image " + img.path + ": " + e.what());
    }
  }
  return out;
}

namespace {

std::vector<std::string> generate_questions(ChatClient& judge, const std::string& model, const std::string& query) {
  const std::string prompt =
      "Write yes/no questions that check whether a finished graphic design satisfies the request below. "
      "Each question must be answerable with Yes or No by looking at the design alone. "
      "Output a JSON list of strings only.\n\nRequest: " +
      query + "\n";
  std::vector<std::string> out;
  try {
    auto arr = extract_json_array(judge.complete(make_request(model, prompt)).content);
    if (!arr) return out;
    json doc = json::parse(*arr, nullptr, false);
    if (!doc.is_array()) return out;
    for (const auto& q : doc)
      if (q.is_string() && !q.get<std::string>().empty()) out.push_back(q.get<std::string>());
  } catch (const ChatError&) {
  }
  return out;
}

}  // namespace

RunScores score_run(const PipelineRun& run, const EvalOptions& options) {
  RunScores s;
  s.instance_id = run.instance_id;
  s.model = run.model;
  s.design_type = std::string(design_type_name(run.instance.design_type));
  s.delivery = run.delivery;
  s.errors = run.error_histogram();
  if (run.supervised && !run.supervised->steps.empty()) {
    s.supervised_steps = static_cast<int>(run.supervised->steps.size());
    s.step_efficiency = step_efficiency(*run.supervised);
    s.expert_use_efficiency = expert_use_efficiency(*run.supervised);
  }
  if (run.retrieved) s.retrieved_steps = static_cast<int>(run.retrieved->steps.size());
  if (options.judge && run.delivery && run.outline && run.supervised)
    s.design_pass = design_pass(*options.judge, options.judge_model, *run.outline, *run.supervised);
  if (!run.exec.empty()) s.success_rate = success_rate(run.exec);

  if (!run.instance.images.empty()) {
    auto inputs = load_input_images(run.instance, &s.warnings);
    if (!inputs.empty()) s.fidelity = fidelity(run.final_raster ? &*run.final_raster : nullptr, inputs);
  }

  if (run.final_raster && options.sidecar) {
    if (!options.sidecar->healthy()) {
      s.warnings.push_back("scoring service unavailable; content similarity and VQA omitted");
    } else {
      const auto png = encode_png(*run.final_raster);
      try {
        s.content_similarity = options.sidecar->similarity(run.instance.query, png);
      } catch (const SidecarError& e) {
        s.warnings.push_back(e.what());
      }
      std::vector<std::string> questions = run.instance.questions.value_or(std::vector<std::string>{});
      if (questions.empty() && options.generate_questions && options.judge)
        questions = generate_questions(*options.judge, options.judge_model, run.instance.query);
      try {
        std::size_t yes = 0;
        for (const auto& q : questions) yes += options.sidecar->vqa(q, png).yes ? 1 : 0;
        if (!questions.empty()) s.vqa_pass_rate = vqa_pass_rate(yes, questions.size());
      } catch (const SidecarError& e) {
        s.warnings.push_back(e.what());
      }
    }
  }

  if (run.final_raster && options.judge) {
    std::optional<std::string> description;
    if (!options.creativity_with_image) description = describe_design(run);
    s.creativity = creativity(*options.judge, options.judge_model, run.instance.query, *run.final_raster, description);
  }
  return s;
}

namespace {

json opt(const std::optional<double>& v) { return v ? json(*v) : json(); }
json opt(const std::optional<int>& v) { return v ? json(*v) : json(); }

std::array<std::optional<double>, std::size(kMetricNames)> metric_values(const RunScores& s) {
  auto as_d = [](const std::optional<int>& v) { return v ? std::optional<double>(*v) : std::nullopt; };
  std::array<std::optional<double>, std::size(kMetricNames)> v{};
  v[0] = s.delivery ? 100.0 : 0.0;
  v[1] = s.step_efficiency;
  v[2] = s.expert_use_efficiency;
  if (s.design_pass) {
    v[3] = as_d(s.design_pass->color);
    v[4] = as_d(s.design_pass->text);
    v[5] = as_d(s.design_pass->image);
    v[6] = s.design_pass->aggregate();
  }
  v[7] = s.success_rate;
  v[8] = s.fidelity;
  v[9] = s.content_similarity;
  v[10] = s.vqa_pass_rate;
  if (s.creativity) {
    v[11] = as_d(s.creativity->originality);
    v[12] = as_d(s.creativity->elaboration);
  }
  return v;
}

}  // namespace

json to_json(const RunScores& s) {
  json j = {{"instance_id", s.instance_id},
            {"model", s.model},
            {"design_type", s.design_type},
            {"delivery", s.delivery},
            {"step_efficiency", opt(s.step_efficiency)},
            {"expert_use_efficiency", opt(s.expert_use_efficiency)},
            {"success_rate", opt(s.success_rate)},
            {"fidelity", opt(s.fidelity)},
            {"content_similarity", opt(s.content_similarity)},
            {"vqa_pass_rate", opt(s.vqa_pass_rate)},
            {"supervised_steps", s.supervised_steps},
            {"retrieved_steps", s.retrieved_steps},
            {"errors", to_json(s.errors)},
            {"warnings", s.warnings}};
  j["design_pass"] = s.design_pass ? json{{"color", opt(s.design_pass->color)},
                                          {"text", opt(s.design_pass->text)},
                                          {"image", opt(s.design_pass->image)},
                                          {"aggregate", opt(s.design_pass->aggregate())}}
                                   : json();
  j["creativity"] = s.creativity
                        ? json{{"originality", opt(s.creativity->originality)}, {"elaboration", opt(s.creativity->elaboration)}}
                        : json();
  return j;
}

std::vector<AggregateRow> aggregate(std::span<const RunScores> runs) {
  struct Acc {
    int count = 0;
    std::array<double, std::size(kMetricNames)> sum{};
    std::array<int, std::size(kMetricNames)> n{};
    ErrorHistogram errors;
  };
  std::map<std::pair<std::string, std::string>, Acc> groups;
  for (const auto& r : runs) {
    Acc& a = groups[{r.model, r.design_type}];
    ++a.count;
    a.errors += r.errors;
    auto v = metric_values(r);
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i]) {
        a.sum[i] += *v[i];
        ++a.n[i];
      }
  }
  std::vector<AggregateRow> rows;
  for (const auto& [key, a] : groups) {
    AggregateRow row{key.first, key.second, a.count, {}, a.errors};
    for (std::size_t i = 0; i < a.sum.size(); ++i)
      row.means.push_back(a.n[i] ? std::optional<double>(a.sum[i] / a.n[i]) : std::nullopt);
    rows.push_back(std::move(row));
  }
  return rows;
}

json report_to_json(std::span<const AggregateRow> rows) {
  json arr = json::array();
  for (const auto& row : rows) {
    json means = json::object();
    for (std::size_t i = 0; i < row.means.size(); ++i) means[kMetricNames[i]] = opt(row.means[i]);
    json shares = json::object();
    const auto sh = row.errors.shares();
    for (auto c : kAllErrorClasses) shares[std::string(error_class_name(c))] = sh[static_cast<std::size_t>(c)];
    arr.push_back({{"model", row.model},
                   {"design_type", row.design_type},
                   {"run_count", row.run_count},
                   {"means", means},
                   {"errors", to_json(row.errors)},
                   {"error_shares", shares}});
  }
  return {{"content_similarity_scale", "native scale of the scoring service"}, {"groups", arr}};
}

namespace {

std::string fmt(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string report_markdown(std::span<const AggregateRow> rows) {
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < std::size(kMetricNames); ++i)
    for (const auto& row : rows)
      if (row.means[i]) {
        cols.push_back(i);
        break;
      }
  std::ostringstream os;
  os << "# Evaluation report\n\n";
  os << "Content similarity is reported on the scoring service's native scale.\n\n";
  os << "| model | design type | runs |";
  for (auto i : cols) os << " " << kMetricNames[i] << " |";
  os << "\n|---|---|---|";
  for (std::size_t k = 0; k < cols.size(); ++k) os << "---|";
  os << "\n";
  for (const auto& row : rows) {
    os << "| " << row.model << " | " << row.design_type << " | " << row.run_count << " |";
    for (auto i : cols) os << " " << (row.means[i] ? fmt(*row.means[i], 3) : "-") << " |";
    os << "\n";
  }
  os << "\n## Error distribution (% of errors)\n\n| model | design type | total |";
  for (auto c : kAllErrorClasses) os << " " << error_class_name(c) << " |";
  os << "\n|---|---|---|";
  for (std::size_t k = 0; k < kAllErrorClasses.size(); ++k) os << "---|";
  os << "\n";
  for (const auto& row : rows) {
    os << "| " << row.model << " | " << row.design_type << " | " << row.errors.total() << " |";
    const auto sh = row.errors.shares();
    for (auto c : kAllErrorClasses) os << " " << fmt(sh[static_cast<std::size_t>(c)], 1) << " |";
    os << "\n";
  }
  return os.str();
}

std::string error_chart_svg(const AggregateRow& row) {
  const int width = 560, height = 260, left = 50, bottom = 210, top = 40, bar = 60, gap = 40;
  const auto sh = row.errors.shares();
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">Errors: " << row.model
     << " / " << row.design_type << " (n=" << row.errors.total() << ")</text>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << width - 10 << "\" y2=\"" << bottom
     << "\" stroke=\"black\"/>\n";
  for (std::size_t i = 0; i < kAllErrorClasses.size(); ++i) {
    const double share = sh[i];
    const double h = (bottom - top) * share / 100.0;
    const int x = left + gap / 2 + static_cast<int>(i) * (bar + gap);
    os << "<rect x=\"" << x << "\" y=\"" << fmt(bottom - h, 2) << "\" width=\"" << bar << "\" height=\"" << fmt(h, 2)
       << "\" fill=\"#4a78b5\"/>\n";
    os << "<text x=\"" << x + bar / 2 << "\" y=\"" << fmt(bottom - h - 4, 2) << "\" text-anchor=\"middle\">"
       << fmt(share, 1) << "%</text>\n";
    os << "<text x=\"" << x + bar / 2 << "\" y=\"" << bottom + 16 << "\" text-anchor=\"middle\">"
       << error_class_name(kAllErrorClasses[i]) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

namespace {

std::string slug(std::string s) {
  for (char& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '.') c = '_';
  return s;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + p.string());
}

}  // namespace

void write_report(const std::filesystem::path& dir, std::span<const AggregateRow> rows) {
  std::filesystem::create_directories(dir / "charts");
  write_file(dir / "report.json", report_to_json(rows).dump(2) + "\n");
  write_file(dir / "report.md", report_markdown(rows));
  for (const auto& row : rows)
    write_file(dir / "charts" / (slug(row.model) + "__" + slug(row.design_type) + ".svg"), error_chart_svg(row));
}

}  // namespace gtown
