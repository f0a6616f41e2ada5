#include "fixtures.hpp"

#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>
#include <stdexcept>

#include "graphictown/prompts.hpp"
#include "graphictown/registry.hpp"

namespace gtown::testing {

fs::path source_fixtures() { return GT_SOURCE_FIXTURES; }
fs::path build_fixtures() { return GT_BUILD_FIXTURES; }
fs::path assets_dir() { return build_fixtures() / "assets"; }
fs::path cassette_path() { return build_fixtures() / "reference_cassette.json"; }

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const fs::path& path) { return json::parse(read_text(path)); }

Workflow load_plan(const std::string& name) {
  auto got = parse_workflow(read_text(source_fixtures() / "plans" / (name + ".json")), Stage::Retrieved);
  if (!got) throw std::runtime_error("plan " + name + ": " + got.error().reason);
  return std::move(got).value();
}

DesignInstance load_instance(const std::string& name) {
  return parse_instance(read_text(source_fixtures() / "instances" / (name + ".json")), assets_dir());
}

namespace {

std::uint32_t hash(std::uint32_t a, std::uint32_t b) {
  std::uint32_t h = a * 0x9E3779B1u ^ (b + 0x7F4A7C15u) * 0x85EBCA77u;
  h ^= h >> 15;
  h *= 0x2C1B3C6Du;
  h ^= h >> 12;
  return h;
}

void fill_ellipse(Raster& r, int cx, int cy, int rx, int ry, Rgba c) {
  for (int y = std::max(0, cy - ry); y <= std::min(r.height() - 1, cy + ry); ++y)
    for (int x = std::max(0, cx - rx); x <= std::min(r.width() - 1, cx + rx); ++x) {
      const long dx = x - cx, dy = y - cy;
      if (dx * dx * ry * ry + dy * dy * rx * rx <= static_cast<long>(rx) * rx * ry * ry) r.set(x, y, c);
    }
}

void fill_rect(Raster& r, int x0, int y0, int x1, int y1, Rgba c) {
  for (int y = std::max(0, y0); y < std::min(r.height(), y1); ++y)
    for (int x = std::max(0, x0); x < std::min(r.width(), x1); ++x) r.set(x, y, c);
}

Raster pink_moonlit() {
  Raster r(1024, 1024);
  for (int y = 0; y < 1024; ++y)
    for (int x = 0; x < 1024; ++x) {
      const int t = y * 255 / 1023;
      r.set(x, y, {static_cast<std::uint8_t>(230 + t / 12), static_cast<std::uint8_t>(120 + t * 90 / 255),
                   static_cast<std::uint8_t>(180 + t * 40 / 255), 255});
    }
  for (int i = 0; i < 140; ++i) {
    const int x = static_cast<int>(hash(i, 1) % 1020), y = static_cast<int>(hash(i, 2) % 500);
    fill_rect(r, x, y, x + 3, y + 3, {255, 250, 240, 255});
  }
  for (int ring = 0; ring < 6; ++ring)
    fill_ellipse(r, 512, 400, 250 - ring * 6, 250 - ring * 6,
                 {255, static_cast<std::uint8_t>(200 + ring * 8), static_cast<std::uint8_t>(220 + ring * 5), 255});
  fill_ellipse(r, 512, 400, 210, 210, {255, 246, 236, 255});
  fill_ellipse(r, 450, 350, 40, 30, {240, 225, 220, 255});
  fill_ellipse(r, 580, 460, 28, 22, {242, 228, 222, 255});
  for (int x = 0; x < 1024; ++x) {
    const int top = 860 + static_cast<int>(40 * std::sin(x / 90.0));
    fill_rect(r, x, top, x + 1, 1024, {150, 70, 120, 255});
  }
  return r;
}

Raster couple_silhouette() {
  Raster r(800, 800);
  const Rgba ink{40, 20, 50, 255};
  fill_ellipse(r, 320, 250, 62, 70, ink);
  fill_ellipse(r, 320, 520, 115, 230, ink);
  fill_ellipse(r, 480, 225, 64, 72, ink);
  fill_ellipse(r, 480, 500, 120, 250, ink);
  fill_rect(r, 380, 380, 430, 440, ink);
  fill_rect(r, 120, 740, 680, 800, ink);
  return r;
}

Raster cactus_t() {
  Raster r(380, 420, {255, 255, 255, 255});
  const Rgba green{60, 140, 70, 255}, dark{30, 90, 40, 255};
  fill_rect(r, 40, 50, 340, 130, green);
  fill_ellipse(r, 40, 90, 40, 40, green);
  fill_ellipse(r, 340, 90, 40, 40, green);
  fill_rect(r, 150, 50, 230, 400, green);
  fill_ellipse(r, 190, 400, 40, 16, green);
  for (int i = 0; i < 90; ++i) {
    const int x = 45 + static_cast<int>(hash(i, 7) % 290), y = 55 + static_cast<int>(hash(i, 8) % 340);
    const bool on_bar = y < 130, on_stem = x >= 152 && x < 226;
    if (on_bar || on_stem) fill_rect(r, x, y, x + 2, y + 7, dark);
  }
  fill_ellipse(r, 190, 38, 24, 20, {240, 110, 150, 255});
  return r;
}

Raster floral_background() {
  Raster r(1000, 1600, {250, 236, 222, 255});
  for (int k = 0; k < 48; ++k) {
    const int cx = static_cast<int>(hash(k, 11) % 1000), cy = static_cast<int>(hash(k, 12) % 1600);
    const int rad = 60 + static_cast<int>(hash(k, 13) % 70);
    fill_ellipse(r, cx + rad / 2, cy + rad / 3, rad / 2, rad / 4, {120, 160, 100, 255});
    for (int ring = 0; ring < 6; ++ring) {
      const int rr = rad * (6 - ring) / 6;
      const Rgba c = ring % 2 == 0 ? Rgba{222, 92, 90, 255} : Rgba{244, 150, 135, 255};
      fill_ellipse(r, cx, cy, rr, rr, c);
    }
  }
  return r;
}

Raster jellyfish() {
  Raster r(1000, 950);
  for (int y = 0; y < 950; ++y)
    for (int x = 0; x < 1000; ++x)
      r.set(x, y, {10, static_cast<std::uint8_t>(20 + y / 40), static_cast<std::uint8_t>(50 + y / 12), 255});
  for (int ring = 0; ring < 8; ++ring) {
    Raster bell(1000, 950);
    fill_ellipse(bell, 500, 380, 270 - ring * 20, 210 - ring * 18,
                 {static_cast<std::uint8_t>(70 + ring * 15), static_cast<std::uint8_t>(150 + ring * 12), 255, 255});
    for (int y = 0; y <= 380; ++y)
      for (int x = 0; x < 1000; ++x)
        if (bell.at(x, y).a) r.set(x, y, bell.at(x, y));
  }
  for (int k = 0; k < 9; ++k) {
    const double x0 = 330 + k * 42;
    for (int y = 381; y < 900; ++y) {
      const int x = static_cast<int>(x0 + 28 * std::sin(y / 45.0 + k));
      fill_rect(r, x - 3, y, x + 3, y + 1, {120, 190, 255, 255});
    }
  }
  return r;
}

std::string expert_of_prompt(const std::string& prompt) {
  static const std::regex re("You are a proficient ([A-Za-z ]+?)\\.");
  std::smatch m;
  if (!std::regex_search(prompt, m, re)) return "";
  return m[1];
}

}  // namespace

std::map<std::string, Raster> make_assets() {
  return {{"pink_moonlit.png", pink_moonlit()},
          {"couple_silhouette.png", couple_silhouette()},
          {"cactus_shaped_T.png", cactus_t()},
          {"floral_background.png", floral_background()},
          {"jellyfish_illustration.png", jellyfish()}};
}

void write_assets(const fs::path& dir) {
  fs::create_directories(dir);
  for (const auto& [name, raster] : make_assets()) write_png(dir / name, raster);
}

ScriptedClient::Script reference_script(const std::string& name) {
  const Workflow plan = load_plan(name);
  const json outline = read_json(source_fixtures() / "outlines" / (name + ".json"));
  return [plan, outline](const ChatRequest& request) -> std::string {
    const std::string& prompt = request.messages.front().content;
    const auto kind = identify_prompt(prompt);
    if (!kind) return "no json";
    auto steps_for = [&](const std::string& expert, bool with_actions, bool renumber) {
      json arr = json::array();
      int id = 0;
      for (const auto& s : plan.steps) {
        if (!expert.empty() && s.expert != expert) continue;
        json j = {{"id", renumber ? ++id : s.id}, {"expert", s.expert}, {"description", s.description}};
        if (with_actions) {
          j["action"] = s.action ? json(*s.action) : json();
          j["parameters"] = s.parameters ? *s.parameters : json::object();
        }
        arr.push_back(j);
      }
      return arr;
    };
    if (*kind == "outline") return "```json\n" + outline.dump(4) + "\n```";
    if (*kind == "recruitment") {
      json arr = json::array();
      for (const auto& s : plan.steps)
        if (arr.empty() || arr.back()["expert"] != s.expert)
          arr.push_back({{"expert", s.expert}, {"task", "Complete the " + s.expert + " part of the design."}});
      return arr.dump(4);
    }
    if (*kind == "expert_plan") return steps_for(expert_of_prompt(prompt), false, true).dump(4);
    if (*kind == "supervision") return steps_for("", false, false).dump(4);
    if (*kind == "retrieval") return "Here is the mapping:\n" + steps_for(expert_of_prompt(prompt), true, false).dump(4);
    if (*kind == "judge_color") return "5";
    if (*kind == "judge_text") return "Score: 4";
    if (*kind == "judge_image") return "4";
    if (*kind == "vqa") return "Yes";
    if (*kind == "originality") return "3";
    if (*kind == "elaboration") return "2";
    return "no json";
  };
}

}  // namespace gtown::testing
