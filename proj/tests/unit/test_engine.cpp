#include <doctest.h>

#include <chrono>

#include "fixtures.hpp"
#include "graphictown/engine.hpp"
#include "graphictown/filters.hpp"
#include "graphictown/metrics.hpp"
#include "graphictown/qr.hpp"

using namespace gtown;
using namespace gtown::testing;

namespace {

std::vector<std::string> text_layers(const RunResult& r) {
  std::vector<std::string> out;
  REQUIRE(r.final_file);
  const SavedDoc* doc = r.fs.find(*r.final_file);
  REQUIRE(doc);
  for (const auto& l : doc->meta["layers"])
    if (l["kind"] == layer_kind_name(LayerKind::Text)) out.push_back(l["text"]);
  return out;
}

WorkflowStep step(int id, std::string expert, std::string action, json params) {
  return {id, std::move(expert), "", std::move(action), std::move(params)};
}

}  // namespace

TEST_CASE("reference plans execute completely") {
  struct Want {
    int width, height;
  };
  const std::map<std::string, Want> want = {
      {"book_cover", {1296, 1728}}, {"business_card", {1050, 600}}, {"postcard", {1296, 2129}}, {"poster", {1296, 1728}}};
  for (const auto& name : kReferenceNames) {
    CAPTURE(name);
    const DesignInstance inst = load_instance(name);
    const auto t0 = std::chrono::steady_clock::now();
    const RunResult r = run_workflow(load_plan(name), inst, builtin_registry());
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(seconds < 10.0);
    CHECK(success_rate(r.records) == 100.0);
    REQUIRE(r.final_design);
    CHECK(r.final_design->width() == want.at(name).width);
    CHECK(r.final_design->height() == want.at(name).height);
  }
}

TEST_CASE("book cover text layers") {
  const RunResult r = run_workflow(load_plan("book_cover"), load_instance("book_cover"), builtin_registry());
  CHECK(text_layers(r) ==
        std::vector<std::string>{"LOVE\nSTORY", "A Novel By\nOlivia Wilson", "Best Selling Book of the Year"});
}

TEST_CASE("execution is deterministic") {
  const DesignInstance inst = load_instance("poster");
  const RunResult a = run_workflow(load_plan("poster"), inst, builtin_registry());
  const RunResult b = run_workflow(load_plan("poster"), inst, builtin_registry());
  REQUIRE(a.final_design);
  CHECK(encode_png(*a.final_design) == encode_png(*b.final_design));
}

TEST_CASE("failed steps leave state untouched") {
  const DesignInstance inst = load_instance("poster");
  Engine e(builtin_registry(), inst);
  auto rec = e.execute_step(step(1, "Photo Editor", "CreateText", {{"layerName", "T"}, {"textString", "x"}}));
  CHECK(rec.status == ExecStatus::Failed);
  CHECK(rec.error->dependency_kind == DependencyKind::Local);
  CHECK_FALSE(e.has_document());

  CHECK(e.execute_step(step(2, "Photo Editor", "CreateDocumentCustom", {{"width", 200}, {"height", 100}})).status ==
        ExecStatus::Ok);
  rec = e.execute_step(step(3, "Photo Editor", "ImportObject", {{"fileName", "missing.png"}, {"layerName", "M"}}));
  CHECK(rec.error->dependency_kind == DependencyKind::Global);
  CHECK_FALSE(e.layer_kind("M"));
  rec = e.execute_step(step(4, "Photo Editor", "SetBackgroundColor", {{"red", 999}, {"green", 0}, {"blue", 0}}));
  CHECK(rec.error->cls == ErrorClass::InvalidParameters);
  CHECK(e.document()->background == Rgba{255, 255, 255, 255});
}

TEST_CASE("saved files carry over between sessions") {
  Workflow w;
  w.steps = {step(1, "Vector Graphic Editor", "CreateDocumentCustom", {{"width", 80}, {"height", 60}}),
             step(2, "Vector Graphic Editor", "SetBackgroundColor", {{"red", 255}, {"green", 0}, {"blue", 0}}),
             step(3, "Vector Graphic Editor", "SaveDocument", {{"fileName", "red"}, {"format", "ai"}}),
             step(4, "Layout Designer", "CreateText", {{"layerName", "T"}, {"textString", "x"}}),
             step(5, "Layout Designer", "CreateDocumentCustom", {{"width", 160}, {"height", 120}}),
             step(6, "Layout Designer", "ImportObject", {{"fileName", "red.ai"}, {"layerName", "Red"}}),
             step(7, "Layout Designer", "SaveDocument", {{"fileName", "final"}, {"format", "png"}})};
  const RunResult r = run_workflow(w, load_instance("poster"), builtin_registry());
  REQUIRE(r.records.size() == 7);
  CHECK(r.records[3].status == ExecStatus::Failed);
  for (int i : {0, 1, 2, 4, 5, 6}) CHECK(r.records[i].status == ExecStatus::Ok);
  REQUIRE(r.final_design);
  CHECK(r.final_design->width() == 160);
  CHECK(r.final_file == std::optional<std::string>("final.png"));
  CHECK(r.fs.size() == 2);
}

TEST_CASE("export alias") {
  Workflow w;
  w.steps = {step(1, "Photo Editor", "CreateDocument", {{"docType", "business card"}}),
             step(2, "Photo Editor", "ExportDocument", {{"fileName", "card"}, {"format", "png"}})};
  const auto plain = run_workflow(w, load_instance("poster"), builtin_registry());
  CHECK(plain.records[1].error->cls == ErrorClass::InvalidAction);
  const auto aliased = run_workflow(w, load_instance("poster"), builtin_registry(), {true});
  CHECK(aliased.records[1].status == ExecStatus::Ok);
  REQUIRE(aliased.final_design);
  CHECK(aliased.final_design->width() == 1050);
}

TEST_CASE("document presets") {
  CHECK(create_document("poster").width == 1296);
  CHECK(create_document("postcard").height == 2129);
  CHECK_THROWS_AS(create_document("doc"), std::invalid_argument);
}

TEST_CASE("raster primitives") {
  Raster dst(4, 1, {0, 0, 255, 255});
  composite_over(dst, Raster(1, 1, {255, 0, 0, 255}), 1, 0, quantize_opacity(50));
  CHECK(dst.at(1, 0).r == 128);
  CHECK(dst.at(1, 0).b == 127);
  CHECK(dst.at(0, 0) == Rgba{0, 0, 255, 255});

  const Raster img = make_assets().at("cactus_shaped_T.png");
  CHECK(decode_png(encode_png(img)) == img);
  CHECK(rotate(img, 360) == img);
  const Raster quarter = rotate(img, 90);
  CHECK(quarter.width() == img.height());
  CHECK(quarter.height() == img.width());
  CHECK(resample(img, img.width(), img.height()) == img);
  CHECK(fixed_trig(90).sin_q == 65536);
  CHECK(fixed_trig(90).cos_q == 0);
}

TEST_CASE("adjustments") {
  const Raster img = make_assets().at("cactus_shaped_T.png");
  const Raster bw = adjust_bw(img);
  for (int y = 0; y < bw.height(); y += 37)
    for (int x = 0; x < bw.width(); x += 29) {
      const Rgba c = bw.at(x, y);
      CHECK(c.r == c.g);
      CHECK(c.g == c.b);
      CHECK(c.r == luma(img.at(x, y)));
    }
  CHECK(adjust_bc(img, 0, 0) == img);
  CHECK(adjust_hsl(img, 0, 0, 0) == img);
  CHECK(blur(img, 0) == img);
  for (const char* a : {"AdjustBC", "GlassFilter", "WatercolorFilter", "BlurObject"}) CHECK(is_adjustment(a));
  CHECK_FALSE(is_adjustment("ResizeObject"));
}

TEST_CASE("qr symbols") {
  const QrCode small = QrCode::encode("https://example.com");
  CHECK(small.version() == 2);
  CHECK(small.size() == 25);
  const Raster r = small.render(4);
  CHECK(r.width() == (25 + 8) * 4);
  CHECK(qr_byte_capacity(40) == 2331);
  CHECK_THROWS_AS(QrCode::encode(std::string(2332, 'a')), std::length_error);
}

TEST_CASE("partly visible shapes render as if rasterized whole") {
  for (ShapeKind kind : {ShapeKind::Rectangle, ShapeKind::Star, ShapeKind::Ellipse}) {
    Document doc = create_document_custom(120, 90);
    Layer l;
    l.name = "S";
    l.kind = LayerKind::Shape;
    l.shape.kind = kind;
    l.shape.sides = 5;
    l.x = -50;
    l.y = 40;
    l.width = 200;
    l.height = 100;
    l.opacity = 70;
    l.fill = {10, 200, 30, 255};
    l.stroke = {4.0, {200, 0, 0, 255}};
    doc.layers.push_back(l);

    Raster expected(120, 90, doc.background);
    composite_over(expected, render_shape(l), -50, 40, quantize_opacity(70));
    CHECK(render(doc) == expected);
  }
}
