#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "graphictown/cli.hpp"
#include "graphictown/engine.hpp"
#include "graphictown/metrics.hpp"
#include "graphictown/prompts.hpp"
#include "graphictown/registry.hpp"
#include "graphictown/validator.hpp"

namespace py = pybind11;
using namespace gtown;

namespace {

Workflow parse_plan(const std::string& text) {
  auto got = parse_workflow_output(text, Stage::Retrieved);
  if (!got) throw std::invalid_argument("plan: " + got.error().reason);
  return std::move(got).value();
}

py::bytes to_bytes(const std::vector<std::uint8_t>& v) {
  return py::bytes(reinterpret_cast<const char*>(v.data()), v.size());
}

Raster from_bytes(const py::bytes& b) {
  const std::string s = b;
  return decode_png({reinterpret_cast<const std::uint8_t*>(s.data()), s.size()});
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "GraphicTown core bindings. Structured values cross as JSON text.";

  m.def("catalog_json", [] { return registry_to_json(builtin_registry()).dump(); });

  m.def(
      "validate_json",
      [](const std::string& plan, const std::string& instance, const std::string& assets) {
        const DesignInstance inst = parse_instance(instance, assets);
        auto got = parse_workflow_output(plan, Stage::Retrieved);
        if (!got) return to_json(format_failure_report(got.error())).dump();
        return to_json(validate(*got, builtin_registry(), inst)).dump();
      },
      py::arg("plan"), py::arg("instance"), py::arg("assets") = "");

  m.def(
      "execute_json",
      [](const std::string& plan, const std::string& instance, const std::string& assets) {
        const Workflow w = parse_plan(plan);
        const DesignInstance inst = parse_instance(instance, assets);
        RunResult r;
        {
          py::gil_scoped_release unlocked;
          r = run_workflow(w, inst, builtin_registry());
        }
        json records = json::array();
        for (const auto& rec : r.records) records.push_back(to_json(rec));
        py::object png = py::none();
        if (r.final_design) png = to_bytes(encode_png(*r.final_design));
        return py::make_tuple(records.dump(), png, r.fs.keys());
      },
      py::arg("plan"), py::arg("instance"), py::arg("assets") = "");

  m.def("expert_use_efficiency",
        [](const std::vector<std::string>& experts) { return expert_use_efficiency(experts); });
  m.def("design_pass_aggregate", &design_pass_aggregate, py::arg("color"), py::arg("text"), py::arg("image"));
  m.def(
      "template_match_score",
      [](const py::bytes& design, const py::bytes& tmpl) {
        return template_match_score(from_bytes(design), from_bytes(tmpl));
      },
      py::arg("design_png"), py::arg("template_png"));

  m.def(
      "render_prompt",
      [](const std::string& name, const std::map<std::string, std::string>& values) {
        PromptValues v(values.begin(), values.end());
        return render_prompt(name, v);
      },
      py::arg("name"), py::arg("values"));

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "graphictown");
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release unlocked;
          code = run_cli(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));

  py::register_exception<PromptError>(m, "PromptError", PyExc_ValueError);
}
