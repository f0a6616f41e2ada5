#include <doctest.h>

#include <set>

#include "fixtures.hpp"
#include "graphictown/engine.hpp"
#include "graphictown/validator.hpp"
#include "random_plans.hpp"

using namespace gtown;
using namespace gtown::testing;

TEST_CASE("clean validation implies no classified runtime failures") {
  const DesignInstance inst = soundness_instance(build_fixtures() / "tmp" / "soundness");
  int clean = 0, dirty = 0;
  for (std::uint32_t seed = 1; seed <= 200; ++seed) {
    CAPTURE(seed);
    const Workflow w = random_workflow(seed);
    const ValidationReport report = validate(w, builtin_registry(), inst);
    const RunResult run = run_workflow(w, inst, builtin_registry());
    REQUIRE(run.records.size() == w.steps.size());

    std::set<int> static_ids, runtime_ids;
    for (const auto& e : report.errors) static_ids.insert(*e.step_id);
    for (const auto& r : run.records)
      if (r.status != ExecStatus::Ok) runtime_ids.insert(r.step_id);

    if (report.ok()) {
      ++clean;
      CHECK(runtime_ids.empty());
    } else {
      ++dirty;
      CHECK(static_ids == runtime_ids);
    }
  }
  MESSAGE("clean: " << clean << ", with errors: " << dirty);
  CHECK(clean >= 40);
  CHECK(dirty >= 40);
}
