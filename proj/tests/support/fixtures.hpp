#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "graphictown/chat.hpp"
#include "graphictown/raster.hpp"
#include "graphictown/workflow.hpp"

namespace gtown::testing {

namespace fs = std::filesystem;

/// Checked-in fixtures (tests/fixtures).
fs::path source_fixtures();
/// Generated fixtures (assets, cassette) in the build tree.
fs::path build_fixtures();
fs::path assets_dir();
fs::path cassette_path();

inline const std::vector<std::string> kReferenceNames = {"book_cover", "business_card", "postcard", "poster"};

std::string read_text(const fs::path& path);
json read_json(const fs::path& path);

/// tests/fixtures/plans/<name>.json as a retrieved workflow.
Workflow load_plan(const std::string& name);
/// tests/fixtures/instances/<name>.json with images under assets_dir().
DesignInstance load_instance(const std::string& name);

/// Procedural stand-ins for the instance images, keyed by file name.
std::map<std::string, Raster> make_assets();
void write_assets(const fs::path& dir);

/// Chat script that answers every pipeline stage with the reference plan
/// for `name`; judge prompts get fixed scores and VQA gets "Yes".
ScriptedClient::Script reference_script(const std::string& name);

}  // namespace gtown::testing
