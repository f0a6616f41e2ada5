#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace gtown {

using json = nlohmann::json;

struct CliConfig {
  std::optional<std::filesystem::path> assets;  // default: each instance file's directory
  std::optional<std::filesystem::path> out;  // default per command
  std::string endpoint;
  std::string api_key;
  std::string model = "default";
  double temperature = 0.0;
  int retries = 0;
  int workers = 1;
  std::string sidecar;
  std::filesystem::path cassette;
  bool alias_export_document = false;
  bool execute_undelivered = true;
  bool judge = false;
  std::string judge_model;  // empty: same as model
  bool creativity_with_image = false;
  bool generate_questions = false;
};

/// Keys match the field names above. Throws std::runtime_error on bad input.
void apply_config_json(CliConfig& config, const json& doc);
/// GRAPHICTOWN_ENDPOINT and GRAPHICTOWN_API_KEY.
void apply_env(CliConfig& config);

/// Expands shell-style wildcards; arguments without matches are kept.
std::vector<std::string> expand_globs(const std::vector<std::string>& patterns);

enum ExitCode { kExitOk = 0, kExitSubjectFailure = 1, kExitHarnessFault = 2 };

/// Entry point for the `graphictown` executable. args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gtown
