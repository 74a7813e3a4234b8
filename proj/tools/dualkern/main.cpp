#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "commands.hpp"
#include "dualkern/error.hpp"
#include "dualkern/skeleton.hpp"
#include "output.hpp"

namespace {

using dkcli::RunInfo;

void write_manifest(const CLI::App& sub, const std::vector<std::string>& args, const RunInfo& info) {
  nlohmann::ordered_json j;
  j["subcommand"] = sub.get_name();
  std::vector<std::string> argv = args;
  if (info.seed && !info.seed_given) {
    argv.push_back("--seed");
    argv.push_back(std::to_string(*info.seed));
  }
  j["argv"] = argv;
  j["config"] = sub.config_to_str(true, false);
  if (info.seed) {
    j["seed"] = *info.seed;
  } else {
    j["seed"] = nullptr;
  }
  j["version"] = DUALKERN_VERSION;
  j["skeleton_hash"] = info.skeleton_hash;
  dkcli::write_text_file(info.out + ".manifest.json", j.dump(2) + "\n");
}

std::vector<std::string> manifest_args(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw dualkern::InvalidArgument("cannot open manifest '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw dualkern::InvalidArgument("manifest '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.contains("argv") || !j["argv"].is_array()) throw dualkern::InvalidArgument("manifest has no argv array");
  auto args = j["argv"].get<std::vector<std::string>>();
  for (const auto& a : args) {
    if (a == "--manifest") throw dualkern::InvalidArgument("manifest argv may not nest --manifest");
  }
  return args;
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"Compositional kernels and their random-network realizations", "dualkern"};
  app.set_version_flag("--version", DUALKERN_VERSION);
  std::string manifest;
  app.add_option("--manifest", manifest, "replay the run recorded in a manifest file");
  dkcli::Runner selected;
  dkcli::register_commands(app, selected);
  app.require_subcommand(0, 1);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? dkcli::exit_ok : dkcli::exit_usage;
  }

  try {
    if (!manifest.empty()) {
      if (selected) throw dualkern::InvalidArgument("--manifest cannot be combined with a subcommand");
      return run(manifest_args(manifest));
    }
    if (!selected) {
      std::cerr << app.help();
      return dkcli::exit_usage;
    }
    const RunInfo info = selected();
    if (!info.out.empty() && info.out != "-") write_manifest(*app.get_subcommands().front(), args, info);
    return info.exit_code;
  } catch (const dualkern::ShapeError& e) {
    std::cerr << "shape error: " << e.what() << '\n';
    return dkcli::exit_shape;
  } catch (const dualkern::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return dkcli::exit_usage;
  } catch (const dualkern::InvalidSkeleton& e) {
    std::cerr << "invalid skeleton:\n";
    for (const auto& v : e.violations()) std::cerr << "  " << v.message << '\n';
    return dkcli::exit_usage;
  } catch (const dualkern::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return dkcli::exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "experiment failed: " << e.what() << '\n';
    return dkcli::exit_experiment;
  }
}

}  // namespace

int main(int argc, char** argv) { return run(std::vector<std::string>(argv + 1, argv + argc)); }
