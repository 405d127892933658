// slabrad: batch driver for slab-mediated superradiance studies.
//
//   slabrad <subcommand> [--config file.json] [--section.key value ...]
//
// Every config leaf is also a flag (underscores become hyphens). Exit codes:
// 0 success, 2 partial failure (NaN points or failed checks), 1 hard error.
#include <chrono>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "slabrad/runner.hpp"

namespace {

std::string flag_name(std::string path) {
  for (char& c : path)
    if (c == '_') c = '-';
  return "--" + path;
}

std::string describe(const slabrad::FieldSpec& f) {
  std::string text = f.help + " (default " + f.default_value.dump() + ")";
  if (!f.choices.empty()) {
    text += " {";
    for (std::size_t i = 0; i < f.choices.size(); ++i) text += (i ? "|" : "") + f.choices[i];
    text += "}";
  }
  return text;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace slabrad;
  CLI::App app{"Photon-mediated emitter interactions in a dielectric slab"};
  app.set_version_flag("--version", SLABRAD_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  app.add_option("--config", config_path, "JSON config or a previous run's .meta.json sidecar");

  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  for (const auto& f : config_schema()) {
    options[f.path] = app.add_option(flag_name(f.path), values[f.path], describe(f))->group("Config");
  }
  std::string output_path, alias_n, alias_seed;
  auto* opt_output = app.add_option("-o,--output", output_path, "alias of --output.path");
  auto* opt_n = app.add_option("--n", alias_n, "oracle-check: alias of --oracle.n");
  auto* opt_seed = app.add_option("--seed", alias_seed, "alias of --oracle.seed or --disorder.seed");

  for (const auto& name : subcommands()) app.add_subcommand(name, "run the " + name + " study");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  const std::string sub = app.get_subcommands().front()->get_name();

  try {
    json config = config_path.empty() ? default_config() : load_config(config_path);
    for (const auto& [path, opt] : options)
      if (opt->count()) set_field(config, path, values[path]);
    if (opt_output->count()) set_field(config, "output.path", output_path);
    if (opt_n->count()) set_field(config, "oracle.n", alias_n);
    if (opt_seed->count()) {
      set_field(config, sub == "oracle-check" ? "oracle.seed" : "disorder.seed", alias_seed);
    }
    validate_config(config);

    const auto start = std::chrono::steady_clock::now();
    const RunResult result = run_subcommand(sub, config);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const int code = write_outputs(sub, config, result, wall);
    for (const auto& f : result.failures) std::cerr << "partial failure: " << f << '\n';
    std::cerr << sub << ": " << result.table.rows.size() << " rows -> "
              << at_path(config, "output.path").get<std::string>() << " (" << wall << " s)\n";
    return code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
