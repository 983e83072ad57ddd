#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cbundle/workbench.hpp"

namespace {

int finish(const cbundle::RunResult& result, const std::string& out_path,
           const std::string& csv_path) {
  std::string text = result.report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot open " << out_path << " for writing\n";
      return 1;
    }
    out << text;
  }
  if (!csv_path.empty() && !result.csv.empty()) {
    std::ofstream csv(csv_path);
    if (!csv) {
      std::cerr << "cannot open " << csv_path << " for writing\n";
      return 1;
    }
    csv << result.csv;
  }
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for complex structures on products of circle bundles"};
  app.require_subcommand(1);

  std::string config_path, out_path, csv_path, preset_name;
  std::uint64_t seed = 0;
  bool seed_given = false, emit_config_only = false;

  CLI::App* run_cmd = app.add_subcommand("run", "run the commands in a JSON config");
  run_cmd->add_option("config", config_path, "path to config.json")->required();
  run_cmd->add_option("--seed", seed, "override experiment.seed")
      ->each([&](const std::string&) { seed_given = true; });
  run_cmd->add_option("--out", out_path, "write the JSON report here instead of stdout");
  run_cmd->add_option("--csv", csv_path, "write orbit experiment rows as CSV");

  CLI::App* preset_cmd = app.add_subcommand("preset", "run a shipped preset");
  preset_cmd->add_option("name", preset_name, "one of: calabi-eckmann-p1p1, grassmannian-24-p3, flag-a2")
      ->required();
  preset_cmd->add_option("--seed", seed, "override experiment.seed")
      ->each([&](const std::string&) { seed_given = true; });
  preset_cmd->add_option("--out", out_path, "write the JSON report here instead of stdout");
  preset_cmd->add_option("--csv", csv_path, "write orbit experiment rows as CSV");
  preset_cmd->add_flag("--emit-config", emit_config_only,
                       "print the preset's config JSON instead of running it");

  CLI11_PARSE(app, argc, argv);

  try {
    cbundle::RunConfig config;
    if (run_cmd->parsed()) {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "cannot read " << config_path << "\n";
        return 1;
      }
      std::stringstream buf;
      buf << in.rdbuf();
      config = cbundle::parse_config(buf.str());
    } else {
      config = cbundle::preset(preset_name);
    }
    if (seed_given) config.experiment.seed = seed;
    if (emit_config_only) {
      std::cout << cbundle::emit_config(config);
      return 0;
    }
    return finish(cbundle::run(config), out_path, csv_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
