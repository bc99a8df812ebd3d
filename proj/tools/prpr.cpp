// prpr: phase retrieval experiments from the command line.
#include "prpr/harness.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

struct CommonOptions {
  std::string config_file;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  bool no_timestamp = false;
};

void add_common(CLI::App* sub, CommonOptions& o) {
  sub->add_option("--config", o.config_file, "JSON config file");
  sub->add_option("--set", o.sets, "Override a config field, key=value (repeatable)");
  sub->add_option("--seed", o.seed, "Root seed");
  sub->add_option("--out", o.out_dir, "Output directory")->capture_default_str();
  sub->add_flag("--no-timestamp", o.no_timestamp, "Omit the timestamp line from CSV preambles");
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw prpr::ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int run_command(const std::string& command, const CommonOptions& o) {
  prpr::Json file = nullptr;
  if (!o.config_file.empty()) file = prpr::parse_config_text(read_file(o.config_file), o.config_file);
  std::vector<prpr::Json> sets;
  for (const auto& s : o.sets) sets.push_back(prpr::parse_set_override(s));
  if (o.seed) sets.push_back(prpr::Json{{"seed", *o.seed}});
  const prpr::ExperimentConfig cfg = prpr::resolve_config(command, file, sets);
  std::filesystem::create_directories(o.out_dir);
  return prpr::execute(cfg, o.out_dir, std::cout, !o.no_timestamp);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase retrieval with gauge regularizers: recovery, stability and certificate experiments"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", prpr::code_version());

  const std::vector<std::pair<std::string, std::string>> commands{
      {"run", "Solve repeated recovery trials and write traces"},
      {"stability", "Sweep the noise level and fit the log-log slope"},
      {"phase-diagram", "Success rate over an (m, s) grid"},
      {"certify", "Minimal-norm certificate, RI and NDSC checks"},
      {"bounds", "Sample-complexity bounds with Monte-Carlo widths"},
      {"concentration", "Empirical pass rates of the concentration inequalities"}};
  CommonOptions opts;
  std::vector<CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, opts);
    subs.push_back(sub);
  }
  app.add_subcommand("presets", "List preset names")->callback([] {
    for (const auto& p : prpr::preset_names()) std::cout << p << '\n';
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? prpr::exit_ok : prpr::exit_config;
  }

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    try {
      return run_command(commands[i].first, opts);
    } catch (const prpr::ConfigError& e) {
      std::cerr << "prpr: " << e.what() << '\n';
      return prpr::exit_config;
    } catch (const std::exception& e) {
      std::cerr << "prpr: " << e.what() << '\n';
      return prpr::exit_failure;
    }
  }
  return prpr::exit_ok;
}
