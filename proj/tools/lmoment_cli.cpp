#include "lmoment/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace lmoment;

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for mollified moments of twisted L-functions"};
  app.require_subcommand(1, 1);

  std::string config_path, out_path, format;
  std::map<std::string, double> flags;
  bool no_timing = false;
  std::vector<double> rungs;

  app.add_option("--config", config_path, "json config file")->check(CLI::ExistingFile);
  for (const auto& s : subcommands()) {
    auto* sub = app.add_subcommand(s);
    sub->fallthrough();
  }
  for (const auto& [flag, key] : std::vector<std::pair<std::string, std::string>>{
           {"--q", "q"}, {"--d", "d"}, {"--x", "x"}, {"--k", "k"}, {"--cmax", "cmax"}, {"--nmax", "nmax"},
           {"--pmax", "pmax"}, {"--tol-override", "tol"}}) {
    app.add_option_function<double>(flag, [&flags, key = key](double v) { flags[key] = v; });
  }
  app.add_option("--rungs", rungs, "window rungs for the shifted subcommand");
  app.add_option("--out", out_path, "report path (default: standard output)");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--no-timing", no_timing, "write runtime_seconds as null");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  ExperimentConfig cfg;
  try {
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      std::stringstream ss;
      ss << f.rdbuf();
      cfg = parse_config_json(ss.str());
    }
  } catch (const ConfigError& e) {
    std::cerr << config_path << ": " << e.what() << "\n";
    return 2;
  }
  const auto* sub = app.get_subcommands().front();
  if (!config_path.empty() && cfg.subcommand != sub->get_name()) {
    std::cerr << config_path << ": field 'subcommand': '" << cfg.subcommand << "' does not match '" << sub->get_name()
              << "'\n";
    return 2;
  }
  cfg.subcommand = sub->get_name();
  for (const auto& [k, v] : flags) cfg.params[k] = v;
  if (!rungs.empty()) cfg.rungs = rungs;
  if (!out_path.empty()) cfg.output_path = out_path;
  if (format == "csv") cfg.format = Format::csv;
  if (format == "json") cfg.format = Format::json;
  cfg.timing = !no_timing;

  std::string err;
  int status;
  try {
    status = run(cfg, &err);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  if (!err.empty()) std::cerr << "error: " << err << "\n";
  return status;
}
