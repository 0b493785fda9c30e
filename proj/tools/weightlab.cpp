// weightlab command line: run a config file, run an ad-hoc analysis, or list
// the weight families.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "weightlab/weightlab.hpp"

namespace {

using namespace weightlab;

int write_report(const ExperimentResult& res, const ExperimentConfig& cfg) {
  try {
    if (cfg.out == "-") std::cout << render(res.rows, cfg.format);
    else emit(res.rows, cfg.format, cfg.out);
  } catch (const io_error& e) {
    std::cerr << "weightlab: " << e.what() << '\n';
    return exit_io;
  }
  for (const auto& r : res.rows)
    if (r.verdict.rfind("error", 0) == 0) std::cerr << "weightlab: " << r.analysis << ": " << r.verdict << '\n';
  return res.status;
}

int run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "weightlab: cannot read '" << path << "'\n";
    return exit_io;
  }
  std::stringstream text;
  text << in.rdbuf();
  ExperimentConfig cfg;
  try {
    cfg = parse_config(text.str());
  } catch (const config_error& e) {
    std::cerr << path << ": " << e.what() << '\n';
    return exit_config;
  }
  return write_report(run_experiment(cfg), cfg);
}

int list_families() {
  for (const auto& f : family_registry()) {
    std::cout << f.name << "\n  syntax:  " << f.syntax << "\n  role:    " << f.role << '\n';
    if (!f.example.empty()) std::cout << "  example: " << f.example << '\n';
  }
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for doubling and A-infinity weights"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", config_path, "Config file")->required();

  std::string weight, window = "-4,4", analyses, scales = "0.01,0.5,6", out = "-", format = "csv";
  std::size_t cells = 65536;
  auto* analyze = app.add_subcommand("analyze", "Run analyses given on the command line");
  analyze->add_option("--weight", weight, "Weight spec, e.g. power:0:1")->required();
  analyze->add_option("--window", window, "Window a,b")->capture_default_str();
  analyze->add_option("--cells", cells, "Grid cells for sampled families")->capture_default_str();
  analyze->add_option("--analyses", analyses, "Comma-separated analyses")->required();
  analyze->add_option("--scales", scales, "lo,hi,count")->capture_default_str();
  analyze->add_option("--out", out, "Output path, - for stdout")->capture_default_str();
  analyze->add_option("--format", format, "csv or json")->capture_default_str();

  app.add_subcommand("families", "List the built-in weight families");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_config;
  }

  if (*run) return run_config(config_path);
  if (app.got_subcommand("families")) return list_families();

  ExperimentConfig cfg;
  try {
    apply_entry(cfg, "weight", weight, 0);
    apply_entry(cfg, "window", window, 0);
    apply_entry(cfg, "cells", std::to_string(cells), 0);
    apply_entry(cfg, "analyses", analyses, 0);
    apply_entry(cfg, "scales", scales, 0);
    apply_entry(cfg, "out", out, 0);
    apply_entry(cfg, "format", format, 0);
    validate(cfg);
  } catch (const config_error& e) {
    std::cerr << "weightlab: " << e.what() << '\n';
    return exit_config;
  }
  return write_report(run_experiment(cfg), cfg);
}
