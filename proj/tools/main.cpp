// plab: run a pressure laboratory experiment described by a JSON config.
//
// Exit codes: 0 all audits passed, 1 audit failure, 2 invalid config,
// 3 resolution cap exceeded.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "pressurelab/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"pressurelab experiment runner"};
  std::string config_path;
  std::string output_dir = "out";
  int workers = 0;
  std::string precision;
  std::uint64_t seed = 0;
  bool validate_only = false;
  app.add_option("config", config_path, "path to the JSON config document")->required();
  app.add_option("--output-dir", output_dir, "directory for the emitted tables");
  app.add_option("--workers", workers, "worker threads for per-n computations");
  app.add_option("--precision", precision, "float or exact")
      ->check(CLI::IsMember({"float", "exact"}));
  app.add_option("--seed", seed, "determinism seed override");
  app.add_flag("--validate-only", validate_only, "only print diagnostics, do not run");
  CLI11_PARSE(app, argc, argv);

  std::string text;
  {
    std::ifstream f(config_path, std::ios::binary);
    if (!f) {
      std::cerr << "cannot read config file " << config_path << "\n";
      return 2;
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  }

  if (validate_only) {
    const auto diags = plab::validate_text(text);
    std::cout << plab::diagnostics_to_json(diags);
    return diags.empty() ? 0 : 2;
  }

  std::optional<plab::ExperimentConfig> cfg;
  try {
    cfg = plab::parse_config(text);
  } catch (const plab::ConfigError& e) {
    std::cout << plab::diagnostics_to_json({{e.path, e.message}});
    return 2;
  }
  if (app.count("--workers") > 0) cfg->workers = workers;
  if (app.count("--seed") > 0) cfg->seed = seed;
  if (precision == "float") cfg->precision = plab::Precision::Float;
  if (precision == "exact") cfg->precision = plab::Precision::Exact;

  const auto diags = plab::validate(*cfg);
  if (!diags.empty()) {
    std::cout << plab::diagnostics_to_json(diags);
    return 2;
  }

  try {
    const plab::RunManifest man = plab::run(*cfg, output_dir);
    std::cout << "wrote " << man.outputs.size() << " files to " << output_dir << " (audits: "
              << man.audits_passed << " passed, " << man.audits_failed << " failed)\n";
    return man.audits_failed == 0 ? 0 : 1;
  } catch (const plab::TaskCapError& e) {
    std::cerr << "resolution cap exceeded in task " << e.task << " (needs resolution "
              << e.required << ", cap " << e.cap << ")\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
