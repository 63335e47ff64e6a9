// gammaflow: experiment driver for the vortex/currents laboratory.
//
//   gammaflow <subcommand> --config <file.json> --out <dir> [--seed N] [--threads N]
//
// Exit codes: 0 success, 1 usage/config error, 2 invariant failure.

#include <cstdlib>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "gammaflow/harness.hpp"
#include "gammaflow/version.hpp"

using namespace gammaflow;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

void add_common(CLI::App* sub, CommonArgs& args, bool config_required) {
  auto* cfg = sub->add_option("--config", args.config_path, "experiment config JSON");
  if (config_required) cfg->required();
  sub->add_option("--out", args.out_dir, "output directory")->required();
  sub->add_option_function<std::uint64_t>(
      "--seed", [&args](const std::uint64_t& v) { args.seed = v; }, "seed override");
  sub->add_option_function<int>(
      "--threads", [&args](const int& v) { args.threads = v; }, "thread budget hint");
}

ExperimentConfig load_config(const std::string& experiment, const CommonArgs& args) {
  json doc;
  if (!args.config_path.empty()) {
    doc = json::parse(read_text_file(args.config_path), nullptr, /*allow_exceptions=*/true);
  } else {
    doc = json::object();
  }
  if (!doc.contains("experiment")) doc["experiment"] = experiment;
  ExperimentConfig cfg = parse_config(doc);
  if (cfg.experiment != experiment)
    throw UsageError("config experiment \"" + cfg.experiment + "\" does not match subcommand \"" +
                     experiment + "\"");
  cfg.out_dir = args.out_dir;
  if (args.seed) cfg.seed = *args.seed;
  if (args.threads) {
    cfg.threads = *args.threads;
  } else if (const char* env = std::getenv("GAMMAFLOW_THREADS")) {
    cfg.threads = std::atoi(env);
  }
  if (cfg.threads < 1) cfg.threads = 1;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gammaflow: p-energy, Jacobian, and current-decomposition experiments"};
  app.set_version_flag("--version", GAMMAFLOW_VERSION);
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
    bool config_required;
  };
  const Sub subs[] = {
      {"energy", "p-energy of a lattice field", true},
      {"jacobian", "extract the discrete Jacobian current", true},
      {"decompose", "greedy X + dS decomposition of a 0-current", true},
      {"flatnorm", "flat norm of a 0-current with witness", true},
      {"deform", "deform a closed curve onto the dual 1-skeleton", true},
      {"recover", "recovery map energy at a single p", true},
      {"sweep", "recovery sweep across a p schedule", true},
      {"minimize", "Dirichlet p-energy minimization", false},
      {"selftest", "run the trivial example table of every module", false},
      {"fixtures", "write the bundled fixture inputs and goldens", false},
  };

  std::map<std::string, CommonArgs> args;
  std::map<std::string, CLI::App*> apps;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_common(sub, args[s.name], s.config_required);
    apps[s.name] = sub;
  }

  // Direct flags for minimize (override config values).
  struct MinimizeFlags {
    std::optional<int> degree;
    std::optional<double> p, tol;
    std::optional<int> grid;
    bool variant = false;
    std::optional<std::string> warm_from;
  } mf;
  {
    CLI::App* m = apps["minimize"];
    m->add_option_function<int>("--degree", [&](const int& v) { mf.degree = v; });
    m->add_option_function<double>("--p", [&](const double& v) { mf.p = v; });
    m->add_option_function<int>("--grid", [&](const int& v) { mf.grid = v; });
    m->add_flag("--variant", mf.variant, "use the (1+|grad u|^2)^{p/2} energy");
    m->add_option_function<double>("--tol", [&](const double& v) { mf.tol = v; });
    m->add_option_function<std::string>("--warm-from",
                                        [&](const std::string& v) { mf.warm_from = v; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 1 : 0;
  }

  try {
    for (const auto& s : subs) {
      if (!apps[s.name]->parsed()) continue;
      ExperimentConfig cfg = load_config(s.name, args[s.name]);
      if (std::string(s.name) == "minimize") {
        if (mf.degree) cfg.params["degree"] = *mf.degree;
        if (mf.p) cfg.params["p"] = *mf.p;
        if (mf.grid) cfg.params["grid"] = *mf.grid;
        if (mf.variant) cfg.params["variant"] = true;
        if (mf.tol) cfg.params["tol"] = *mf.tol;
        if (mf.warm_from) cfg.params["warm_from"] = *mf.warm_from;
      }
      run_experiment(cfg);
      return 0;
    }
    std::cerr << "no subcommand selected\n";
    return 1;
  } catch (const InvariantError& e) {
    std::cerr << "invariant failure: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
