// fdsnet: generate the synthetic corpus, train both networks, evaluate.
#include <CLI11.hpp>
#include <iostream>
#include <optional>

#include "fds/pipeline/config.hpp"
#include "fds/pipeline/pipeline.hpp"

namespace pl = fds::pipeline;

int main(int argc, char** argv) {
  CLI::App app{"Light-field finger-dorsal presentation attack detection pipeline"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "key=value config file (defaults apply when omitted)");
  app.add_option("--out", out_dir, "output directory (overrides out_dir)");
  app.add_option("--seed", seed, "master seed (overrides master_seed)");

  using Cmd = void (*)(const pl::PipelineConfig&, std::ostream&);
  const std::pair<const char*, Cmd> verbs[] = {
      {"gen", pl::cmd_gen},
      {"train-depth", pl::cmd_train_depth},
      {"train-clf", pl::cmd_train_clf},
      {"eval", pl::cmd_eval},
      {"report", pl::cmd_report},
  };
  const char* help[] = {"render the light-field dataset and its manifest", "train the depth network",
                        "train the spoof classifiers", "evaluate on the test split",
                        "print the summary table from existing metrics"};
  for (std::size_t i = 0; i < std::size(verbs); ++i) app.add_subcommand(verbs[i].first, help[i]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    auto cfg = config_path.empty() ? pl::PipelineConfig{} : pl::load_config(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed) cfg.master_seed = *seed;
    cfg.validate();
    for (const auto& [name, cmd] : verbs)
      if (app.got_subcommand(name)) cmd(cfg, std::cout);
  } catch (const fds::Error& e) {
    std::cerr << "fdsnet: " << e.what() << "\n";
    return pl::exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "fdsnet: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
