// slumber: command-line front end for the analysis library.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "slumber/config.hpp"
#include "slumber/error.hpp"
#include "slumber/pipeline.hpp"

namespace {

struct GlobalFlags {
  std::string dataset;
  std::string out;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> papers;
};

int run_command(const std::string& name, const GlobalFlags& flags) {
  using namespace slumber;
  try {
    KeyValues kv;
    if (!flags.config.empty()) kv = read_key_values(flags.config);

    if (name == "synth") {
      SynthSpec spec;
      apply_synth_config(spec, kv);
      if (flags.seed) spec.seed = *flags.seed;
      if (flags.papers) spec.n_papers = *flags.papers;
      if (flags.out.empty()) throw Error(ErrorKind::Io, "synth needs --out");
      return cmd_synth(spec, flags.out, std::cerr);
    }

    RunConfig config;
    apply_run_config(config, kv);
    config.dataset_dir = flags.dataset;
    config.output_dir = flags.out;
    if (config.dataset_dir.empty()) throw Error(ErrorKind::Io, "no dataset directory (--dataset)");

    if (name == "validate") return cmd_validate(config, std::cerr);
    if (name == "profile") return cmd_profile(config, std::cerr);
    if (name == "cohort") return cmd_cohort(config, std::cerr);
    if (name == "patents") return cmd_patents(config, std::cerr);
    if (name == "table1") return cmd_table1(config, std::cerr);
    if (name == "lag-trend") return cmd_lag_trend(config, std::cerr);
    if (name == "interactions") return cmd_interactions(config, std::cerr);
    if (name == "aagr") return cmd_aagr(config, std::cerr);
    if (name == "flag-contexts") return cmd_flag_contexts(config, std::cerr);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::Io ? kExitIo : kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  std::cerr << "error: unknown command " << name << '\n';
  return kExitData;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delayed-recognition and patent-linkage analysis for citation datasets"};
  app.require_subcommand(1);

  GlobalFlags flags;
  app.add_option("--dataset", flags.dataset, "Dataset directory");
  app.add_option("--out", flags.out, "Output directory");
  app.add_option("--config", flags.config, "key = value configuration file");
  app.add_option("--seed", flags.seed, "Random seed (synth only)");
  app.add_option("--papers", flags.papers, "Number of papers (synth only)");

  const std::pair<const char*, const char*> commands[] = {
      {"validate", "Check a dataset and report issues"},
      {"profile", "Bcp and turning point per paper"},
      {"cohort", "Delayed / instant recognition cohorts and percentiles"},
      {"patents", "Patent indicators per paper"},
      {"table1", "DR versus IR comparison of patent outcomes"},
      {"lag-trend", "Windowed trends of patent citation lags"},
      {"interactions", "Field of study by WIPO technology field matrices"},
      {"aagr", "Average annual growth of citations after the turning year"},
      {"flag-contexts", "Flag citation sentences containing negative terms"},
      {"synth", "Generate a synthetic dataset"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? slumber::kExitOk : slumber::kExitData;
  }
  return run_command(app.get_subcommands().front()->get_name(), flags);
}
