#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "dmsp/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Orthogonal dictionary learning by l4-norm maximization, "
               "centralized and decentralized over simulated networks"};
  app.require_subcommand(1);
  // Config handling lives on the top-level app: CLI11 only reads config
  // files for the root parser. fallthrough() lets "--config" appear after
  // the subcommand name; inside the file, keys live in a [synth], [denoise],
  // or [theory-check] section. Explicit command-line flags take precedence.
  app.fallthrough();
  app.set_config("--config", "",
                 "key=value config file with a [synth], [denoise], or "
                 "[theory-check] section");
  app.allow_config_extras(CLI::config_extras_mode::error);

  dmsp::SynthConfig synth;
  auto* cmd_synth = app.add_subcommand(
      "synth", "Coupled centralized/decentralized recovery experiment");
  cmd_synth->add_option("--n", synth.n, "dictionary dimension");
  cmd_synth->add_option("--p", synth.p, "total sample columns");
  cmd_synth->add_option("--theta", synth.theta, "Bernoulli-Gaussian sparsity");
  cmd_synth->add_option("--nodes", synth.nodes, "network size");
  cmd_synth->add_option("--edge-prob", synth.edge_prob,
                        "per-snapshot edge probability");
  cmd_synth->add_option("--iters", synth.iterations, "outer iterations");
  cmd_synth->add_option("--tc", synth.t_c, "consensus rounds per iteration");
  cmd_synth->add_option("--trials", synth.trials, "independent trials");
  cmd_synth->add_option("--seed", synth.seed, "base seed; trial k uses seed+k");
  cmd_synth->add_option("--out", synth.out, "trace CSV path");
  cmd_synth->add_flag("--directed", synth.directed,
                      "directed snapshots with push weights");
  cmd_synth->add_option("--init", synth.init, "identity | random")
      ->check(CLI::IsMember({"identity", "random"}));
  cmd_synth->add_flag("--timing", synth.timing,
                      "record wall_ms (breaks byte-identical reruns)");

  std::string image_path, denoise_out;
  double variance = 0.0025;
  dmsp::DenoiseConfig den;
  auto* cmd_den = app.add_subcommand(
      "denoise", "Patch-transform denoising with a decentralized-learned "
                 "orthogonal dictionary");
  cmd_den->add_option("--image", image_path, "input 8-bit PGM (P5)")
      ->required();
  cmd_den->add_option("--variance", variance, "added Gaussian noise variance");
  cmd_den->add_option("--iters", den.iterations, "outer iterations");
  cmd_den->add_option("--tc", den.t_c, "consensus rounds per iteration");
  cmd_den->add_option("--nodes", den.nodes, "network size");
  cmd_den->add_option("--edge-prob", den.edge_prob,
                      "per-snapshot edge probability");
  cmd_den->add_flag("--directed", den.directed,
                    "directed snapshots with push weights");
  cmd_den->add_option("--seed", den.seed, "seed for noise and snapshots");
  cmd_den->add_option("--threshold-mult", den.threshold_mult,
                      "hard threshold at this multiple of sigma");
  cmd_den->add_flag("--no-mean-removal",
                    [&den](std::int64_t) { den.remove_means = false; },
                    "skip per-patch DC removal");
  cmd_den->add_flag("--fast", den.fast,
                    "learn on every 4th patch, reconstruct from all");
  cmd_den->add_option("--out", denoise_out, "output PGM path");

  std::string grid = "default", checks_out;
  std::uint64_t checks_seed = 42;
  auto* cmd_chk = app.add_subcommand(
      "theory-check", "Numeric validation of the analysis inequalities");
  cmd_chk->add_option("--grid", grid, "grid name (default)");
  cmd_chk->add_option("--seed", checks_seed, "base seed");
  cmd_chk->add_option("--out", checks_out, "report CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_synth) {
      dmsp::SynthSummary s = dmsp::run_synth(synth);
      std::printf("mean final max recovery error: %.6g (%d trials)\n",
                  s.mean_final_max_recovery, synth.trials);
      if (!synth.out.empty()) std::printf("wrote %s\n", synth.out.c_str());
    } else if (*cmd_den) {
      dmsp::DenoiseReport r =
          dmsp::run_denoise(image_path, variance, den, denoise_out);
      std::printf("corrupted PSNR: %.2f dB\n", r.corrupted_psnr);
      std::printf("denoised  PSNR: %.2f dB\n", r.denoised_psnr);
      if (!denoise_out.empty()) std::printf("wrote %s\n", denoise_out.c_str());
    } else if (*cmd_chk) {
      dmsp::TheoryRunResult r =
          dmsp::run_theory_checks(grid, checks_seed, checks_out);
      std::printf("%zu check cells, %ld violations\n", r.reports.size(),
                  r.violations);
      if (!checks_out.empty()) std::printf("wrote %s\n", checks_out.c_str());
      if (r.violations > 0) return 1;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
