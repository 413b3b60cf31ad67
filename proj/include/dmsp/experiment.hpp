#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dmsp/checks.hpp"
#include "dmsp/image.hpp"

namespace dmsp {

// Knobs for one synthetic recovery experiment: `trials` coupled
// centralized/decentralized runs on fresh instances, traced to CSV.
struct SynthConfig {
  int n = 25;
  int p = 10000;
  double theta = 0.1;
  int nodes = 36;
  double edge_prob = 0.2;
  int iterations = 15;
  int t_c = 3;
  int trials = 5;
  std::uint64_t seed = 42;
  bool directed = false;
  std::string init = "identity";  // identity | random
  bool timing = false;  // record wall clock per iteration (breaks run-to-run
                        // byte identity of the CSV; off by default)
  std::string out;      // CSV path, empty = don't write
};

// Throws invalid_argument naming the offending field.
void validate(const SynthConfig& cfg);

struct SynthSummary {
  std::vector<double> final_max_recovery;  // per trial, max over nodes
  std::vector<double> msp_final_recovery;  // per trial
  double mean_final_max_recovery = 0.0;
};

// Runs the experiment, writes the trace CSV (schema below), and returns the
// summary. CSV columns: t,node,recovery_error,delta,delta_c,objective,wall_ms.
// node = -1 carries the centralized run: its delta/delta_c columns hold the
// max over nodes (single-scalar deviation summaries). `# trial k` comment
// lines separate trials; a final `# summary ...` comment repeats the mean.
SynthSummary run_synth(const SynthConfig& cfg);

struct DenoiseReport {
  double corrupted_psnr = 0.0;
  double denoised_psnr = 0.0;
  long thresholded_coeffs = 0;
  long degenerate_projections = 0;
};

// Reads a PGM, adds N(0, variance) noise (seeded from cfg.seed), denoises,
// writes the result to out_path (empty = don't write), and reports both PSNRs
// measured against the clean input.
DenoiseReport run_denoise(const std::string& image_path, double variance,
                          const DenoiseConfig& cfg, const std::string& out_path);

struct TheoryRunResult {
  std::vector<CheckReport> reports;
  long violations = 0;
};

// Runs the named check grid ("default" only), writes the report CSV when
// out_path is non-empty.
TheoryRunResult run_theory_checks(const std::string& grid, std::uint64_t seed,
                                  const std::string& out_path);

}  // namespace dmsp
