#include "dmsp/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "dmsp/data.hpp"
#include "dmsp/learner.hpp"
#include "dmsp/network.hpp"
#include "dmsp/parallel.hpp"

namespace dmsp {

namespace {

void append_num(std::string& s, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  s += buf;
}

void append_row(std::string& s, int t, int node, double recovery, double delta,
                double delta_c, double objective, double wall_ms) {
  char head[40];
  std::snprintf(head, sizeof head, "%d,%d,", t, node);
  s += head;
  append_num(s, recovery);
  s += ',';
  append_num(s, delta);
  s += ',';
  append_num(s, delta_c);
  s += ',';
  append_num(s, objective);
  s += ',';
  append_num(s, wall_ms);
  s += '\n';
}

constexpr std::uint64_t kNetTag = 0x6e6574;  // network snapshot stream
constexpr std::uint64_t kInitTag = 0x696e6974;  // random-A0 stream

}  // namespace

void validate(const SynthConfig& cfg) {
  if (cfg.n <= 0) throw std::invalid_argument("config: n must be positive");
  if (cfg.p <= 0) throw std::invalid_argument("config: p must be positive");
  if (!(cfg.theta > 0.0 && cfg.theta < 1.0))
    throw std::invalid_argument("config: theta must be in (0,1)");
  if (cfg.nodes <= 0)
    throw std::invalid_argument("config: nodes must be positive");
  if (cfg.nodes > cfg.p)
    throw std::invalid_argument("config: nodes must not exceed p");
  if (!(cfg.edge_prob >= 0.0 && cfg.edge_prob <= 1.0))
    throw std::invalid_argument("config: edge-prob must be in [0,1]");
  if (cfg.iterations <= 0)
    throw std::invalid_argument("config: iters must be positive");
  if (cfg.t_c < 0)
    throw std::invalid_argument("config: tc must be non-negative");
  if (cfg.trials <= 0)
    throw std::invalid_argument("config: trials must be positive");
  if (cfg.init != "identity" && cfg.init != "random")
    throw std::invalid_argument("config: init must be identity or random");
}

SynthSummary run_synth(const SynthConfig& cfg) {
  validate(cfg);
  SynthSummary summary;
  summary.final_max_recovery.resize(cfg.trials);
  summary.msp_final_recovery.resize(cfg.trials);
  std::vector<std::string> sections(cfg.trials);

  double trial_flops = 8.0 * cfg.n * cfg.n * cfg.p * cfg.iterations;
  parallel_for(cfg.trials, trial_flops, [&](int k) {
    std::uint64_t trial_seed = cfg.seed + static_cast<std::uint64_t>(k);
    Rng rng(trial_seed);
    ProblemInstance inst = make_instance(cfg.n, cfg.p, cfg.theta, cfg.nodes, rng);

    Matrix a0;
    if (cfg.init == "random") {
      Rng init_rng(Rng::derive(trial_seed, kInitTag, 0));
      a0 = random_orthogonal(cfg.n, init_rng);
    } else {
      a0 = Matrix::Identity(cfg.n, cfg.n);
    }

    TimeVaryingNetwork net{cfg.nodes, cfg.edge_prob, cfg.directed,
                           Rng::derive(trial_seed, kNetTag, 0)};

    MspRun msp = msp_run(inst.y, cfg.iterations, a0, &inst.d_o);
    DmspRun dec = dmsp_run(inst, net, cfg.iterations, cfg.t_c, a0, &msp);

    std::string& s = sections[k];
    char head[32];
    std::snprintf(head, sizeof head, "# trial %d\n", k);
    s += head;
    for (int t = 1; t <= cfg.iterations; ++t) {
      const IterRecord& rec = dec.trace[t - 1];
      double delta_max = *std::max_element(rec.delta.begin(), rec.delta.end());
      double delta_c_max =
          *std::max_element(rec.delta_c.begin(), rec.delta_c.end());
      double msp_ms = cfg.timing ? msp.wall_ms[t - 1] : 0.0;
      double dec_ms = cfg.timing ? rec.wall_ms : 0.0;
      append_row(s, t, -1, msp.recovery[t], delta_max, delta_c_max,
                 msp.objectives[t], msp_ms);
      for (int i = 0; i < cfg.nodes; ++i)
        append_row(s, t, i, rec.recovery[i], rec.delta[i], rec.delta_c[i],
                   rec.objective[i], dec_ms);
    }
    const IterRecord& last = dec.trace.back();
    summary.final_max_recovery[k] =
        *std::max_element(last.recovery.begin(), last.recovery.end());
    summary.msp_final_recovery[k] = msp.recovery.back();
  });

  summary.mean_final_max_recovery =
      std::accumulate(summary.final_max_recovery.begin(),
                      summary.final_max_recovery.end(), 0.0) /
      cfg.trials;

  if (!cfg.out.empty()) {
    std::ofstream out(cfg.out, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + cfg.out);
    out << "t,node,recovery_error,delta,delta_c,objective,wall_ms\n";
    for (const auto& s : sections) out << s;
    std::string tail = "# summary mean_final_max_recovery_error ";
    append_num(tail, summary.mean_final_max_recovery);
    tail += '\n';
    out << tail;
    if (!out) throw std::runtime_error("short write to " + cfg.out);
  }
  return summary;
}

DenoiseReport run_denoise(const std::string& image_path, double variance,
                          const DenoiseConfig& cfg,
                          const std::string& out_path) {
  if (!(variance > 0.0))
    throw std::invalid_argument("config: variance must be positive");
  GrayImage clean = read_pgm(image_path);
  Rng noise_rng(Rng::derive(cfg.seed, 0x6e6f697365, 0));
  GrayImage noisy = add_gaussian_noise(clean, variance, noise_rng);

  DenoiseReport report;
  report.corrupted_psnr = psnr(clean, noisy);
  DenoiseResult res = denoise(noisy, std::sqrt(variance), cfg);
  report.denoised_psnr = psnr(clean, res.output);
  report.thresholded_coeffs = res.thresholded_coeffs;
  report.degenerate_projections = res.degenerate_projections;
  if (!out_path.empty()) write_pgm(out_path, res.output);
  return report;
}

TheoryRunResult run_theory_checks(const std::string& grid, std::uint64_t seed,
                                  const std::string& out_path) {
  if (grid != "default")
    throw std::invalid_argument("config: grid must be \"default\"");
  TheoryRunResult res;
  res.reports = run_default_grid(seed);
  res.violations = total_violations(res.reports);
  if (!out_path.empty()) write_checks_csv(out_path, res.reports);
  return res;
}

}  // namespace dmsp
