#pragma once

#include <functional>
#include <vector>

#include "dmsp/data.hpp"
#include "dmsp/network.hpp"

namespace dmsp {

// 4 (a y_loc)^o3 y_loc^T — the local ascent direction of ||a y_loc||_4^4 on
// node data y_loc.
Matrix local_gradient(const Matrix& a, const Eigen::Ref<const Matrix>& y_loc);

// |1 - ||a d_o||_4^4 / n|; zero exactly at a = (signed permutation) d_o^T.
double recovery_error(const Matrix& a, const Matrix& d_o);

struct MspRun {
  std::vector<Matrix> iterates;    // T+1 entries, iterates[0] = a0
  std::vector<double> objectives;  // ||A^(t) y||_4^4 per iterate, T+1 entries
  std::vector<double> recovery;    // vs d_o when supplied, else empty
  std::vector<double> wall_ms;     // per completed iteration, T entries
  long degenerate_projections = 0;

  const Matrix& final_a() const { return iterates.back(); }
};

// Gradient-then-polar-projection for T iterations on the full observation
// matrix.
MspRun msp_run(const Matrix& y, int iterations, const Matrix& a0,
               const Matrix* d_o = nullptr);

struct DmspState {
  std::vector<Matrix> a_list;
  int t = 0;
};

// Everything produced during one completed outer iteration, for metric
// observers. References stay valid only during the callback.
struct IterView {
  int t = 0;  // 1-based completed iteration
  const std::vector<Matrix>& analysis;  // A_i^(t-1) y_i per node
  const std::vector<Matrix>& grads;     // pre-consensus local gradients
  const std::vector<Matrix>& mixed;     // post-consensus gradients
  const std::vector<Matrix>& a_list;    // A_i^(t)
  double wall_ms = 0.0;
};

using IterObserver = std::function<void(const IterView&)>;

struct LearnResult {
  std::vector<Matrix> a_list;
  std::vector<long> degenerate_per_node;
};

// The decentralized iteration on a raw observation matrix: per-node gradients
// over partition slices, t_c consensus rounds with fresh snapshots, per-node
// polar projection. The on_iteration callback (optional) sees every completed
// iteration; per-node analysis matrices are materialized only when it is set.
LearnResult dmsp_learn(const Matrix& y, const std::vector<ColRange>& partition,
                       const TimeVaryingNetwork& net, int iterations, int t_c,
                       const Matrix& a0,
                       const IterObserver& on_iteration = nullptr);

// One completed outer iteration of the decentralized run. Vector entries are
// per node; delta entries require a coupled centralized run and are empty
// otherwise.
struct IterRecord {
  std::vector<double> recovery;   // per node, empty without d_o
  std::vector<double> delta;      // ||A^(t) - A_i^(t)||_F vs coupled run
  std::vector<double> delta_c;    // post-consensus gradient vs exact mean
  std::vector<double> objective;  // ||A_i y_i||_4^4 on local data
  double wall_ms = 0.0;
};

struct DmspRun {
  DmspState state;
  std::vector<IterRecord> trace;  // entries for t = 1..T
  std::vector<long> degenerate_per_node;
};

// Full decentralized iteration: local gradients, t_c consensus rounds with
// fresh snapshots, per-node polar projection. When `coupled` is given it must
// come from the same instance and a0; per-node deviations against its
// iterates are recorded.
DmspRun dmsp_run(const ProblemInstance& inst, const TimeVaryingNetwork& net,
                 int iterations, int t_c, const Matrix& a0,
                 const MspRun* coupled = nullptr);

// max_i ||a_msp - a_i||_F over the state's nodes.
double deviation_delta(const Matrix& a_msp, const DmspState& state);

// max_i ||after_i - exact_mean||_F.
double consensus_deviation(const std::vector<Matrix>& values_after,
                           const Matrix& exact_mean);

}  // namespace dmsp
