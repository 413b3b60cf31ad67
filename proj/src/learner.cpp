#include "dmsp/learner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "dmsp/parallel.hpp"

namespace dmsp {

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

Matrix local_gradient(const Matrix& a, const Eigen::Ref<const Matrix>& y_loc) {
  if (a.cols() != y_loc.rows())
    throw std::invalid_argument("local_gradient: shape mismatch");
  return 4.0 * hadamard_pow3(a * y_loc) * y_loc.transpose();
}

double recovery_error(const Matrix& a, const Matrix& d_o) {
  if (a.cols() != d_o.rows())
    throw std::invalid_argument("recovery_error: shape mismatch");
  return std::abs(1.0 - l4_norm4(a * d_o) / static_cast<double>(d_o.rows()));
}

MspRun msp_run(const Matrix& y, int iterations, const Matrix& a0,
               const Matrix* d_o) {
  if (!is_orthogonal(a0, 1e-8))
    throw std::invalid_argument("msp_run: a0 is not orthogonal");
  MspRun run;
  run.iterates.reserve(iterations + 1);
  run.iterates.push_back(a0);
  Matrix z = a0 * y;
  run.objectives.push_back(l4_norm4(z));
  if (d_o) run.recovery.push_back(recovery_error(a0, *d_o));
  for (int t = 0; t < iterations; ++t) {
    auto t0 = std::chrono::steady_clock::now();
    Matrix grad = 4.0 * hadamard_pow3(z) * y.transpose();
    bool degenerate = false;
    Matrix a = polar_project(grad, &degenerate);
    if (degenerate) ++run.degenerate_projections;
    z = a * y;
    run.objectives.push_back(l4_norm4(z));
    if (d_o) run.recovery.push_back(recovery_error(a, *d_o));
    run.wall_ms.push_back(ms_since(t0));
    run.iterates.push_back(std::move(a));
  }
  return run;
}

LearnResult dmsp_learn(const Matrix& y, const std::vector<ColRange>& partition,
                       const TimeVaryingNetwork& net, int iterations, int t_c,
                       const Matrix& a0, const IterObserver& on_iteration) {
  if (!is_orthogonal(a0, 1e-8))
    throw std::invalid_argument("dmsp_learn: a0 is not orthogonal");
  int n_nodes = static_cast<int>(partition.size());
  if (n_nodes != net.nodes)
    throw std::invalid_argument("dmsp_learn: partition/network node mismatch");
  int n = static_cast<int>(a0.rows());

  LearnResult res;
  res.a_list.assign(n_nodes, a0);
  res.degenerate_per_node.assign(n_nodes, 0);

  double cols_per_node = static_cast<double>(y.cols()) / n_nodes;
  double grad_flops = 4.0 * n * n * cols_per_node;

  std::vector<Matrix> analysis;  // kept only for observers
  std::vector<Matrix> grads(n_nodes);
  for (int t = 0; t < iterations; ++t) {
    auto t0 = std::chrono::steady_clock::now();
    if (on_iteration) analysis.assign(n_nodes, Matrix());
    parallel_for(n_nodes, grad_flops, [&](int i) {
      auto y_loc = y.middleCols(partition[i].begin, partition[i].count);
      Matrix z = res.a_list[i] * y_loc;
      grads[i] = 4.0 * hadamard_pow3(z) * y_loc.transpose();
      if (on_iteration) analysis[i] = std::move(z);
    });

    std::vector<Matrix> mixed = consensus_average(grads, net, t, t_c);

    parallel_for(n_nodes, 30.0 * n * n * n, [&](int i) {
      bool degenerate = false;
      res.a_list[i] = polar_project(mixed[i], &degenerate);
      if (degenerate) ++res.degenerate_per_node[i];
    });

    if (on_iteration)
      on_iteration(
          IterView{t + 1, analysis, grads, mixed, res.a_list, ms_since(t0)});
  }
  return res;
}

DmspRun dmsp_run(const ProblemInstance& inst, const TimeVaryingNetwork& net,
                 int iterations, int t_c, const Matrix& a0,
                 const MspRun* coupled) {
  if (coupled && static_cast<int>(coupled->iterates.size()) < iterations + 1)
    throw std::invalid_argument("dmsp_run: coupled run too short");
  int n_nodes = inst.nodes();

  DmspRun run;
  run.trace.reserve(iterations);
  auto observe = [&](const IterView& view) {
    IterRecord rec;
    rec.wall_ms = view.wall_ms;
    rec.objective.resize(n_nodes);
    rec.delta_c.resize(n_nodes);
    rec.recovery.resize(n_nodes);
    Matrix exact_mean = Matrix::Zero(inst.n, inst.n);
    for (const auto& g : view.grads) exact_mean += g;
    exact_mean /= static_cast<double>(n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
      rec.objective[i] = l4_norm4(view.analysis[i]);
      rec.delta_c[i] = (view.mixed[i] - exact_mean).norm();
      rec.recovery[i] = recovery_error(view.a_list[i], inst.d_o);
    }
    if (coupled) {
      rec.delta.resize(n_nodes);
      const Matrix& a_msp = coupled->iterates[view.t];
      for (int i = 0; i < n_nodes; ++i)
        rec.delta[i] = (a_msp - view.a_list[i]).norm();
    }
    run.trace.push_back(std::move(rec));
  };

  LearnResult res = dmsp_learn(inst.y, inst.partition, net, iterations, t_c,
                               a0, observe);
  run.state.a_list = std::move(res.a_list);
  run.state.t = iterations;
  run.degenerate_per_node = std::move(res.degenerate_per_node);
  return run;
}

double deviation_delta(const Matrix& a_msp, const DmspState& state) {
  double worst = 0.0;
  for (const auto& a : state.a_list)
    worst = std::max(worst, (a_msp - a).norm());
  return worst;
}

double consensus_deviation(const std::vector<Matrix>& values_after,
                           const Matrix& exact_mean) {
  double worst = 0.0;
  for (const auto& v : values_after)
    worst = std::max(worst, (v - exact_mean).norm());
  return worst;
}

}  // namespace dmsp
