#pragma once

#include <vector>

#include "dmsp/linalg.hpp"
#include "dmsp/rng.hpp"

namespace dmsp {

// Contiguous column slice [begin, begin+count) of an observation matrix.
struct ColRange {
  int begin = 0;
  int count = 0;
};

// A synthetic orthogonal dictionary-learning problem: observations y = d_o * x
// with x Bernoulli-Gaussian, plus an approximately even column partition
// across nodes.
struct ProblemInstance {
  int n = 0;
  int p = 0;
  double theta = 0.0;
  Matrix d_o;  // orthogonal ground truth
  Matrix x;    // sparse codes
  Matrix y;    // d_o * x
  std::vector<ColRange> partition;

  int nodes() const { return static_cast<int>(partition.size()); }
  Eigen::Ref<const Matrix> local(int i) const {
    return y.middleCols(partition[i].begin, partition[i].count);
  }
};

// Each entry = Bernoulli(theta) mask times a standard Gaussian.
Matrix sample_bg(int n, int p, double theta, Rng& rng);

// Even contiguous partition of p columns over n_nodes; the first p % n_nodes
// ranges get the extra column.
std::vector<ColRange> partition_columns(int p, int n_nodes);

ProblemInstance make_instance(int n, int p, double theta, int n_nodes, Rng& rng);

// E[(u x)^o3 x^T] for x with iid BG(theta) columns, p of them:
// 3 p theta (1-theta) u^o3 + 3 p theta^2 u.
Matrix expected_gradient(const Matrix& u, double p, double theta);

// E[(u x)^o3 (u x)^T] under the same model:
// 3 p theta (1-theta) (u^o3) u^T + 3 p theta^2 I.
Matrix expected_cubic_gram(const Matrix& u, double p, double theta);

}  // namespace dmsp
