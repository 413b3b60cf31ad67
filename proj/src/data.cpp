#include "dmsp/data.hpp"

#include <stdexcept>

namespace dmsp {

Matrix sample_bg(int n, int p, double theta, Rng& rng) {
  if (!(theta > 0.0 && theta < 1.0))
    throw std::invalid_argument("sample_bg: theta must lie in (0,1)");
  Matrix x(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j)
      x(i, j) = rng.bernoulli(theta) ? rng.normal() : 0.0;
  return x;
}

std::vector<ColRange> partition_columns(int p, int n_nodes) {
  if (n_nodes < 1 || n_nodes > p)
    throw std::invalid_argument("partition_columns: need 1 <= nodes <= p");
  std::vector<ColRange> parts(n_nodes);
  int base = p / n_nodes, extra = p % n_nodes, at = 0;
  for (int i = 0; i < n_nodes; ++i) {
    parts[i] = {at, base + (i < extra ? 1 : 0)};
    at += parts[i].count;
  }
  return parts;
}

ProblemInstance make_instance(int n, int p, double theta, int n_nodes, Rng& rng) {
  ProblemInstance inst;
  inst.n = n;
  inst.p = p;
  inst.theta = theta;
  inst.d_o = random_orthogonal(n, rng);
  inst.x = sample_bg(n, p, theta, rng);
  inst.y = inst.d_o * inst.x;
  inst.partition = partition_columns(p, n_nodes);
  return inst;
}

Matrix expected_gradient(const Matrix& u, double p, double theta) {
  return 3.0 * p * theta * (1.0 - theta) * hadamard_pow3(u) +
         3.0 * p * theta * theta * u;
}

Matrix expected_cubic_gram(const Matrix& u, double p, double theta) {
  return 3.0 * p * theta * (1.0 - theta) * hadamard_pow3(u) * u.transpose() +
         3.0 * p * theta * theta * Matrix::Identity(u.rows(), u.cols());
}

}  // namespace dmsp
