#include "dmsp/network.hpp"

#include <stdexcept>

namespace dmsp {

int GraphSnapshot::out_degree_incl(int j) const {
  int d = 1;
  for (int i = 0; i < nodes; ++i)
    if (adj[j][i]) ++d;
  return d;
}

int GraphSnapshot::degree_incl(int i) const {
  int d = 1;
  for (int j = 0; j < nodes; ++j)
    if (adj[i][j]) ++d;
  return d;
}

GraphSnapshot gen_er_snapshot(int n_nodes, double edge_prob, bool directed,
                              Rng& rng) {
  if (edge_prob < 0.0 || edge_prob > 1.0)
    throw std::invalid_argument("gen_er_snapshot: edge_prob outside [0,1]");
  GraphSnapshot g;
  g.nodes = n_nodes;
  g.directed = directed;
  g.adj.assign(n_nodes, std::vector<bool>(n_nodes, false));
  if (directed) {
    for (int i = 0; i < n_nodes; ++i)
      for (int j = 0; j < n_nodes; ++j)
        if (i != j && rng.bernoulli(edge_prob)) g.adj[i][j] = true;
  } else {
    for (int i = 0; i < n_nodes; ++i)
      for (int j = i + 1; j < n_nodes; ++j)
        if (rng.bernoulli(edge_prob)) g.adj[i][j] = g.adj[j][i] = true;
  }
  return g;
}

GraphSnapshot union_snapshot(const std::vector<GraphSnapshot>& snaps) {
  if (snaps.empty()) throw std::invalid_argument("union_snapshot: empty list");
  GraphSnapshot g = snaps.front();
  for (const auto& s : snaps) {
    if (s.nodes != g.nodes)
      throw std::invalid_argument("union_snapshot: node count mismatch");
    g.directed = g.directed || s.directed;
    for (int i = 0; i < g.nodes; ++i)
      for (int j = 0; j < g.nodes; ++j)
        if (s.adj[i][j]) g.adj[i][j] = true;
  }
  return g;
}

namespace {

// Nodes reachable from 0 along edges selected by fwd (true: i->j as stored,
// false: reversed).
int reach_count(const GraphSnapshot& g, bool fwd) {
  std::vector<char> seen(g.nodes, 0);
  std::vector<int> stack = {0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w = 0; w < g.nodes; ++w) {
      bool e = fwd ? g.adj[v][w] : g.adj[w][v];
      if (e && !seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count;
}

}  // namespace

bool is_strongly_connected(const GraphSnapshot& g) {
  if (g.nodes == 0) return false;
  if (g.nodes == 1) return true;
  return reach_count(g, true) == g.nodes && reach_count(g, false) == g.nodes;
}

Matrix metropolis_weights(const GraphSnapshot& g) {
  if (g.directed)
    throw std::invalid_argument("metropolis_weights: undirected snapshot required");
  int n = g.nodes;
  Matrix w = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double off = 0.0;
    for (int j = 0; j < n; ++j) {
      if (!g.adj[i][j]) continue;
      w(i, j) = 1.0 / std::max(g.degree_incl(i), g.degree_incl(j));
      off += w(i, j);
    }
    w(i, i) = 1.0 - off;
  }
  return w;
}

Matrix push_weights(const GraphSnapshot& g) {
  if (!g.directed)
    throw std::invalid_argument("push_weights: directed snapshot required");
  int n = g.nodes;
  Matrix w = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    double share = 1.0 / g.out_degree_incl(j);
    w(j, j) = share;
    for (int i = 0; i < n; ++i)
      if (g.adj[j][i]) w(i, j) = share;
  }
  return w;
}

std::vector<Matrix> consensus_round(const std::vector<Matrix>& values,
                                    const Matrix& w) {
  int n = static_cast<int>(values.size());
  if (w.rows() != n || w.cols() != n)
    throw std::invalid_argument("consensus_round: weight size mismatch");
  for (int i = 1; i < n; ++i)
    if (values[i].rows() != values[0].rows() ||
        values[i].cols() != values[0].cols())
      throw std::invalid_argument("consensus_round: value shape mismatch");
  std::vector<Matrix> out(n);
  for (int i = 0; i < n; ++i) {
    Matrix acc = Matrix::Zero(values[0].rows(), values[0].cols());
    for (int j = 0; j < n; ++j)
      if (w(i, j) != 0.0) acc += w(i, j) * values[j];
    out[i] = std::move(acc);
  }
  return out;
}

GraphSnapshot TimeVaryingNetwork::snapshot(int t, int s) const {
  Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(t),
                      static_cast<std::uint64_t>(s)));
  return gen_er_snapshot(nodes, edge_prob, directed, rng);
}

std::vector<Matrix> consensus_average(const std::vector<Matrix>& values,
                                      const TimeVaryingNetwork& net, int t,
                                      int t_c) {
  std::vector<Matrix> cur = values;
  for (int s = 0; s < t_c; ++s)
    cur = consensus_round(cur, net.weights(net.snapshot(t, s)));
  return cur;
}

}  // namespace dmsp
