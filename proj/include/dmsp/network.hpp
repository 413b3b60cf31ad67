#pragma once

#include <cstdint>
#include <vector>

#include "dmsp/linalg.hpp"
#include "dmsp/rng.hpp"

namespace dmsp {

// One graph in the time-varying sequence. Self-loops are never stored:
// neighborhoods are self-inclusive implicitly. Undirected snapshots keep adj
// symmetric.
struct GraphSnapshot {
  int nodes = 0;
  bool directed = false;
  std::vector<std::vector<bool>> adj;  // adj[i][j]: edge i -> j, i != j

  bool edge(int i, int j) const { return adj[i][j]; }
  // In-neighborhood of i including i itself maps to column support of the
  // weight matrix; out-degree counts j itself.
  int out_degree_incl(int j) const;
  int degree_incl(int i) const;  // undirected degree, self-inclusive
};

GraphSnapshot gen_er_snapshot(int n_nodes, double edge_prob, bool directed,
                              Rng& rng);

// Union of edge sets across snapshots (same node count required).
GraphSnapshot union_snapshot(const std::vector<GraphSnapshot>& snaps);

bool is_strongly_connected(const GraphSnapshot& g);

// Metropolis weights for an undirected snapshot: w_ij = 1/max(|N_i|, |N_j|)
// on edges with self-inclusive neighborhood sizes, diagonal fills each row to
// sum 1. Symmetric and doubly stochastic.
Matrix metropolis_weights(const GraphSnapshot& g);

// Column-stochastic push weights for a directed snapshot:
// w_ij = 1/|N_j,out| whenever j -> i or j == i.
Matrix push_weights(const GraphSnapshot& g);

// value_i' = sum_j w_ij value_j, all nodes synchronously.
std::vector<Matrix> consensus_round(const std::vector<Matrix>& values,
                                    const Matrix& w);

// Seeded generator of per-(outer,inner)-round snapshots; snapshot(t, s) is a
// pure function of (seed, t, s).
struct TimeVaryingNetwork {
  int nodes = 0;
  double edge_prob = 0.0;
  bool directed = false;
  std::uint64_t seed = 0;

  GraphSnapshot snapshot(int t, int s) const;
  Matrix weights(const GraphSnapshot& g) const {
    return directed ? push_weights(g) : metropolis_weights(g);
  }
};

// T_c consensus rounds with a fresh snapshot per round; T_c = 0 returns the
// input unchanged.
std::vector<Matrix> consensus_average(const std::vector<Matrix>& values,
                                      const TimeVaryingNetwork& net, int t,
                                      int t_c);

}  // namespace dmsp
