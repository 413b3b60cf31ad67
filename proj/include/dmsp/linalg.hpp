#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "dmsp/rng.hpp"

namespace dmsp {

using Matrix = Eigen::MatrixXd;

// Sum of fourth powers of all entries (the fourth power of the entrywise
// l4 norm).
double l4_norm4(const Matrix& m);

// Entrywise cube, preserving sign.
Matrix hadamard_pow3(const Matrix& m);

// Orthogonal polar factor UV^T of a full SVD of z: the orthogonal matrix
// maximizing <Q, z>. When sigma_min/sigma_max < 1e-12 the factor is not
// unique; the SVD's choice is returned and *degenerate (if given) is set.
Matrix polar_project(const Matrix& z, bool* degenerate = nullptr);

// Haar-uniform orthogonal matrix: QR of an iid standard Gaussian matrix with
// the R diagonal signs normalized to +1.
Matrix random_orthogonal(int n, Rng& rng);

// One +/-1 entry per row and column; orthogonal by construction.
struct SignedPermutation {
  std::vector<int> perm;   // row i has its nonzero in column perm[i]
  std::vector<double> sign;

  Matrix to_matrix() const;
  int size() const { return static_cast<int>(perm.size()); }
};

SignedPermutation random_signed_permutation(int n, Rng& rng);

// The signed permutation closest to u in Frobenius norm, via maximum-weight
// assignment on |u_ij| (Hungarian method); signs copied from the matched
// entries.
SignedPermutation nearest_signed_permutation(const Matrix& u);

// min_i { |a_ii| - (sum_{j!=i}|a_ij| + sum_{j!=i}|a_ji|)/2 }. A lower bound
// on the smallest singular value whenever it is positive.
double gersgorin_sigma_min_bound(const Matrix& a);

double frobenius(const Matrix& m);

bool is_orthogonal(const Matrix& q, double tol = 1e-10);

// Text dump: first line "rows cols", then one line per row of %.17g values.
void write_matrix(const std::string& path, const Matrix& m);
Matrix read_matrix(const std::string& path);

}  // namespace dmsp
