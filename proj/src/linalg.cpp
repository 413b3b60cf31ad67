#include "dmsp/linalg.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace dmsp {

double l4_norm4(const Matrix& m) {
  return m.array().square().square().sum();
}

Matrix hadamard_pow3(const Matrix& m) { return m.array().cube().matrix(); }

namespace {

template <class Svd>
Matrix polar_from_svd(const Svd& svd, bool* degenerate) {
  const auto& s = svd.singularValues();
  if (degenerate) {
    double smax = s(0);
    double smin = s(s.size() - 1);
    *degenerate = !(smax > 0.0) || smin / smax < 1e-12;
  }
  return svd.matrixU() * svd.matrixV().transpose();
}

}  // namespace

Matrix polar_project(const Matrix& z, bool* degenerate) {
  if (z.rows() != z.cols()) throw std::invalid_argument("polar_project: square matrix required");
  // Jacobi is the more accurate choice for small blocks; divide-and-conquer
  // wins by an order of magnitude once n reaches patch-dictionary sizes.
  if (z.rows() < 32) {
    Eigen::JacobiSVD<Matrix> svd(z, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return polar_from_svd(svd, degenerate);
  }
  Eigen::BDCSVD<Matrix> svd(z, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return polar_from_svd(svd, degenerate);
}

Matrix random_orthogonal(int n, Rng& rng) {
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

Matrix SignedPermutation::to_matrix() const {
  int n = size();
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, perm[i]) = sign[i];
  return m;
}

SignedPermutation random_signed_permutation(int n, Rng& rng) {
  SignedPermutation p;
  p.perm.resize(n);
  p.sign.resize(n);
  for (int i = 0; i < n; ++i) p.perm[i] = i;
  for (int i = n - 1; i > 0; --i) {  // Fisher-Yates
    int j = static_cast<int>(rng.uniform() * (i + 1));
    if (j > i) j = i;
    std::swap(p.perm[i], p.perm[j]);
  }
  for (int i = 0; i < n; ++i) p.sign[i] = rng.bernoulli(0.5) ? 1.0 : -1.0;
  return p;
}

namespace {

// Maximum-weight perfect assignment on an n x n score matrix, O(n^3)
// potentials-and-augmenting-paths scheme. Returns match[row] = column.
std::vector<int> max_assignment(const Matrix& score) {
  int n = static_cast<int>(score.rows());
  Matrix cost = -score;  // minimize
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, n), way(n + 1, n);
  for (int i = 0; i < n; ++i) {
    p[n] = i;
    int j0 = n;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, false);
    do {
      used[j0] = true;
      int i0 = p[j0], j1 = -1;
      double delta = inf;
      for (int j = 0; j < n; ++j) {
        if (used[j]) continue;
        double cur = cost(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != n);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != n);
  }
  std::vector<int> match(n, -1);
  for (int j = 0; j < n; ++j)
    if (p[j] != n) match[p[j]] = j;
  return match;
}

}  // namespace

SignedPermutation nearest_signed_permutation(const Matrix& u) {
  if (u.rows() != u.cols())
    throw std::invalid_argument("nearest_signed_permutation: square matrix required");
  int n = static_cast<int>(u.rows());
  std::vector<int> match = max_assignment(u.cwiseAbs());
  SignedPermutation p;
  p.perm = std::move(match);
  p.sign.resize(n);
  for (int i = 0; i < n; ++i) p.sign[i] = u(i, p.perm[i]) < 0.0 ? -1.0 : 1.0;
  return p;
}

double gersgorin_sigma_min_bound(const Matrix& a) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("gersgorin_sigma_min_bound: square matrix required");
  int n = static_cast<int>(a.rows());
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    double row = 0.0, col = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      row += std::abs(a(i, j));
      col += std::abs(a(j, i));
    }
    best = std::min(best, std::abs(a(i, i)) - 0.5 * (row + col));
  }
  return best;
}

double frobenius(const Matrix& m) { return m.norm(); }

bool is_orthogonal(const Matrix& q, double tol) {
  if (q.rows() != q.cols()) return false;
  int n = static_cast<int>(q.rows());
  return (q * q.transpose() - Matrix::Identity(n, n)).norm() <= tol &&
         (q.transpose() * q - Matrix::Identity(n, n)).norm() <= tol;
}

void write_matrix(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_matrix: cannot open " + path);
  out << m.rows() << " " << m.cols() << "\n";
  char buf[32];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      out << buf << (j + 1 < m.cols() ? " " : "\n");
    }
  }
  if (!out) throw std::runtime_error("write_matrix: write failed for " + path);
}

Matrix read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_matrix: cannot open " + path);
  Eigen::Index rows = 0, cols = 0;
  in >> rows >> cols;
  if (!in || rows <= 0 || cols <= 0)
    throw std::runtime_error("read_matrix: bad header in " + path);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      if (!(in >> m(i, j)))
        throw std::runtime_error("read_matrix: truncated data in " + path);
  return m;
}

}  // namespace dmsp
