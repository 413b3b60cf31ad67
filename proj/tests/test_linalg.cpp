#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <vector>

#include "dmsp/linalg.hpp"
#include "dmsp/rng.hpp"

using dmsp::Matrix;
using dmsp::Rng;

namespace {

Matrix random_matrix(int r, int c, Rng& rng) {
  Matrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = rng.normal();
  return m;
}

// independent scalar-loop oracle
double l4_oracle(const Matrix& m) {
  double acc = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      double v = m(i, j);
      acc += v * v * v * v;
    }
  return acc;
}

// exhaustive search over all signed permutations, n <= 5
double best_signed_perm_score(const Matrix& u) {
  int n = static_cast<int>(u.rows());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = -1e300;
  do {
    double score = 0.0;
    for (int i = 0; i < n; ++i) score += std::abs(u(i, perm[i]));
    best = std::max(best, score);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;  // optimal sign choice contributes |entry| per matched cell
}

double perm_score(const dmsp::SignedPermutation& sp, const Matrix& u) {
  double score = 0.0;
  for (int i = 0; i < sp.size(); ++i)
    score += sp.sign[i] * u(i, sp.perm[i]);
  return score;
}

}  // namespace

TEST_CASE("l4_norm4 matches a scalar loop and hand values") {
  CHECK(dmsp::l4_norm4(Matrix::Identity(7, 7)) == doctest::Approx(7.0));
  Matrix two = 2.0 * Matrix::Identity(3, 3);
  CHECK(dmsp::l4_norm4(two) == doctest::Approx(48.0));  // 3 * 2^4

  Rng rng(1);
  for (int t = 0; t < 10; ++t) {
    Matrix m = random_matrix(5, 7, rng);
    CHECK(dmsp::l4_norm4(m) ==
          doctest::Approx(l4_oracle(m)).epsilon(1e-12));
    // scaling: l4(c m) = c^4 l4(m)
    CHECK(dmsp::l4_norm4(3.0 * m) ==
          doctest::Approx(81.0 * dmsp::l4_norm4(m)).epsilon(1e-12));
  }
}

TEST_CASE("hadamard_pow3 cubes entrywise") {
  Rng rng(2);
  Matrix m = random_matrix(4, 6, rng);
  Matrix c = dmsp::hadamard_pow3(m);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 6; ++j)
      CHECK(c(i, j) == doctest::Approx(m(i, j) * m(i, j) * m(i, j)));
  Matrix neg(1, 3);
  neg << -2.0, 0.0, 0.5;
  Matrix nc = dmsp::hadamard_pow3(neg);
  CHECK(nc(0, 0) == -8.0);
  CHECK(nc(0, 1) == 0.0);
  CHECK(nc(0, 2) == 0.125);
}

TEST_CASE("frobenius matches a scalar loop") {
  Rng rng(3);
  Matrix m = random_matrix(6, 4, rng);
  double acc = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 4; ++j) acc += m(i, j) * m(i, j);
  CHECK(dmsp::frobenius(m) == doctest::Approx(std::sqrt(acc)).epsilon(1e-13));
}

TEST_CASE("polar_project recovers the orthogonal factor of Q * SPD") {
  Rng rng(4);
  for (int n : {3, 8, 40}) {  // 40 exercises the large-n SVD path
    for (int t = 0; t < 3; ++t) {
      Matrix q = dmsp::random_orthogonal(n, rng);
      Matrix m = random_matrix(n, n, rng);
      Matrix spd = m.transpose() * m + static_cast<double>(n) * Matrix::Identity(n, n);
      bool degenerate = true;
      Matrix a = dmsp::polar_project(q * spd, &degenerate);
      CHECK_FALSE(degenerate);
      CHECK(dmsp::is_orthogonal(a, 1e-10));
      CHECK((a - q).norm() <= 1e-9);
    }
  }
}

TEST_CASE("polar_project fixes orthogonal matrices and flags rank collapse") {
  Rng rng(5);
  Matrix q = dmsp::random_orthogonal(6, rng);
  CHECK((dmsp::polar_project(q) - q).norm() <= 1e-12);

  Matrix v = random_matrix(5, 1, rng);
  bool degenerate = false;
  dmsp::polar_project(v * v.transpose(), &degenerate);  // rank one
  CHECK(degenerate);
  degenerate = true;
  dmsp::polar_project(Matrix::Identity(5, 5), &degenerate);
  CHECK_FALSE(degenerate);

  CHECK_THROWS(dmsp::polar_project(Matrix::Zero(3, 4)));
}

TEST_CASE("polar_project maximizes the inner product with z") {
  // <Q, z> over orthogonal Q is maximized at the polar factor, where it
  // equals the nuclear norm; oracle from eigenvalues of z^T z.
  Rng rng(6);
  for (int t = 0; t < 5; ++t) {
    Matrix z = random_matrix(7, 7, rng);
    Matrix a = dmsp::polar_project(z);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(z.transpose() * z);
    double nuclear = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    CHECK((a.transpose() * z).trace() == doctest::Approx(nuclear).epsilon(1e-10));
    // any other orthogonal matrix scores no higher
    Matrix other = dmsp::random_orthogonal(7, rng);
    CHECK((other.transpose() * z).trace() <= nuclear * (1 + 1e-12));
  }
}

TEST_CASE("random_orthogonal is orthogonal and seed-stable") {
  Rng a(7), b(7), c(8);
  for (int n : {2, 5, 25}) {
    Matrix qa = dmsp::random_orthogonal(n, a);
    Matrix qb = dmsp::random_orthogonal(n, b);
    CHECK(dmsp::is_orthogonal(qa, 1e-12));
    CHECK((qa - qb).norm() == 0.0);
  }
  CHECK((dmsp::random_orthogonal(5, a) - dmsp::random_orthogonal(5, c)).norm() > 1e-3);
}

TEST_CASE("random_orthogonal covers both determinant signs") {
  Rng rng(9);
  int pos = 0, neg = 0;
  for (int t = 0; t < 40; ++t) {
    double d = dmsp::random_orthogonal(4, rng).determinant();
    CHECK(std::abs(std::abs(d) - 1.0) < 1e-10);
    (d > 0 ? pos : neg)++;
  }
  CHECK(pos > 0);
  CHECK(neg > 0);
}

TEST_CASE("signed permutations are orthogonal with one entry per line") {
  Rng rng(10);
  for (int t = 0; t < 50; ++t) {
    dmsp::SignedPermutation sp = dmsp::random_signed_permutation(5, rng);
    Matrix p = sp.to_matrix();
    CHECK(dmsp::is_orthogonal(p, 1e-15));
    for (int i = 0; i < 5; ++i) {
      CHECK(p.row(i).cwiseAbs().sum() == 1.0);
      CHECK(p.col(i).cwiseAbs().sum() == 1.0);
    }
  }
  // both signs and non-identity permutations occur
  Rng r2(11);
  int minus = 0, shuffled = 0;
  for (int t = 0; t < 50; ++t) {
    dmsp::SignedPermutation sp = dmsp::random_signed_permutation(4, r2);
    for (int i = 0; i < 4; ++i) {
      minus += sp.sign[i] < 0;
      shuffled += sp.perm[i] != i;
    }
  }
  CHECK(minus > 0);
  CHECK(shuffled > 0);
}

TEST_CASE("nearest_signed_permutation matches exhaustive search") {
  Rng rng(12);
  for (int n : {2, 3, 4, 5}) {
    for (int t = 0; t < 40; ++t) {
      Matrix u = random_matrix(n, n, rng);
      dmsp::SignedPermutation sp = dmsp::nearest_signed_permutation(u);
      // the returned sign makes every matched entry contribute |u_ij|
      CHECK(perm_score(sp, u) ==
            doctest::Approx(best_signed_perm_score(u)).epsilon(1e-12));
    }
  }
}

TEST_CASE("nearest_signed_permutation recovers a perturbed ground truth") {
  Rng rng(13);
  for (int t = 0; t < 30; ++t) {
    dmsp::SignedPermutation truth = dmsp::random_signed_permutation(6, rng);
    Matrix noisy = truth.to_matrix() + 0.03 * random_matrix(6, 6, rng);
    dmsp::SignedPermutation got = dmsp::nearest_signed_permutation(noisy);
    CHECK(got.perm == truth.perm);
    CHECK(got.sign == truth.sign);
  }
}

TEST_CASE("gersgorin bound is a valid sigma_min lower bound") {
  Matrix m(2, 2);
  m << 2.0, 0.5, -0.3, 1.0;
  // rows/cols off-diagonal mass: i=0: (0.5 + 0.3)/2 = 0.4; i=1: same
  CHECK(dmsp::gersgorin_sigma_min_bound(m) == doctest::Approx(0.6));

  Rng rng(14);
  for (int t = 0; t < 200; ++t) {
    int n = 2 + static_cast<int>(rng.uniform() * 6);
    Matrix a = 0.2 * random_matrix(n, n, rng);
    for (int i = 0; i < n; ++i) a(i, i) = 2.0 + rng.uniform();
    double bound = dmsp::gersgorin_sigma_min_bound(a);
    Eigen::JacobiSVD<Matrix> svd(a);
    double smin = svd.singularValues().minCoeff();
    if (bound > 0.0) CHECK(smin >= bound - 1e-12);
  }
}

TEST_CASE("matrix text round-trip is exact") {
  Rng rng(15);
  Matrix m = random_matrix(4, 7, rng);
  m(1, 2) = 1e-300;
  m(2, 3) = -0.1;  // not exactly representable; %.17g must round-trip it
  const char* path = "test_linalg_roundtrip.txt";
  dmsp::write_matrix(path, m);
  Matrix r = dmsp::read_matrix(path);
  REQUIRE(r.rows() == m.rows());
  REQUIRE(r.cols() == m.cols());
  CHECK((r - m).norm() == 0.0);
  std::remove(path);
}

TEST_CASE("is_orthogonal separates orthogonal from nearby matrices") {
  Rng rng(16);
  Matrix q = dmsp::random_orthogonal(6, rng);
  CHECK(dmsp::is_orthogonal(q, 1e-10));
  Matrix bent = q;
  bent(0, 0) += 1e-6;
  CHECK_FALSE(dmsp::is_orthogonal(bent, 1e-10));
  CHECK_FALSE(dmsp::is_orthogonal(Matrix::Zero(3, 4), 1e-10));
}
