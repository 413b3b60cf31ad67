#include "dmsp/checks.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <stdexcept>

#include "dmsp/parallel.hpp"

namespace dmsp {

namespace {

constexpr double kTol = 1e-9;  // violation threshold on every inequality

Matrix random_skew(int n, Rng& rng) {
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
  Matrix s = g - g.transpose();
  double norm = s.norm();
  if (norm < 1e-12) return random_skew(n, rng);
  return s / norm;
}

}  // namespace

Matrix perturbed_orthogonal_along(const Matrix& p_mat, double radius,
                                  const Matrix& skew) {
  int n = static_cast<int>(p_mat.rows());
  if (radius == 0.0) return p_mat;
  Matrix s = skew / skew.norm();
  // ||p exp(a S) - p||_F^2 = sum_k 2 (1 - cos(a w_k)) over eigenvalues i w_k
  // of S; strictly increasing on [0, pi / max|w|], so bisection is exact.
  Eigen::EigenSolver<Matrix> eig(s);
  Eigen::VectorXd omega = eig.eigenvalues().imag();
  double omega_max = omega.cwiseAbs().maxCoeff();
  if (omega_max <= 0.0)
    throw std::runtime_error("perturbed_orthogonal: degenerate direction");
  auto dist = [&](double a) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
      // 2 (1 - cos x) = 4 sin^2(x/2), stable for tiny x
      double half = std::sin(0.5 * a * omega(k));
      acc += 4.0 * half * half;
    }
    return std::sqrt(acc);
  };
  double lo = 0.0, hi = 3.141592653589793 / omega_max;
  if (dist(hi) < radius)
    throw std::runtime_error("perturbed_orthogonal: radius out of reach");
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + hi); ++it) {
    double mid = 0.5 * (lo + hi);
    (dist(mid) < radius ? lo : hi) = mid;
  }
  double a = 0.5 * (lo + hi);
  Matrix u = p_mat * (a * s).exp();
  if (std::abs((u - p_mat).norm() - radius) > 1e-10)
    throw std::runtime_error("perturbed_orthogonal: missed target radius");
  if (!is_orthogonal(u, 1e-10))
    throw std::runtime_error("perturbed_orthogonal: lost orthogonality");
  return u;
}

Matrix perturbed_orthogonal(const Matrix& p_mat, double radius, Rng& rng) {
  return perturbed_orthogonal_along(
      p_mat, radius, random_skew(static_cast<int>(p_mat.rows()), rng));
}

CheckReport check_support_entry_bound(int n, double epsilon, long trials,
                                      Rng& rng) {
  CheckReport rep{"support-entry-bound", n};
  rep.epsilon = epsilon;
  rep.trials = trials;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  double bound = 1.0 - 0.5 * epsilon * epsilon;
  for (long t = 0; t < trials; ++t) {
    Matrix p = random_signed_permutation(n, rng).to_matrix();
    Matrix u = perturbed_orthogonal(p, epsilon, rng);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (p(i, j) == 0.0) continue;
        double margin = std::abs(u(i, j)) - bound;
        rep.worst_margin = std::min(rep.worst_margin, margin);
        if (margin < -kTol) ++rep.violations;
      }
  }
  return rep;
}

CheckReport check_cross_row_cubic(int n, double epsilon, long trials,
                                  Rng& rng) {
  CheckReport rep{"cross-row-cubic", n};
  rep.epsilon = epsilon;
  rep.trials = trials;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (long t = 0; t < trials; ++t) {
    Matrix p = random_signed_permutation(n, rng).to_matrix();
    Matrix u = perturbed_orthogonal(p, epsilon, rng);
    Matrix cubes = hadamard_pow3(u);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        double margin = 2.0 * epsilon - std::abs(cubes.row(i).dot(u.row(j)));
        rep.worst_margin = std::min(rep.worst_margin, margin);
        if (margin < -kTol) ++rep.violations;
      }
  }
  return rep;
}

CheckReport check_cubic_lipschitz(int n, double epsilon, long trials,
                                  Rng& rng) {
  CheckReport rep{"cubic-lipschitz", n};
  rep.epsilon = epsilon;
  rep.trials = trials;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  double lip = 3.0 * std::sqrt(2.0) * epsilon;
  for (long t = 0; t < trials; ++t) {
    Matrix p = random_signed_permutation(n, rng).to_matrix();
    // u pinned to the sphere, v anywhere in the ball (incl. near u and the
    // antipode) to cover both tiny and maximal ||u - v||.
    Matrix u = perturbed_orthogonal(p, epsilon, rng);
    double rv = epsilon * (t % 4 == 0 ? 1.0 : rng.uniform());
    Matrix v = perturbed_orthogonal(p, rv, rng);
    double margin =
        lip * (u - v).norm() - (hadamard_pow3(u) - hadamard_pow3(v)).norm();
    rep.worst_margin = std::min(rep.worst_margin, margin);
    if (margin < -kTol) ++rep.violations;
  }
  return rep;
}

CheckReport check_expected_gradient(int n, double theta, double epsilon,
                                    double p_total, long trials, Rng& rng) {
  CheckReport rep{"expected-gradient", n};
  rep.theta = theta;
  rep.epsilon = epsilon;
  rep.p = p_total;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  if (epsilon >= 0.5 / n)
    throw std::invalid_argument(
        "check_expected_gradient: need epsilon < 1/(2n)");

  // (a) Monte-Carlo match of both expectation formulas, 2% relative
  // tolerance, accumulated over fresh chunks.
  const double mc_tol = 0.02;
  {
    Matrix p = random_signed_permutation(n, rng).to_matrix();
    Matrix u = perturbed_orthogonal(p, epsilon, rng);
    int chunk = 250000;
    long remaining = static_cast<long>(p_total);
    Matrix acc_grad = Matrix::Zero(n, n);
    Matrix acc_gram = Matrix::Zero(n, n);
    while (remaining > 0) {
      int cols = static_cast<int>(std::min<long>(chunk, remaining));
      Matrix x = sample_bg(n, cols, theta, rng);
      Matrix ux3 = hadamard_pow3(u * x);
      acc_grad += ux3 * x.transpose();
      acc_gram += ux3 * (u * x).transpose();
      remaining -= cols;
    }
    Matrix exact_grad = expected_gradient(u, p_total, theta);
    Matrix exact_gram = expected_cubic_gram(u, p_total, theta);
    const Matrix* pairs[2][2] = {{&acc_grad, &exact_grad},
                                 {&acc_gram, &exact_gram}};
    for (auto& [est, exact] : pairs) {
      double rel = (*est - *exact).norm() / exact->norm();
      double margin = (mc_tol - rel) / mc_tol;
      rep.worst_margin = std::min(rep.worst_margin, margin);
      if (margin < -kTol) ++rep.violations;
      ++rep.trials;
    }
  }

  // (b) smallest singular value of the analytic expectation is bounded below
  // on the eps-ball.
  double bound = 3.0 * theta * (1.0 - theta) * (1.0 - 2.0 * n * epsilon) +
                 3.0 * theta * theta;
  for (long t = 0; t < trials; ++t) {
    Matrix p = random_signed_permutation(n, rng).to_matrix();
    double r = epsilon * (t % 3 == 0 ? 1.0 : rng.uniform());
    Matrix u = perturbed_orthogonal(p, r, rng);
    Eigen::JacobiSVD<Matrix> svd(expected_gradient(u, 1.0, theta));
    double sigma_min = svd.singularValues()(n - 1);
    double margin = (sigma_min - bound) / bound;
    rep.worst_margin = std::min(rep.worst_margin, margin);
    if (margin < -kTol) ++rep.violations;
    ++rep.trials;
  }
  return rep;
}

double consensus_step_eps_limit(int n, double theta, double alpha) {
  return (alpha - theta) /
         (2.0 * alpha * n * (1.0 - theta) +
          3.0 * std::sqrt(2.0) * (1.0 - alpha) * (1.0 + theta) + alpha * theta);
}

double consensus_step_eps_limit_alt(int n, double theta, double alpha) {
  return (alpha - theta) /
         (2.0 * alpha * n * (1.0 - theta) +
          3.0 * std::sqrt(2.0) * (1.0 + alpha) * (1.0 - theta) + alpha * theta);
}

CheckReport check_consensus_step_bound(int n, double theta, double alpha,
                                       double epsilon, int nodes, long trials,
                                       Rng& rng) {
  if (!(alpha > theta && alpha < 1.0))
    throw std::invalid_argument(
        "check_consensus_step_bound: need theta < alpha < 1");
  if (epsilon >= consensus_step_eps_limit(n, theta, alpha))
    throw std::invalid_argument(
        "check_consensus_step_bound: epsilon outside admissible range");
  CheckReport rep{"consensus-step-bound", n};
  rep.theta = theta;
  rep.alpha = alpha;
  rep.epsilon = epsilon;
  rep.eps_limit = consensus_step_eps_limit(n, theta, alpha);
  rep.eps_limit_alt = consensus_step_eps_limit_alt(n, theta, alpha);
  rep.worst_margin = std::numeric_limits<double>::infinity();

  for (long t = 0; t < trials; ++t) {
    Matrix p = random_signed_permutation(n, rng).to_matrix();
    Matrix u;
    std::vector<Matrix> ui(nodes);
    if (t == 0) {
      // consensus limit: all nodes huddled a hair away from u, delta ~ 1e-6
      u = perturbed_orthogonal(p, 0.5 * epsilon, rng);
      Matrix dir = random_skew(n, rng);
      for (int i = 0; i < nodes; ++i)
        ui[i] = perturbed_orthogonal_along(u, 1e-6, dir);
    } else if (t % 3 == 2) {
      // antipodal stress: u and all u_i on opposite boundary points
      Matrix dir = random_skew(n, rng);
      u = perturbed_orthogonal_along(p, epsilon, dir);
      Matrix v = perturbed_orthogonal_along(p, epsilon, -dir);
      for (int i = 0; i < nodes; ++i) ui[i] = v;
    } else {
      bool boundary = t % 3 == 1;
      u = perturbed_orthogonal(p, boundary ? epsilon : epsilon * rng.uniform(),
                               rng);
      for (int i = 0; i < nodes; ++i)
        ui[i] = perturbed_orthogonal(
            p, boundary ? epsilon : epsilon * rng.uniform(), rng);
    }
    double delta = 0.0;
    for (const auto& v : ui) delta = std::max(delta, (u - v).norm());
    if (delta < 1e-12) continue;

    Matrix eb = expected_gradient(u, 1.0, theta);
    Matrix ebs = Matrix::Zero(n, n);
    for (const auto& v : ui)
      ebs += expected_gradient(v, 1.0 / nodes, theta);
    Eigen::JacobiSVD<Matrix> svd_b(eb), svd_s(ebs);
    double lhs = 2.0 * (eb - ebs).norm() /
                 (svd_b.singularValues()(n - 1) + svd_s.singularValues()(n - 1));
    double margin = (alpha * delta - lhs) / (alpha * delta);
    rep.worst_margin = std::min(rep.worst_margin, margin);
    if (margin < -kTol) ++rep.violations;
    ++rep.trials;
  }
  return rep;
}

std::vector<CheckReport> run_default_grid(std::uint64_t seed) {
  struct Cell {
    std::function<CheckReport(Rng&)> run;
  };
  std::vector<Cell> cells;
  const int ns[] = {3, 4, 5, 6};
  const double radii[] = {0.06, 0.3, 0.5, 0.99};
  const double thetas[] = {0.1, 0.3};
  const long kTrials = 600;

  for (int n : ns)
    for (double eps : radii) {
      cells.push_back({[=](Rng& r) {
        return check_support_entry_bound(n, eps, kTrials, r);
      }});
      cells.push_back(
          {[=](Rng& r) { return check_cross_row_cubic(n, eps, kTrials, r); }});
      cells.push_back(
          {[=](Rng& r) { return check_cubic_lipschitz(n, eps, kTrials, r); }});
    }
  for (int n : ns)
    for (double theta : thetas) {
      double eps = 0.45 / n;  // keeps 1 - 2 n eps = 0.1 > 0
      double p_total = theta < 0.2 ? 2.5e6 : 1.2e6;
      cells.push_back({[=](Rng& r) {
        return check_expected_gradient(n, theta, eps, p_total, kTrials, r);
      }});
    }
  for (int n : ns)
    for (double theta : thetas)
      for (double alpha : {0.3, 0.5, 0.8}) {
        if (alpha <= theta) continue;
        double eps = 0.99 * consensus_step_eps_limit(n, theta, alpha);
        cells.push_back({[=](Rng& r) {
          return check_consensus_step_bound(n, theta, alpha, eps, 4, kTrials,
                                            r);
        }});
      }

  std::vector<CheckReport> reports(cells.size());
  parallel_for(static_cast<int>(cells.size()), 1e9, [&](int i) {
    Rng rng(Rng::derive(seed, 0x636865636bull,
                        static_cast<std::uint64_t>(i)));  // per-cell stream
    reports[i] = cells[i].run(rng);
  });
  return reports;
}

void write_checks_csv(const std::string& path,
                      const std::vector<CheckReport>& reports) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_checks_csv: cannot open " + path);
  out << "check,n,theta,alpha,epsilon,p,trials,violations,worst_margin,"
         "eps_limit,eps_limit_alt\n";
  auto num = [](double v) {
    if (v == 0.0) return std::string();  // unused optional -> blank cell
    char b[64];
    std::snprintf(b, sizeof b, "%.17g", v);
    return std::string(b);
  };
  for (const auto& r : reports) {
    char margin[64];
    std::snprintf(margin, sizeof margin, "%.17g", r.worst_margin);
    out << r.name << ',' << r.n << ',' << num(r.theta) << ',' << num(r.alpha)
        << ',' << num(r.epsilon) << ',' << num(r.p) << ',' << r.trials << ','
        << r.violations << ',' << margin << ',' << num(r.eps_limit) << ','
        << num(r.eps_limit_alt) << '\n';
  }
  if (!out) throw std::runtime_error("write_checks_csv: write failed");
}

long total_violations(const std::vector<CheckReport>& reports) {
  long total = 0;
  for (const auto& r : reports) total += r.violations;
  return total;
}

}  // namespace dmsp
