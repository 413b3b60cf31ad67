#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dmsp/data.hpp"
#include "dmsp/linalg.hpp"
#include "dmsp/rng.hpp"

namespace dmsp {

// Outcome of one numeric-validation cell. `violations` counts inequality
// failures beyond a 1e-9 tolerance; `worst_margin` is the smallest slack seen
// (units depend on the check and are documented at each check function).
// Fields that do not apply to a given check stay at 0 and print blank.
struct CheckReport {
  std::string name;
  int n = 0;
  double theta = 0.0;
  double alpha = 0.0;
  double epsilon = 0.0;
  double p = 0.0;
  long trials = 0;
  long violations = 0;
  double worst_margin = 0.0;
  double eps_limit = 0.0;      // admissible-radius limit used by the check
  double eps_limit_alt = 0.0;  // alternate form of the same limit, recorded
};

// Orthogonal U with ||U - p_mat||_F equal to radius exactly (within 1e-10):
// U = p_mat * exp(s S) for a random unit-Frobenius skew-symmetric S, with s
// solved by bisection. Throws if the construction misses the sphere or loses
// orthogonality.
Matrix perturbed_orthogonal(const Matrix& p_mat, double radius, Rng& rng);

// Like perturbed_orthogonal but along the given skew direction (need not be
// normalized); negate the direction to land on the antipodal side.
Matrix perturbed_orthogonal_along(const Matrix& p_mat, double radius,
                                  const Matrix& skew);

// On-support entries of a near-signed-permutation stay large:
// |u_ij| >= 1 - eps^2/2 wherever p_ij != 0. Margin: |u_ij| - bound.
CheckReport check_support_entry_bound(int n, double epsilon, long trials,
                                      Rng& rng);

// Cross-row cubic correlations stay small: |u_i^o3 . u_j| <= 2 eps for all
// i != j. Margin: 2 eps - |value|.
CheckReport check_cross_row_cubic(int n, double epsilon, long trials, Rng& rng);

// Cubing is Lipschitz near a signed permutation:
// ||U^o3 - V^o3||_F <= 3 sqrt(2) eps ||U - V||_F for U, V in the eps-ball.
// Margin: rhs - lhs.
CheckReport check_cubic_lipschitz(int n, double epsilon, long trials, Rng& rng);

// Two properties of the gradient's expectation under BG(theta) data:
// (a) Monte-Carlo averages of (UX)^o3 X^T and (UX)^o3 (UX)^T over a total of
//     p_total fresh columns match the analytic formulas within 2% relative
//     Frobenius error;
// (b) sigma_min(analytic expectation) >= 3 p theta(1-theta)(1-2n eps)
//     + 3 p theta^2 for U in the eps-ball (requires eps < 1/(2n)).
// Margin: relative slack, min over both parts.
CheckReport check_expected_gradient(int n, double theta, double epsilon,
                                    double p_total, long trials, Rng& rng);

// Deterministic consensus-step inequality on expectations: for U and U_i all
// within eps of one signed permutation, with delta = max_i ||U - U_i||_F > 0,
//   2 ||E[B] - E[sum_i B_i]||_F / (sigma_n(E[B]) + sigma_n(E[sum_i B_i]))
//     < alpha * delta.
// eps must lie below consensus_step_eps_limit. Margin: relative slack
// (alpha delta - lhs) / (alpha delta).
CheckReport check_consensus_step_bound(int n, double theta, double alpha,
                                       double epsilon, int nodes, long trials,
                                       Rng& rng);

// Admissible radius for check_consensus_step_bound:
// (alpha - theta) / (2 alpha n (1-theta) + 3 sqrt(2) (1-alpha)(1+theta)
//                    + alpha theta).
double consensus_step_eps_limit(int n, double theta, double alpha);

// A second form of the same limit whose middle coefficient reads
// 3 sqrt(2) (1+alpha)(1-theta); smaller, hence stricter. Recorded alongside
// so reports carry both.
double consensus_step_eps_limit_alt(int n, double theta, double alpha);

// The full default validation grid (n in {3..6}, theta in {0.1, 0.3},
// admissible radii, >= 500 trials per cell). Deterministic in `seed`; cells
// run in parallel.
std::vector<CheckReport> run_default_grid(std::uint64_t seed);

void write_checks_csv(const std::string& path,
                      const std::vector<CheckReport>& reports);

long total_violations(const std::vector<CheckReport>& reports);

}  // namespace dmsp
