#ifndef LINGDYN_LEARNING_HPP
#define LINGDYN_LEARNING_HPP

#include <span>
#include <stdexcept>
#include <string>

// Linear reward-penalty learning with an optional L2 bias, plus the
// closed-form moment results for the equal-slope operator family.

namespace lingdyn::learning {

enum class Grammar { G1 = 0, G2 = 1 };
enum class Response { Reward = 0, Penalty = 1 };

// Thrown when a map/recursion stops being a contraction (|C1| >= 1 or
// |D1| >= 1), i.e. when the asymptotic formulas no longer apply.
struct ContractionError : std::domain_error {
  using std::domain_error::domain_error;
};

// Increment parameters of the learner. delta = 0 is an L1 learner;
// delta > 0 biases against G1 regardless of environmental response.
struct LearningRates {
  double gamma;
  double delta;

  LearningRates(double gamma_, double delta_ = 0.0);

  // Build from the dimensionless difficulty d = delta/gamma.
  static LearningRates from_ratio(double gamma, double d);

  double d() const { return delta / gamma; }
  double slope() const { return 1.0 - gamma - delta; }
};

// The four affine operators f_ij(p) = a[i][j] p + b[i][j], indexed by
// chosen grammar i and environmental response j. The moment recursion is
// closed only when all slopes coincide.
struct OperatorSet {
  double a[2][2];
  double b[2][2];

  static OperatorSet reward_penalty(const LearningRates& rates);

  bool equal_slopes(double tol = 0.0) const;
  double apply(double p, Grammar chosen, Response response) const;
};

// Stationary 2-action/2-response environment. omega[i][j] is the
// probability of response j given action i; column 1 is the penalty
// column, so pi1 = omega[0][1] and pi2 = omega[1][1].
struct Environment2x2 {
  double omega[2][2];

  Environment2x2(double omega11, double omega12, double omega21, double omega22);
  static Environment2x2 from_penalties(double pi1, double pi2);

  double pi1() const { return omega[0][1]; }
  double pi2() const { return omega[1][1]; }

  // 0 < omega_ii < 1, the precondition for |C1| < 1.
  bool contracting() const;
};

// Constants of the first- and second-moment difference equations:
//   <p>_{n+1}   = C0 + C1 <p>_n
//   <p^2>_{n+1} = D0 + D1 <p^2>_n + D2 <p>_n
// E0 folds the mean limit into the second-moment equation.
struct MomentConstants {
  double C0, C1;
  double D0, D1, D2;
  double E0;
  double mean_limit;

  double e1(double p0) const { return D2 * (p0 - mean_limit); }
};

MomentConstants moment_constants(const Environment2x2& env, const LearningRates& rates);

double apply_operator(double p, Grammar chosen, Response response,
                      const LearningRates& rates);

// pi2 / (pi1 + pi2 + d); requires a positive denominator.
double asymptotic_mean(double pi1, double pi2, double d);
double asymptotic_mean(const Environment2x2& env, double d);

// Closed-form expected value of p after n iterations.
double mean_trajectory(double p0, long n, const Environment2x2& env,
                       const LearningRates& rates);

// One step of the general m-th raw moment recursion. moments[k] must hold
// <p^k> for k = 0..m; requires equal operator slopes.
double moment_recursion(std::span<const double> moments, int m,
                        const OperatorSet& ops, const Environment2x2& env);

// Limiting variance <p^2>_inf - <p>_inf^2.
double variance_limit(const Environment2x2& env, const LearningRates& rates);

}  // namespace lingdyn::learning

#endif
