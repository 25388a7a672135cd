#include "lingdyn/learning.hpp"

#include <cassert>
#include <cmath>
#include <cstdlib>

namespace lingdyn::learning {

namespace {

// Probabilities may drift past [0,1] by rounding only; anything larger
// indicates a logic error upstream.
double clamp_unit(double p) {
  assert(p > -1e-12 && p < 1.0 + 1e-12);
  if (p < 0.0) return 0.0;
  if (p > 1.0) return 1.0;
  return p;
}

}  // namespace

LearningRates::LearningRates(double gamma_, double delta_)
    : gamma(gamma_), delta(delta_) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("LearningRates: gamma must lie in (0,1)");
  if (!(delta >= 0.0 && delta <= 1.0 - gamma))
    throw std::invalid_argument("LearningRates: delta must lie in [0, 1-gamma]");
}

LearningRates LearningRates::from_ratio(double gamma, double d) {
  if (d < 0.0) throw std::invalid_argument("LearningRates: d must be >= 0");
  return LearningRates(gamma, d * gamma);
}

OperatorSet OperatorSet::reward_penalty(const LearningRates& rates) {
  OperatorSet ops{};
  const double a = rates.slope();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) ops.a[i][j] = a;
  // Reward of G1 and penalty of G2 both raise p; the other two responses
  // contribute no intercept.
  ops.b[0][0] = rates.gamma;
  ops.b[0][1] = 0.0;
  ops.b[1][0] = 0.0;
  ops.b[1][1] = rates.gamma;
  return ops;
}

bool OperatorSet::equal_slopes(double tol) const {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (std::abs(a[i][j] - a[0][0]) > tol) return false;
  return true;
}

double OperatorSet::apply(double p, Grammar chosen, Response response) const {
  const int i = static_cast<int>(chosen);
  const int j = static_cast<int>(response);
  return clamp_unit(a[i][j] * p + b[i][j]);
}

Environment2x2::Environment2x2(double omega11, double omega12, double omega21,
                               double omega22)
    : omega{{omega11, omega12}, {omega21, omega22}} {
  for (int i = 0; i < 2; ++i) {
    if (std::abs(omega[i][0] + omega[i][1] - 1.0) > 1e-12)
      throw std::invalid_argument("Environment2x2: response rows must sum to 1");
    if (omega[i][0] < 0.0 || omega[i][1] < 0.0)
      throw std::invalid_argument("Environment2x2: probabilities must be >= 0");
  }
}

Environment2x2 Environment2x2::from_penalties(double pi1, double pi2) {
  if (pi1 < 0.0 || pi1 > 1.0 || pi2 < 0.0 || pi2 > 1.0)
    throw std::invalid_argument("Environment2x2: penalties must lie in [0,1]");
  return Environment2x2(1.0 - pi1, pi1, 1.0 - pi2, pi2);
}

bool Environment2x2::contracting() const {
  return omega[0][0] > 0.0 && omega[0][0] < 1.0 && omega[1][1] > 0.0 &&
         omega[1][1] < 1.0;
}

MomentConstants moment_constants(const Environment2x2& env,
                                 const LearningRates& rates) {
  const double g = rates.gamma;
  const double a = rates.slope();
  const double w11 = env.omega[0][0];
  const double w22 = env.omega[1][1];
  const double w = w22 - w11;

  MomentConstants mc{};
  mc.C0 = g * w22;
  mc.C1 = g * (w11 - w22) + a;
  mc.D0 = g * g * w22;
  mc.D1 = a * a - 2.0 * a * g * w;
  mc.D2 = 2.0 * a * g * w22 - g * g * w;
  mc.mean_limit = mc.C0 / (1.0 - mc.C1);
  mc.E0 = mc.D0 + mc.D2 * mc.mean_limit;
  return mc;
}

double apply_operator(double p, Grammar chosen, Response response,
                      const LearningRates& rates) {
  if (p < 0.0 || p > 1.0)
    throw std::invalid_argument("apply_operator: p must lie in [0,1]");
  return OperatorSet::reward_penalty(rates).apply(p, chosen, response);
}

double asymptotic_mean(double pi1, double pi2, double d) {
  const double den = pi1 + pi2 + d;
  if (!(den > 0.0))
    throw std::invalid_argument("asymptotic_mean: pi1 + pi2 + d must be > 0");
  return pi2 / den;
}

double asymptotic_mean(const Environment2x2& env, double d) {
  return asymptotic_mean(env.pi1(), env.pi2(), d);
}

double mean_trajectory(double p0, long n, const Environment2x2& env,
                       const LearningRates& rates) {
  if (p0 < 0.0 || p0 > 1.0)
    throw std::invalid_argument("mean_trajectory: p0 must lie in [0,1]");
  if (n < 0) throw std::invalid_argument("mean_trajectory: n must be >= 0");
  if (!env.contracting())
    throw ContractionError("mean_trajectory: environment must satisfy 0 < omega_ii < 1");
  const MomentConstants mc = moment_constants(env, rates);
  assert(std::abs(mc.C1) < 1.0);
  const double decay = std::pow(mc.C1, static_cast<double>(n));
  return decay * p0 + (1.0 - decay) * mc.mean_limit;
}

double moment_recursion(std::span<const double> moments, int m,
                        const OperatorSet& ops, const Environment2x2& env) {
  if (m < 0 || moments.size() < static_cast<size_t>(m) + 1)
    throw std::invalid_argument("moment_recursion: need moments 0..m");
  if (std::abs(moments[0] - 1.0) > 1e-12)
    throw std::invalid_argument("moment_recursion: zeroth moment must be 1");
  if (!ops.equal_slopes(1e-15))
    throw std::invalid_argument(
        "moment_recursion: unequal operator slopes leave the recursion open "
        "(unsupported)");
  if (m == 0) return 1.0;

  const double w11 = env.omega[0][0], w12 = env.omega[0][1];
  const double w21 = env.omega[1][0], w22 = env.omega[1][1];

  // binomial(m, k) via multiplicative update; m stays small in practice
  double binom = 1.0;
  double next = 0.0;
  for (int k = 0; k <= m; ++k) {
    auto term = [&](double aij, double bij) {
      // 0^0 = 1 by convention when an intercept vanishes and m = k
      return std::pow(aij, k) * std::pow(bij, m - k);
    };
    const double Omega = term(ops.a[0][0], ops.b[0][0]) * w11 +
                         term(ops.a[0][1], ops.b[0][1]) * w12;
    const double OmegaPrime = term(ops.a[1][0], ops.b[1][0]) * w21 +
                              term(ops.a[1][1], ops.b[1][1]) * w22;
    double contrib = OmegaPrime * moments[k];
    if (k < m) {
      contrib += (Omega - OmegaPrime) * moments[k + 1];
    }
    // k = m: equal slopes force Omega == OmegaPrime, so <p^{m+1}> drops out
    next += binom * contrib;
    binom = binom * (m - k) / (k + 1);
  }
  return next;
}

double variance_limit(const Environment2x2& env, const LearningRates& rates) {
  if (!env.contracting())
    throw ContractionError("variance_limit: environment must satisfy 0 < omega_ii < 1");
  const MomentConstants mc = moment_constants(env, rates);
  if (!(std::abs(mc.C1) < 1.0 && std::abs(mc.D1) < 1.0))
    throw ContractionError("variance_limit: moment recursion is not contracting");
  const double second = mc.E0 / (1.0 - mc.D1);
  const double var = second - mc.mean_limit * mc.mean_limit;
  return var < 0.0 ? 0.0 : var;
}

}  // namespace lingdyn::learning
