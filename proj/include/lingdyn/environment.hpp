#ifndef LINGDYN_ENVIRONMENT_HPP
#define LINGDYN_ENVIRONMENT_HPP

#include <stdexcept>

#include <Eigen/Dense>

// Population-level learning environment: maps the state of a mixed
// L1/L2 speech community to the penalty probabilities each grammar faces,
// and collapses the raw parameters to the reduced triple (alpha, D, sigma).

namespace lingdyn::environment {

// Fractions of each grammar's output unparsable by its competitor.
struct GrammarAdvantages {
  double alpha1;
  double alpha2;

  GrammarAdvantages(double alpha1_, double alpha2_);

  double ratio() const { return alpha1 / alpha2; }
};

// (p, q): probability of G1 among L1 and L2 speakers.
struct PopulationState {
  double p;
  double q;

  Eigen::Vector2d vec() const { return {p, q}; }
};

// Reduced parameters driving the deterministic system.
struct ModelParams {
  double alpha;  // alpha1/alpha2
  double D;      // d/alpha2
  double sigma;  // L2 speaker proportion

  ModelParams(double alpha_, double D_, double sigma_);
};

struct Penalties {
  double pi1;
  double pi2;
};

Penalties penalty_probabilities(const PopulationState& state, double sigma,
                                const GrammarAdvantages& adv);

// The single place where (alpha1, alpha2, d) collapse to (alpha, D).
ModelParams reduce_params(const GrammarAdvantages& adv, double d, double sigma);

}  // namespace lingdyn::environment

#endif
