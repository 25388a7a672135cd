#include "lingdyn/environment.hpp"

namespace lingdyn::environment {

GrammarAdvantages::GrammarAdvantages(double alpha1_, double alpha2_)
    : alpha1(alpha1_), alpha2(alpha2_) {
  if (!(alpha1 > 0.0 && alpha1 <= 1.0))
    throw std::invalid_argument("GrammarAdvantages: alpha1 must lie in (0,1]");
  if (!(alpha2 >= 0.0 && alpha2 <= 1.0))
    throw std::invalid_argument("GrammarAdvantages: alpha2 must lie in [0,1]");
}

ModelParams::ModelParams(double alpha_, double D_, double sigma_)
    : alpha(alpha_), D(D_), sigma(sigma_) {
  if (!(alpha > 0.0)) throw std::invalid_argument("ModelParams: alpha must be > 0");
  if (!(D >= 0.0)) throw std::invalid_argument("ModelParams: D must be >= 0");
  if (!(sigma >= 0.0 && sigma <= 1.0))
    throw std::invalid_argument("ModelParams: sigma must lie in [0,1]");
}

Penalties penalty_probabilities(const PopulationState& state, double sigma,
                                const GrammarAdvantages& adv) {
  if (state.p < 0.0 || state.p > 1.0 || state.q < 0.0 || state.q > 1.0)
    throw std::invalid_argument("penalty_probabilities: (p,q) must lie in [0,1]^2");
  if (sigma < 0.0 || sigma > 1.0)
    throw std::invalid_argument("penalty_probabilities: sigma must lie in [0,1]");
  const double st = 1.0 - sigma;
  return {
      adv.alpha2 * (st * (1.0 - state.p) + sigma * (1.0 - state.q)),
      adv.alpha1 * (st * state.p + sigma * state.q),
  };
}

ModelParams reduce_params(const GrammarAdvantages& adv, double d, double sigma) {
  if (!(adv.alpha2 > 0.0))
    throw std::domain_error("reduce_params: alpha2 = 0 leaves the reduction undefined");
  if (d < 0.0) throw std::invalid_argument("reduce_params: d must be >= 0");
  return ModelParams(adv.ratio(), d / adv.alpha2, sigma);
}

}  // namespace lingdyn::environment
