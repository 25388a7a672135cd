#ifndef LINGDYN_ABM_HPP
#define LINGDYN_ABM_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "lingdyn/environment.hpp"
#include "lingdyn/learning.hpp"

// Finite stochastic simulations: single-learner trajectories against a
// fixed environment, and multi-generation cohorts with parent sampling.

namespace lingdyn::abm {

using environment::GrammarAdvantages;
using learning::Grammar;
using learning::LearningRates;

enum class SpeakerKind { L1, L2 };

// mt19937_64 with portable unit-interval and index draws. Distributions
// from <random> are implementation-defined, which would break the
// bit-identical reproducibility contract across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // uniform index in [0, n); modulo bias is negligible for small n
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(engine_() % n);
  }

 private:
  std::mt19937_64 engine_;
};

// Stream splitting: (master_seed, generation, learner_index) -> seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t generation,
                          std::uint64_t learner_index);

struct Learner {
  SpeakerKind kind;
  double prob;
  LearningRates rates;  // delta = 0 iff L1
};

struct Token {
  Grammar source;
  bool distinctive;  // incompatible with the competing grammar
};

// A pool of speakers the learner samples from, each used with equal
// probability; probs[k] is speaker k's probability of producing G1.
struct SpeakerPool {
  std::vector<double> probs;
};

struct CohortConfig {
  int n_learners;
  double l2_fraction;
  long tokens_per_learner;
  int n_generations;
  std::uint64_t master_seed;
  // parents per learner is fixed at 2
};

Token sample_token(const SpeakerPool& source_mix, const GrammarAdvantages& adv,
                   Rng& rng);

void learn_step(Learner& learner, const Token& token, Rng& rng);

struct TrajectoryPoint {
  long iteration;
  double prob;
};

// Single learner against a fixed source mix; trajectory subsampled every
// `subsample` tokens (iteration 0 included). The initial probability is
// drawn uniformly from the learner's own stream.
std::vector<TrajectoryPoint> simulate_learner(double freq_g1,
                                              const GrammarAdvantages& adv,
                                              const LearningRates& rates,
                                              SpeakerKind kind, long n_tokens,
                                              std::uint64_t seed,
                                              long subsample = 100);

struct CohortLearnerResult {
  int learner_id;
  SpeakerKind kind;
  double terminal_prob;
};

struct GenerationSummary {
  double p_median, p_q1, p_q3;  // across L1 learners
  double q_median, q_q1, q_q3;  // across L2 learners
};

struct CohortResult {
  // learners[g] holds the terminal state of generation g (g = 0 is the
  // seeded founder generation at p = q = 0.99)
  std::vector<std::vector<CohortLearnerResult>> learners;
  std::vector<GenerationSummary> summaries;
  // generational map trajectory with the same (alpha, D, sigma)
  std::vector<environment::PopulationState> deterministic;
};

CohortResult simulate_cohorts(const CohortConfig& config,
                              const GrammarAdvantages& adv, double d,
                              double gamma);

}  // namespace lingdyn::abm

#endif
