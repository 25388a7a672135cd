#include "lingdyn/abm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lingdyn/dynamics.hpp"

namespace lingdyn::abm {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double quantile_sorted(const std::vector<double>& sorted, double f) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double pos = f * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t generation,
                          std::uint64_t learner_index) {
  return splitmix64(splitmix64(splitmix64(master) ^ generation) ^
                    (learner_index * 0x2545f4914f6cdd1dULL + 1));
}

Token sample_token(const SpeakerPool& source_mix, const GrammarAdvantages& adv,
                   Rng& rng) {
  if (source_mix.probs.empty())
    throw std::invalid_argument("sample_token: empty speaker pool");
  const double p_speaker = source_mix.probs[rng.index(source_mix.probs.size())];
  const Grammar source =
      rng.uniform() < p_speaker ? Grammar::G1 : Grammar::G2;
  const double alpha =
      source == Grammar::G1 ? adv.alpha1 : adv.alpha2;
  return {source, rng.uniform() < alpha};
}

void learn_step(Learner& learner, const Token& token, Rng& rng) {
  const Grammar choice =
      rng.uniform() < learner.prob ? Grammar::G1 : Grammar::G2;
  // a distinctive token defeats the competing grammar; everything else
  // parses and rewards whichever grammar was chosen
  const bool parse_failed = token.distinctive && choice != token.source;
  learner.prob = learning::apply_operator(
      learner.prob, choice,
      parse_failed ? learning::Response::Penalty : learning::Response::Reward,
      learner.rates);
}

std::vector<TrajectoryPoint> simulate_learner(double freq_g1,
                                              const GrammarAdvantages& adv,
                                              const LearningRates& rates,
                                              SpeakerKind kind, long n_tokens,
                                              std::uint64_t seed,
                                              long subsample) {
  if (n_tokens < 0) throw std::invalid_argument("simulate_learner: n_tokens < 0");
  if (subsample < 1) throw std::invalid_argument("simulate_learner: subsample < 1");
  if (kind == SpeakerKind::L1 && rates.delta != 0.0)
    throw std::invalid_argument("simulate_learner: L1 learners require delta = 0");

  Rng rng(seed);
  Learner learner{kind, rng.uniform(), rates};
  const SpeakerPool pool{{freq_g1}};

  std::vector<TrajectoryPoint> traj;
  traj.push_back({0, learner.prob});
  for (long t = 1; t <= n_tokens; ++t) {
    learn_step(learner, sample_token(pool, adv, rng), rng);
    if (t % subsample == 0 || t == n_tokens) traj.push_back({t, learner.prob});
  }
  return traj;
}

CohortResult simulate_cohorts(const CohortConfig& config,
                              const GrammarAdvantages& adv, double d,
                              double gamma) {
  if (config.n_learners < 1)
    throw std::invalid_argument("simulate_cohorts: n_learners must be >= 1");
  if (config.l2_fraction < 0.0 || config.l2_fraction > 1.0)
    throw std::invalid_argument("simulate_cohorts: l2_fraction must lie in [0,1]");
  if (config.n_generations < 0 || config.tokens_per_learner < 0)
    throw std::invalid_argument("simulate_cohorts: negative counts");

  const int n = config.n_learners;
  const int n_l2 = static_cast<int>(std::floor(n * config.l2_fraction));
  const LearningRates l1_rates(gamma, 0.0);
  const LearningRates l2_rates = LearningRates::from_ratio(gamma, d);

  CohortResult result;

  // founder generation: everyone at 0.99, kinds shuffled by seed
  constexpr std::uint64_t kShuffleIndex = ~0ULL;
  auto assign_kinds = [&](int generation) {
    std::vector<SpeakerKind> kinds(n, SpeakerKind::L1);
    std::fill(kinds.begin(), kinds.begin() + n_l2, SpeakerKind::L2);
    Rng rng(derive_seed(config.master_seed,
                        static_cast<std::uint64_t>(generation), kShuffleIndex));
    for (std::size_t i = kinds.size(); i > 1; --i)
      std::swap(kinds[i - 1], kinds[rng.index(i)]);
    return kinds;
  };

  {
    std::vector<CohortLearnerResult> founders;
    const auto kinds = assign_kinds(0);
    for (int i = 0; i < n; ++i) founders.push_back({i, kinds[i], 0.99});
    result.learners.push_back(std::move(founders));
  }

  for (int g = 1; g <= config.n_generations; ++g) {
    const auto& parents = result.learners.back();
    const auto kinds = assign_kinds(g);
    std::vector<CohortLearnerResult> cohort;
    cohort.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      Rng rng(derive_seed(config.master_seed, static_cast<std::uint64_t>(g),
                          static_cast<std::uint64_t>(i)));
      // two parents, uniform with replacement across both kinds
      const SpeakerPool pool{{
          parents[rng.index(parents.size())].terminal_prob,
          parents[rng.index(parents.size())].terminal_prob,
      }};
      Learner learner{kinds[i], rng.uniform(),
                      kinds[i] == SpeakerKind::L2 ? l2_rates : l1_rates};
      for (long t = 0; t < config.tokens_per_learner; ++t)
        learn_step(learner, sample_token(pool, adv, rng), rng);
      cohort.push_back({i, kinds[i], learner.prob});
    }
    result.learners.push_back(std::move(cohort));
  }

  for (const auto& cohort : result.learners) {
    std::vector<double> l1, l2;
    for (const auto& lr : cohort)
      (lr.kind == SpeakerKind::L1 ? l1 : l2).push_back(lr.terminal_prob);
    std::sort(l1.begin(), l1.end());
    std::sort(l2.begin(), l2.end());
    result.summaries.push_back({quantile_sorted(l1, 0.5), quantile_sorted(l1, 0.25),
                                quantile_sorted(l1, 0.75), quantile_sorted(l2, 0.5),
                                quantile_sorted(l2, 0.25), quantile_sorted(l2, 0.75)});
  }

  const environment::ModelParams params =
      environment::reduce_params(adv, d, config.l2_fraction);
  result.deterministic =
      dynamics::iterate({0.99, 0.99}, params, config.n_generations);
  return result;
}

}  // namespace lingdyn::abm
