// Command-line front end: emits long-format tables for learner
// trajectories, cohort simulations, orbit diagrams, passage times, phase
// reports and demographic calibration.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lingdyn/abm.hpp"
#include "lingdyn/calibration.hpp"
#include "lingdyn/dynamics.hpp"
#include "lingdyn/environment.hpp"
#include "lingdyn/learning.hpp"

namespace {

using json = nlohmann::json;
using namespace lingdyn;

constexpr std::uint64_t kDefaultSeed = 987654321;  // fixed for reproducibility

// Grid flag syntax: either "v1,v2,v3" or "lo:hi:n" (n evenly spaced points).
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> values;
  if (text.find(':') != std::string::npos) {
    double lo, hi;
    long n;
    char c1, c2;
    std::istringstream in(text);
    if (!(in >> lo >> c1 >> hi >> c2 >> n) || c1 != ':' || c2 != ':' || n < 1)
      throw CLI::ValidationError("grid", "expected lo:hi:n in '" + text + "'");
    if (n == 1) return {lo};
    for (long i = 0; i < n; ++i)
      values.push_back(lo + (hi - lo) * static_cast<double>(i) /
                                static_cast<double>(n - 1));
    return values;
  }
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) values.push_back(std::stod(item));
  if (values.empty())
    throw CLI::ValidationError("grid", "empty grid '" + text + "'");
  return values;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<json> rows;  // each row an object keyed by column

  void write(const std::string& path, const std::string& format) const {
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!path.empty()) {
      file.open(path);
      if (!file) throw std::runtime_error("cannot open output file: " + path);
      out = &file;
    }
    if (format == "json") {
      json arr = json::array();
      for (const auto& row : rows) arr.push_back(row);
      *out << arr.dump(2) << "\n";
      return;
    }
    for (size_t i = 0; i < columns.size(); ++i)
      *out << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    for (const auto& row : rows) {
      for (size_t i = 0; i < columns.size(); ++i) {
        const json& v = row.at(columns[i]);
        if (v.is_string())
          *out << v.get<std::string>();
        else if (v.is_number_float()) {
          char buf[32];
          std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
          *out << buf;
        } else
          *out << v.dump();
        *out << (i + 1 < columns.size() ? "," : "\n");
      }
    }
  }
};

const char* kind_name(abm::SpeakerKind kind) {
  return kind == abm::SpeakerKind::L1 ? "L1" : "L2";
}

struct LearnOptions {
  double gamma = 0.01, d = 2.0, freq_g1 = 0.5, alpha1 = 0.25, alpha2 = 0.2;
  double l2_fraction = 0.5;
  int n_learners = 10;
  long tokens = 100000, subsample = 100;
  std::uint64_t seed = kDefaultSeed;
  std::string out, format = "csv";
};

int cmd_learn(const LearnOptions& opt) {
  const environment::GrammarAdvantages adv(opt.alpha1, opt.alpha2);
  const int n_l2 =
      static_cast<int>(std::floor(opt.n_learners * opt.l2_fraction));
  std::vector<abm::SpeakerKind> kinds(opt.n_learners, abm::SpeakerKind::L1);
  std::fill(kinds.begin(), kinds.begin() + n_l2, abm::SpeakerKind::L2);
  abm::Rng shuffle_rng(abm::derive_seed(opt.seed, 0, ~0ULL));
  for (size_t i = kinds.size(); i > 1; --i)
    std::swap(kinds[i - 1], kinds[shuffle_rng.index(i)]);

  Table table{{"learner_id", "kind", "iteration", "prob"}, {}};
  for (int i = 0; i < opt.n_learners; ++i) {
    const bool l2 = kinds[i] == abm::SpeakerKind::L2;
    const auto rates = l2 ? learning::LearningRates::from_ratio(opt.gamma, opt.d)
                          : learning::LearningRates(opt.gamma, 0.0);
    const auto traj = abm::simulate_learner(
        opt.freq_g1, adv, rates, kinds[i], opt.tokens,
        abm::derive_seed(opt.seed, 0, static_cast<std::uint64_t>(i)),
        opt.subsample);
    for (const auto& pt : traj)
      table.rows.push_back({{"learner_id", i},
                            {"kind", kind_name(kinds[i])},
                            {"iteration", pt.iteration},
                            {"prob", pt.prob}});
  }
  table.write(opt.out, opt.format);
  return 0;
}

struct CohortOptions {
  double gamma = 0.01, d = 2.0, alpha1 = 0.25, alpha2 = 0.2, l2_fraction = 0.5;
  int n_learners = 100, generations = 15;
  long tokens = 100000;
  std::uint64_t seed = kDefaultSeed;
  std::string out, det_out, format = "csv";
};

int cmd_cohort(const CohortOptions& opt) {
  const abm::CohortConfig config{opt.n_learners, opt.l2_fraction, opt.tokens,
                                 opt.generations, opt.seed};
  const auto result = abm::simulate_cohorts(
      config, environment::GrammarAdvantages(opt.alpha1, opt.alpha2), opt.d,
      opt.gamma);

  Table cohort{{"generation", "kind", "learner_id", "terminal_prob"}, {}};
  for (size_t g = 0; g < result.learners.size(); ++g)
    for (const auto& lr : result.learners[g])
      cohort.rows.push_back({{"generation", g},
                             {"kind", kind_name(lr.kind)},
                             {"learner_id", lr.learner_id},
                             {"terminal_prob", lr.terminal_prob}});
  cohort.write(opt.out, opt.format);

  Table det{{"generation", "p_det", "q_det"}, {}};
  for (size_t g = 0; g < result.deterministic.size(); ++g)
    det.rows.push_back({{"generation", g},
                        {"p_det", result.deterministic[g].p},
                        {"q_det", result.deterministic[g].q}});
  std::string det_path = opt.det_out;
  if (det_path.empty() && !opt.out.empty()) {
    det_path = opt.out;
    const auto dot = det_path.find_last_of('.');
    det_path.insert(dot == std::string::npos ? det_path.size() : dot, "_det");
  }
  det.write(det_path, opt.format);
  return 0;
}

struct OrbitOptions {
  std::string alpha = "1.25", d_grid = "1:10:10", sigma_grid = "0.05:0.95:10";
  double tol = 1e-12;
  std::string out, format = "csv";
};

int cmd_orbit(const OrbitOptions& opt) {
  const auto cells =
      dynamics::orbit_diagram(parse_grid(opt.alpha), parse_grid(opt.d_grid),
                              parse_grid(opt.sigma_grid), opt.tol);
  Table table{{"alpha", "D", "sigma", "p_star", "q_star", "phase", "status"}, {}};
  for (const auto& cell : cells)
    table.rows.push_back({{"alpha", cell.alpha},
                          {"D", cell.D},
                          {"sigma", cell.sigma},
                          {"p_star", cell.p_star},
                          {"q_star", cell.q_star},
                          {"phase", dynamics::phase_name(cell.phase)},
                          {"status", cell.converged ? "ok" : "no-convergence"}});
  table.write(opt.out, opt.format);
  return 0;
}

struct PassageOptions {
  double alpha = 1.0, threshold = 1e-3;
  long max_gen = 1000000;
  std::string sigma_grid = "0.2,0.6", d_grid = "0.5:10:20", q0_grid = "0.1,0.5,0.9";
  std::string out, format = "csv";
};

int cmd_passage(const PassageOptions& opt) {
  Table table{{"sigma", "d", "q0", "generations", "status"}, {}};
  for (double sigma : parse_grid(opt.sigma_grid)) {
    for (double d : parse_grid(opt.d_grid)) {
      for (double q0 : parse_grid(opt.q0_grid)) {
        const environment::ModelParams params(opt.alpha, d, sigma);
        const auto n =
            dynamics::passage_time(params, q0, opt.threshold, opt.max_gen);
        table.rows.push_back(
            {{"sigma", sigma},
             {"d", d},
             {"q0", q0},
             {"generations", n ? json(*n) : json(nullptr)},
             {"status", n ? "ok" : "no-passage"}});
      }
    }
  }
  table.write(opt.out, opt.format);
  return 0;
}

struct PhaseOptions {
  double alpha = 1.25, D = 10.0, sigma = 0.5;
  std::string out;
};

int cmd_phase(const PhaseOptions& opt) {
  const environment::ModelParams params(opt.alpha, opt.D, opt.sigma);
  const auto report = dynamics::jacobian_and_eigenvalues(params);
  const auto sc = dynamics::sigma_crit(opt.alpha, opt.D);
  const char* regime = nullptr;
  switch (sc.regime) {
    case dynamics::SigmaRegime::AlwaysLost: regime = "always-lost"; break;
    case dynamics::SigmaRegime::Bifurcation: regime = "bifurcation"; break;
    case dynamics::SigmaRegime::AlwaysRetained: regime = "always-retained"; break;
    case dynamics::SigmaRegime::DegenerateD: regime = "degenerate-D"; break;
  }
  const json out = {{"alpha", opt.alpha},
                    {"D", opt.D},
                    {"sigma", opt.sigma},
                    {"sigma_crit", sc.value},
                    {"regime", regime},
                    {"lambda_plus", report.lambda_plus},
                    {"lambda_minus", report.lambda_minus},
                    {"origin_stable", report.stable},
                    {"phase", dynamics::phase_name(dynamics::classify_phase(params))}};
  if (opt.out.empty()) {
    std::cout << out.dump(2) << "\n";
  } else {
    std::ofstream file(opt.out);
    if (!file) throw std::runtime_error("cannot open output file: " + opt.out);
    file << out.dump(2) << "\n";
  }
  return 0;
}

struct CalibrateOptions {
  std::string data, pool;
  double low_fraction = 0.5;
  std::string out, format = "csv";
};

int cmd_calibrate(const CalibrateOptions& opt) {
  const auto spec = calibration::read_pool_spec(opt.pool);
  const auto records = calibration::apply_pooled_splits(
      calibration::read_demographics_csv(opt.data), spec);
  Table table{{"year", "sigma_low", "sigma_high"}, {}};
  for (const auto& record : records) {
    const auto interval =
        calibration::sigma_interval(record, spec.l2_pool, opt.low_fraction);
    table.rows.push_back({{"year", record.year},
                          {"sigma_low", interval.low},
                          {"sigma_high", interval.high}});
  }
  table.write(opt.out, opt.format);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Population dynamics of L2-difficult grammatical features"};
  app.require_subcommand(1);

  LearnOptions learn;
  auto* learn_cmd = app.add_subcommand("learn", "single-generation learner trajectories");
  learn_cmd->add_option("--gamma", learn.gamma);
  learn_cmd->add_option("--d", learn.d);
  learn_cmd->add_option("--freq-g1", learn.freq_g1);
  learn_cmd->add_option("--alpha1", learn.alpha1);
  learn_cmd->add_option("--alpha2", learn.alpha2);
  learn_cmd->add_option("--n-learners", learn.n_learners);
  learn_cmd->add_option("--l2-fraction", learn.l2_fraction);
  learn_cmd->add_option("--tokens", learn.tokens);
  learn_cmd->add_option("--subsample", learn.subsample);
  learn_cmd->add_option("--seed", learn.seed);
  learn_cmd->add_option("--out", learn.out);
  learn_cmd->add_option("--format", learn.format)
      ->check(CLI::IsMember({"csv", "json"}));

  CohortOptions cohort;
  auto* cohort_cmd = app.add_subcommand("cohort", "multi-generation cohort simulation");
  cohort_cmd->add_option("--gamma", cohort.gamma);
  cohort_cmd->add_option("--d", cohort.d);
  cohort_cmd->add_option("--alpha1", cohort.alpha1);
  cohort_cmd->add_option("--alpha2", cohort.alpha2);
  cohort_cmd->add_option("--n-learners", cohort.n_learners);
  cohort_cmd->add_option("--l2-fraction", cohort.l2_fraction);
  cohort_cmd->add_option("--tokens", cohort.tokens);
  cohort_cmd->add_option("--generations", cohort.generations);
  cohort_cmd->add_option("--seed", cohort.seed);
  cohort_cmd->add_option("--out", cohort.out);
  cohort_cmd->add_option("--det-out", cohort.det_out);
  cohort_cmd->add_option("--format", cohort.format)
      ->check(CLI::IsMember({"csv", "json"}));

  OrbitOptions orbit;
  auto* orbit_cmd = app.add_subcommand("orbit", "equilibrium sweep over (alpha, D, sigma)");
  orbit_cmd->add_option("--alpha", orbit.alpha);
  orbit_cmd->add_option("--d-grid", orbit.d_grid);
  orbit_cmd->add_option("--sigma-grid", orbit.sigma_grid);
  orbit_cmd->add_option("--tol", orbit.tol);
  orbit_cmd->add_option("--out", orbit.out);
  orbit_cmd->add_option("--format", orbit.format)
      ->check(CLI::IsMember({"csv", "json"}));

  PassageOptions passage;
  auto* passage_cmd = app.add_subcommand("passage", "generations to fall below a threshold");
  passage_cmd->add_option("--alpha", passage.alpha);
  passage_cmd->add_option("--sigma-grid", passage.sigma_grid);
  passage_cmd->add_option("--d-grid", passage.d_grid);
  passage_cmd->add_option("--q0-grid", passage.q0_grid);
  passage_cmd->add_option("--threshold", passage.threshold);
  passage_cmd->add_option("--max-gen", passage.max_gen);
  passage_cmd->add_option("--out", passage.out);
  passage_cmd->add_option("--format", passage.format)
      ->check(CLI::IsMember({"csv", "json"}));

  PhaseOptions phase;
  auto* phase_cmd = app.add_subcommand("phase", "single-point stability report");
  phase_cmd->add_option("--alpha", phase.alpha);
  phase_cmd->add_option("--D", phase.D);
  phase_cmd->add_option("--sigma", phase.sigma);
  phase_cmd->add_option("--out", phase.out);

  CalibrateOptions calibrate;
  auto* calibrate_cmd = app.add_subcommand("calibrate", "sigma intervals from demographics");
  calibrate_cmd->add_option("--data", calibrate.data)->required();
  calibrate_cmd->add_option("--pool", calibrate.pool)->required();
  calibrate_cmd->add_option("--low-fraction", calibrate.low_fraction);
  calibrate_cmd->add_option("--out", calibrate.out);
  calibrate_cmd->add_option("--format", calibrate.format)
      ->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (*learn_cmd) return cmd_learn(learn);
    if (*cohort_cmd) return cmd_cohort(cohort);
    if (*orbit_cmd) return cmd_orbit(orbit);
    if (*passage_cmd) return cmd_passage(passage);
    if (*phase_cmd) return cmd_phase(phase);
    if (*calibrate_cmd) return cmd_calibrate(calibrate);
  } catch (const dynamics::NonConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
