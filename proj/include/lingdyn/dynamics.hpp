#ifndef LINGDYN_DYNAMICS_HPP
#define LINGDYN_DYNAMICS_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lingdyn/environment.hpp"

// Deterministic inter-generational dynamics on the unit square: the
// generational map, its continuous-time counterpart, origin stability,
// the bifurcation threshold and parameter sweeps.

namespace lingdyn::dynamics {

using environment::ModelParams;
using environment::PopulationState;

enum class Phase { Lost, Retained, Critical };

const char* phase_name(Phase phase);

enum class SigmaRegime { AlwaysLost, Bifurcation, AlwaysRetained, DegenerateD };

struct SigmaCrit {
  double value;
  SigmaRegime regime;
};

// Linearization of the continuous-time system at the origin.
struct StabilityReport {
  Eigen::Matrix2d jacobian;
  double lambda_plus;
  double lambda_minus;
  double discriminant;  // (alpha+D)^2 - 4 alpha D sigma, always >= 0
  bool stable;
};

// Coefficients and center of the conic carrying the p-nullcline.
struct NullclineGeometry {
  double A_pp, A_pq, A_qq;
  double B_p, B_q, C;
  double Delta;  // A_pp A_qq - A_pq^2
  double p_c, q_c;
};

struct NonConvergenceError : std::runtime_error {
  PopulationState last;
  NonConvergenceError(const std::string& what, PopulationState last_)
      : std::runtime_error(what), last(last_) {}
};

PopulationState step_map(const PopulationState& state, const ModelParams& params);

std::vector<PopulationState> iterate(const PopulationState& state0,
                                     const ModelParams& params, long n);

Eigen::Vector2d vector_field(const PopulationState& state, const ModelParams& params);

StabilityReport jacobian_and_eigenvalues(const ModelParams& params);

SigmaCrit sigma_crit(double alpha, double D);

Phase classify_phase(const ModelParams& params);

PopulationState find_equilibrium(const ModelParams& params,
                                 const PopulationState& start,
                                 double tol = 1e-12, long max_iter = 10'000'000);

// Generations until both components fall below the threshold, from (1, q0).
// nullopt when the budget is exhausted, the empirical signature of a
// retained grammar.
std::optional<long> passage_time(const ModelParams& params, double q0,
                                 double threshold = 1e-3,
                                 long max_gen = 1'000'000);
// Same, from an arbitrary starting state.
std::optional<long> passage_time_from(const PopulationState& start,
                                      const ModelParams& params,
                                      double threshold = 1e-3,
                                      long max_gen = 1'000'000);

struct OrbitCell {
  double alpha, D, sigma;
  double p_star, q_star;
  Phase phase;
  bool converged;
};

std::vector<OrbitCell> orbit_diagram(const std::vector<double>& alpha_values,
                                     const std::vector<double>& D_grid,
                                     const std::vector<double>& sigma_grid,
                                     double tol = 1e-12);

NullclineGeometry nullcline_geometry(const ModelParams& params);

}  // namespace lingdyn::dynamics

#endif
