#include "lingdyn/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace lingdyn::dynamics {

const char* phase_name(Phase phase) {
  switch (phase) {
    case Phase::Lost: return "lost";
    case Phase::Retained: return "retained";
    case Phase::Critical: return "critical";
  }
  return "?";
}

namespace {

void check_state(const PopulationState& s) {
  if (s.p < 0.0 || s.p > 1.0 || s.q < 0.0 || s.q > 1.0)
    throw std::invalid_argument("dynamics: state must lie in [0,1]^2");
}

double clamp_unit(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

PopulationState step_map(const PopulationState& state, const ModelParams& params) {
  check_state(state);
  const double st = 1.0 - params.sigma;
  const double num = params.alpha * (st * state.p + params.sigma * state.q);
  const double den =
      st * (1.0 - state.p) + params.sigma * (1.0 - state.q) + num;
  if (den == 0.0) {
    // only reachable at the origin with degenerate parameters; the origin
    // is a fixed point there
    return {0.0, 0.0};
  }
  return {clamp_unit(num / den), clamp_unit(num / (den + params.D))};
}

std::vector<PopulationState> iterate(const PopulationState& state0,
                                     const ModelParams& params, long n) {
  if (n < 0) throw std::invalid_argument("iterate: n must be >= 0");
  std::vector<PopulationState> traj;
  traj.reserve(static_cast<size_t>(n) + 1);
  traj.push_back(state0);
  for (long k = 0; k < n; ++k) traj.push_back(step_map(traj.back(), params));
  return traj;
}

Eigen::Vector2d vector_field(const PopulationState& state, const ModelParams& params) {
  check_state(state);
  const double p = state.p, q = state.q;
  const double st = 1.0 - params.sigma;
  const double use_g1 = st * p + params.sigma * q;
  const double use_g2 = st * (1.0 - p) + params.sigma * (1.0 - q);
  return {params.alpha * use_g1 * (1.0 - p) - use_g2 * p,
          params.alpha * use_g1 * (1.0 - q) - (use_g2 + params.D) * q};
}

StabilityReport jacobian_and_eigenvalues(const ModelParams& params) {
  const double a = params.alpha, D = params.D, s = params.sigma;
  StabilityReport r;
  r.jacobian << a * (1.0 - s) - 1.0, a * s,
                a * (1.0 - s),       a * s - D - 1.0;
  r.discriminant = (a + D) * (a + D) - 4.0 * a * D * s;
  const double root = std::sqrt(std::max(r.discriminant, 0.0));
  r.lambda_plus = (a - (D + 2.0) + root) / 2.0;
  r.lambda_minus = (a - (D + 2.0) - root) / 2.0;
  r.stable = r.lambda_plus < 0.0;
  return r;
}

SigmaCrit sigma_crit(double alpha, double D) {
  if (!(alpha > 0.0)) throw std::invalid_argument("sigma_crit: alpha must be > 0");
  if (!(D >= 0.0)) throw std::invalid_argument("sigma_crit: D must be >= 0");
  if (alpha <= 1.0) return {0.0, SigmaRegime::AlwaysLost};
  if (alpha >= D + 2.0) return {1.0, SigmaRegime::AlwaysRetained};
  if (D == 0.0) {
    // 1 < alpha < 2 with D = 0: the threshold diverges; no admissible sigma
    // destabilizes retention, but the formula itself is undefined
    return {1.0, SigmaRegime::DegenerateD};
  }
  return {(alpha - 1.0) * (D + 1.0) / (alpha * D), SigmaRegime::Bifurcation};
}

Phase classify_phase(const ModelParams& params) {
  const SigmaCrit sc = sigma_crit(params.alpha, params.D);
  switch (sc.regime) {
    case SigmaRegime::AlwaysLost: return Phase::Lost;
    case SigmaRegime::AlwaysRetained: return Phase::Retained;
    case SigmaRegime::DegenerateD: return Phase::Retained;
    case SigmaRegime::Bifurcation:
      if (params.sigma > sc.value) return Phase::Lost;
      if (params.sigma < sc.value) return Phase::Retained;
      return Phase::Critical;
  }
  return Phase::Critical;
}

PopulationState find_equilibrium(const ModelParams& params,
                                 const PopulationState& start, double tol,
                                 long max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("find_equilibrium: tol must be > 0");
  PopulationState x = start;
  for (long k = 0; k < max_iter; ++k) {
    const PopulationState next = step_map(x, params);
    const double diff =
        std::max(std::abs(next.p - x.p), std::abs(next.q - x.q));
    x = next;
    if (diff < tol) return x;
  }
  throw NonConvergenceError("find_equilibrium: max_iter exceeded", x);
}

std::optional<long> passage_time_from(const PopulationState& start,
                                      const ModelParams& params,
                                      double threshold, long max_gen) {
  if (!(threshold > 0.0))
    throw std::invalid_argument("passage_time: threshold must be > 0");
  PopulationState x = start;
  for (long n = 0; n <= max_gen; ++n) {
    if (x.p < threshold && x.q < threshold) return n;
    x = step_map(x, params);
  }
  return std::nullopt;
}

std::optional<long> passage_time(const ModelParams& params, double q0,
                                 double threshold, long max_gen) {
  return passage_time_from({1.0, q0}, params, threshold, max_gen);
}

std::vector<OrbitCell> orbit_diagram(const std::vector<double>& alpha_values,
                                     const std::vector<double>& D_grid,
                                     const std::vector<double>& sigma_grid,
                                     double tol) {
  if (alpha_values.empty() || D_grid.empty() || sigma_grid.empty())
    throw std::invalid_argument("orbit_diagram: grids must be non-empty");
  std::vector<OrbitCell> cells;
  cells.reserve(alpha_values.size() * D_grid.size() * sigma_grid.size());
  for (double alpha : alpha_values) {
    for (double D : D_grid) {
      for (double sigma : sigma_grid) {
        const ModelParams params(alpha, D, sigma);
        OrbitCell cell{alpha, D, sigma, 0.0, 0.0, classify_phase(params), true};
        try {
          const PopulationState eq = find_equilibrium(params, {0.5, 0.5}, tol);
          cell.p_star = eq.p;
          cell.q_star = eq.q;
        } catch (const NonConvergenceError& e) {
          cell.p_star = e.last.p;
          cell.q_star = e.last.q;
          cell.converged = false;
        }
        cells.push_back(cell);
      }
    }
  }
  return cells;
}

NullclineGeometry nullcline_geometry(const ModelParams& params) {
  const double a = params.alpha, s = params.sigma;
  if (a == 1.0)
    throw std::domain_error(
        "nullcline_geometry: alpha = 1 degenerates the conic to lines");
  NullclineGeometry g;
  g.A_pp = (1.0 - a) * (1.0 - s);
  g.A_pq = (1.0 - a) * s / 2.0;
  g.A_qq = 0.0;
  g.B_p = a * (1.0 - s) - 1.0;
  g.B_q = a * s;
  g.C = 0.0;
  g.Delta = g.A_pp * g.A_qq - g.A_pq * g.A_pq;
  g.p_c = (g.B_q * g.A_pq - g.B_p * g.A_qq) / (2.0 * g.Delta);
  g.q_c = (g.B_p * g.A_pq - g.B_q * g.A_pp) / (2.0 * g.Delta);
  return g;
}

}  // namespace lingdyn::dynamics
