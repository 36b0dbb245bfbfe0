#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "slopewalk/math_util.hpp"

namespace slopewalk {

/// Augmented Random Search, V1-t variant: antithetic finite differences in
/// parameter space, top-b direction selection, reward-scale normalization by
/// the standard deviation of the selected rewards. No observation whitening;
/// the policy works in raw physical units.
struct ArsConfig {
  double step_size = 0.03;  // update gain
  double noise = 0.04;      // exploration magnitude per direction
  int directions = 16;      // antithetic pairs per iteration
  int top_directions = 8;   // pairs kept for the update
  int iterations = 1000;
  uint64_t seed = 0;

  // Stop when the best evaluation return improved by less than
  // plateau_rel_tol (relative) over the last plateau_window iterations;
  // plateau_window <= 0 disables.
  int plateau_window = 100;
  double plateau_rel_tol = 1e-3;

  void validate() const;  // throws std::invalid_argument
};

struct IterationRecord {
  int iteration = 0;
  double mean_return = 0.0;  // over the 2N perturbed rollouts
  double max_return = 0.0;
  double min_return = 0.0;
  double eval_return = 0.0;  // unperturbed parameters
  double sigma_r = 0.0;      // reward std used in the update
};

/// `count` matrices of i.i.d. standard-normal entries, filled row by row so
/// the stream layout is reproducible.
std::vector<Eigen::MatrixXd> sample_directions(int count, int rows, int cols,
                                               Rng& rng);

struct ArsUpdate {
  Eigen::MatrixXd m;
  double sigma_r = 0.0;
  bool skipped = false;
};

/// One parameter update. Keeps the `top_directions` pairs with the largest
/// max(r+, r-); sigma_r is the population standard deviation of the 2b
/// selected rewards; the step is
///   M' = M + step_size / (b * sigma_r) * sum_selected (r+ - r-) * delta.
/// Degenerate sigma_r (< 1e-8) skips the update.
ArsUpdate ars_update(const Eigen::MatrixXd& m,
                     const std::vector<Eigen::MatrixXd>& directions,
                     const std::vector<double>& reward_plus,
                     const std::vector<double>& reward_minus,
                     const ArsConfig& config);

struct TrainResult {
  Eigen::MatrixXd best_m;
  double best_eval = 0.0;
  int iterations_run = 0;
  std::vector<IterationRecord> history;
};

/// Generic driver. `objective(m, condition_seed)` scores a parameter matrix
/// under sampled rollout conditions; all 2N rollouts of an iteration share
/// one condition seed so antithetic pairs face identical conditions.
/// `evaluate(m)` is the deterministic evaluation used for best-policy
/// tracking and the plateau stop. `on_iteration(record, current_m)` runs
/// after every update.
template <typename Objective, typename Evaluate, typename OnIteration>
TrainResult ars_train(const Eigen::MatrixXd& m0, const ArsConfig& config,
                      Objective&& objective, Evaluate&& evaluate,
                      OnIteration&& on_iteration) {
  config.validate();
  Rng rng(config.seed);

  TrainResult result;
  result.best_m = m0;
  result.best_eval = evaluate(m0);

  Eigen::MatrixXd m = m0;
  std::vector<double> best_trace;
  best_trace.reserve(config.iterations);

  for (int it = 0; it < config.iterations; ++it) {
    const uint64_t condition_seed = rng.raw();
    const std::vector<Eigen::MatrixXd> dirs = sample_directions(
        config.directions, static_cast<int>(m.rows()),
        static_cast<int>(m.cols()), rng);

    std::vector<double> r_plus(dirs.size()), r_minus(dirs.size());
    for (size_t i = 0; i < dirs.size(); ++i) {
      r_plus[i] = objective(m + config.noise * dirs[i], condition_seed);
      r_minus[i] = objective(m - config.noise * dirs[i], condition_seed);
    }

    const ArsUpdate update = ars_update(m, dirs, r_plus, r_minus, config);
    m = update.m;

    IterationRecord rec;
    rec.iteration = it;
    rec.sigma_r = update.sigma_r;
    double sum = 0.0;
    rec.max_return = r_plus[0];
    rec.min_return = r_plus[0];
    for (size_t i = 0; i < dirs.size(); ++i) {
      for (const double r : {r_plus[i], r_minus[i]}) {
        sum += r;
        rec.max_return = std::max(rec.max_return, r);
        rec.min_return = std::min(rec.min_return, r);
      }
    }
    rec.mean_return = sum / (2.0 * static_cast<double>(dirs.size()));
    rec.eval_return = evaluate(m);

    if (rec.eval_return > result.best_eval) {
      result.best_eval = rec.eval_return;
      result.best_m = m;
    }
    result.history.push_back(rec);
    result.iterations_run = it + 1;
    on_iteration(rec, m);

    best_trace.push_back(result.best_eval);
    if (config.plateau_window > 0 &&
        static_cast<int>(best_trace.size()) > config.plateau_window) {
      const double before =
          best_trace[best_trace.size() - 1 - config.plateau_window];
      const double gain = result.best_eval - before;
      if (gain < config.plateau_rel_tol * std::abs(before)) {
        break;
      }
    }
  }
  return result;
}

}  // namespace slopewalk
