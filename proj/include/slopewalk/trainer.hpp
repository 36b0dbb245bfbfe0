#pragma once

#include <functional>
#include <ostream>
#include <vector>

#include "slopewalk/ars.hpp"
#include "slopewalk/env.hpp"
#include "slopewalk/terrain.hpp"

namespace slopewalk {

/// Couples the ARS driver to the walking environments: one slope track per
/// training incline, per-iteration sampled conditions shared by the whole
/// antithetic population, and a fixed deterministic evaluation protocol used
/// for best-policy tracking and the plateau stop.
class Trainer {
 public:
  Trainer(const EnvConfig& env_config, const std::vector<double>& train_inclines,
          const TrackShape& track_shape = {});

  /// Mean return over one canonical start (track beginning, zero pitch) per
  /// training incline at the training episode length. Policy-independent
  /// conditions, so values are comparable across iterations and seeds.
  double evaluate(const AffinePolicy& policy) const;

  /// Return of a single rollout under conditions drawn from condition_seed:
  /// uniform incline choice, then start placement and pitch.
  double objective(const AffinePolicy& policy, uint64_t condition_seed) const;

  using IterationCallback =
      std::function<void(const IterationRecord&, const AffinePolicy&)>;

  struct Outcome {
    AffinePolicy best_policy;
    double best_eval = 0.0;
    double seed_eval = 0.0;
    std::vector<IterationRecord> history;
    int iterations_run = 0;
  };

  /// ARS over the policy matrix; the offset and clip bounds never change.
  Outcome train(const AffinePolicy& seed_policy, const ArsConfig& ars_config,
                const IterationCallback& on_iteration = {}) const;

  const std::vector<Environment>& environments() const { return envs_; }

 private:
  std::vector<Environment> envs_;
};

/// Telemetry CSV: iteration, mean_return, max_return, eval_return, sigma_R.
void write_telemetry_csv(std::ostream& out,
                         const std::vector<IterationRecord>& history);

}  // namespace slopewalk
