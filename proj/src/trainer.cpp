#include "slopewalk/trainer.hpp"

#include <cstdio>
#include <stdexcept>

namespace slopewalk {

Trainer::Trainer(const EnvConfig& env_config,
                 const std::vector<double>& train_inclines,
                 const TrackShape& track_shape) {
  if (train_inclines.empty()) {
    throw std::invalid_argument("trainer: need at least one training incline");
  }
  envs_.reserve(train_inclines.size());
  for (const double incline : train_inclines) {
    envs_.emplace_back(env_config, build_track(incline, track_shape));
  }
}

double Trainer::evaluate(const AffinePolicy& policy) const {
  double sum = 0.0;
  for (const Environment& env : envs_) {
    StartCondition sc;
    sc.start_x = env.terrain().x_begin() + env.config().start_margin;
    sc.pitch = 0.0;
    sum += env.rollout(policy, {}, sc).total_return;
  }
  return sum / static_cast<double>(envs_.size());
}

double Trainer::objective(const AffinePolicy& policy,
                          uint64_t condition_seed) const {
  Rng rng(condition_seed);
  const Environment& env = envs_[rng.integer(envs_.size())];
  const StartCondition sc = env.sample_start(rng.raw());
  return env.rollout(policy, {}, sc).total_return;
}

Trainer::Outcome Trainer::train(const AffinePolicy& seed_policy,
                                const ArsConfig& ars_config,
                                const IterationCallback& on_iteration) const {
  AffinePolicy scratch = seed_policy;
  const auto with_m = [&scratch](const Eigen::MatrixXd& m) -> const AffinePolicy& {
    scratch.M = m;
    return scratch;
  };

  const TrainResult result = ars_train(
      seed_policy.M, ars_config,
      [&](const Eigen::MatrixXd& m, uint64_t condition_seed) {
        return objective(with_m(m), condition_seed);
      },
      [&](const Eigen::MatrixXd& m) { return evaluate(with_m(m)); },
      [&](const IterationRecord& rec, const Eigen::MatrixXd& m) {
        if (on_iteration) {
          on_iteration(rec, with_m(m));
        }
      });

  Outcome out;
  out.best_policy = seed_policy;
  out.best_policy.M = result.best_m;
  out.best_eval = result.best_eval;
  out.seed_eval = evaluate(seed_policy);
  out.history = result.history;
  out.iterations_run = result.iterations_run;
  return out;
}

void write_telemetry_csv(std::ostream& out,
                         const std::vector<IterationRecord>& history) {
  out << "iteration,mean_return,max_return,eval_return,sigma_R\n";
  char buf[256];
  for (const IterationRecord& r : history) {
    std::snprintf(buf, sizeof(buf), "%d,%.9g,%.9g,%.9g,%.9g\n", r.iteration,
                  r.mean_return, r.max_return, r.eval_return, r.sigma_r);
    out << buf;
  }
}

}  // namespace slopewalk
