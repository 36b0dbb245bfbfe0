#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "slopewalk/config.hpp"
#include "slopewalk/env.hpp"
#include "slopewalk/policy.hpp"
#include "slopewalk/terrain.hpp"
#include "slopewalk/trainer.hpp"

namespace {

using namespace slopewalk;

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::string policy_path;
  std::string track;
  std::string csv_path;
  uint64_t seed = 0;
  bool seed_set = false;
  int steps = -1;
  double force_n = 0.0;
  bool force_set = false;
  double duration_s = 0.0;
  bool duration_set = false;
  double t_start_s = 0.0;
  bool t_start_set = false;
  double period_s = 0.0;
  bool period_set = false;
  std::string mode;
};

RunConfig load_run_config(const CommonOpts& opts) {
  RunConfig cfg =
      opts.config_path.empty() ? default_config() : load_config(opts.config_path);
  if (!opts.out_dir.empty()) {
    cfg.output_dir = opts.out_dir;
  }
  if (opts.seed_set) {
    cfg.ars.seed = opts.seed;
  }
  if (opts.force_set) {
    cfg.experiment.perturb_force_n = opts.force_n;
  }
  if (opts.duration_set) {
    cfg.experiment.perturb_duration_s = opts.duration_s;
  }
  if (opts.t_start_set) {
    cfg.experiment.perturb_t_start_s = opts.t_start_s;
  }
  if (opts.period_set) {
    cfg.experiment.perturb_period_s = opts.period_s;
  }
  if (!opts.mode.empty()) {
    cfg.experiment.perturb_mode = opts.mode;
  }
  if (!opts.track.empty()) {
    cfg.experiment.track = opts.track;
  }
  return cfg;
}

std::filesystem::path prepare_out_dir(const RunConfig& cfg) {
  const std::filesystem::path dir(cfg.output_dir);
  std::filesystem::create_directories(dir);
  write_effective_config(cfg, (dir / "effective_config.yaml").string());
  return dir;
}

AffinePolicy load_policy_checked(const std::string& path, PolicyMode mode) {
  const AffinePolicy policy = load_policy(path);
  if (policy.mode != mode) {
    throw std::runtime_error(
        path + ": policy mode does not match the configured policy.mode");
  }
  return policy;
}

void write_rollout_csv(const std::filesystem::path& path,
                       const std::vector<LogRow>& rows) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error(path.string() + ": cannot write CSV log");
  }
  write_log_csv(out, rows);
}

int cmd_train(const CommonOpts& opts) {
  RunConfig cfg;
  try {
    cfg = load_run_config(opts);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    const std::filesystem::path dir = prepare_out_dir(cfg);
    const EnvConfig env_cfg = make_env_config(cfg);
    const AffinePolicy seed_policy = make_seed_policy(cfg);
    const ArsConfig ars_cfg = make_ars_config(cfg);
    const Trainer trainer(env_cfg, train_inclines_rad(cfg));

    const std::filesystem::path policy_path = dir / "policy.txt";
    const std::filesystem::path telemetry_path = dir / "telemetry.csv";
    std::ofstream telemetry(telemetry_path);
    if (!telemetry) {
      throw std::runtime_error(telemetry_path.string() + ": cannot write");
    }
    telemetry << "iteration,mean_return,max_return,eval_return,sigma_R\n";

    const int checkpoint_every = cfg.ars.checkpoint_every;
    char buf[256];
    const auto on_iteration = [&](const IterationRecord& rec,
                                  const AffinePolicy& current) {
      std::snprintf(buf, sizeof(buf), "%d,%.9g,%.9g,%.9g,%.9g\n",
                    rec.iteration, rec.mean_return, rec.max_return,
                    rec.eval_return, rec.sigma_r);
      telemetry << buf << std::flush;
      if (checkpoint_every > 0 && (rec.iteration + 1) % checkpoint_every == 0) {
        std::snprintf(buf, sizeof(buf), "checkpoint_%06d.txt",
                      rec.iteration + 1);
        save_policy((dir / buf).string(), current);
      }
      if (rec.iteration % 20 == 0) {
        std::snprintf(buf, sizeof(buf),
                      "iter %5d  mean %10.1f  eval %10.1f  sigma %8.2f",
                      rec.iteration, rec.mean_return, rec.eval_return,
                      rec.sigma_r);
        std::cout << buf << std::endl;
      }
    };

    const Trainer::Outcome outcome =
        trainer.train(seed_policy, ars_cfg, on_iteration);
    save_policy(policy_path.string(), outcome.best_policy);

    std::cout << "iterations_run: " << outcome.iterations_run << "\n";
    std::cout << "seed_eval: " << outcome.seed_eval << "\n";
    std::cout << "best_eval: " << outcome.best_eval << "\n";
    if (outcome.seed_eval != 0.0) {
      std::cout << "improvement_pct: "
                << 100.0 * (outcome.best_eval - outcome.seed_eval) /
                       std::abs(outcome.seed_eval)
                << "\n";
    }
    std::cout << "policy: " << policy_path.string() << "\n";
    std::cout << "telemetry: " << telemetry_path.string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_eval(const CommonOpts& opts) {
  RunConfig cfg;
  Terrain terrain = Terrain::flat();
  PolicyMode mode = PolicyMode::kReduced;
  try {
    cfg = load_run_config(opts);
    terrain = parse_track_spec(cfg.experiment.track);
    mode = parse_policy_mode(cfg.policy.mode);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  AffinePolicy policy;
  try {
    policy = load_policy_checked(opts.policy_path, mode);
  } catch (const std::exception& e) {
    std::cerr << "policy error: " << e.what() << "\n";
    return 1;
  }

  try {
    const std::filesystem::path dir = prepare_out_dir(cfg);
    const Environment env(make_env_config(cfg), terrain);
    StartCondition sc;
    sc.start_x = terrain.x_begin() + env.config().start_margin;
    sc.pitch = 0.0;
    const int steps = opts.steps > 0 ? opts.steps : cfg.env.episode_steps;

    std::vector<LogRow> rows;
    const EpisodeResult result = env.rollout(policy, {}, sc, steps, &rows);

    const std::filesystem::path csv = opts.csv_path.empty()
                                          ? dir / "eval_log.csv"
                                          : std::filesystem::path(opts.csv_path);
    write_rollout_csv(csv, rows);

    double abs_pitch_sum = 0.0;
    for (const LogRow& r : rows) {
      abs_pitch_sum += std::abs(r.pitch_deg);
    }
    const double dt = make_env_config(cfg).timing.control_dt();
    std::cout << "track: " << cfg.experiment.track << "\n";
    std::cout << "steps: " << result.steps << "\n";
    std::cout << "time_s: " << result.steps * dt << "\n";
    std::cout << "distance_m: " << result.distance << "\n";
    std::cout << "final_x_m: " << (rows.empty() ? sc.start_x : rows.back().torso_x)
              << "\n";
    std::cout << "track_traverse_x_m: " << track_traverse_x(terrain) << "\n";
    std::cout << "mean_abs_pitch_deg: "
              << (rows.empty() ? 0.0 : abs_pitch_sum / rows.size()) << "\n";
    std::cout << "total_return: " << result.total_return << "\n";
    std::cout << "termination: " << termination_name(result.termination)
              << "\n";
    std::cout << "csv: " << csv.string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_perturb(const CommonOpts& opts) {
  RunConfig cfg;
  Terrain terrain = Terrain::flat();
  PolicyMode mode = PolicyMode::kReduced;
  try {
    CommonOpts local = opts;
    if (local.track.empty()) {
      local.track = "flat";  // disturbance experiments default to flat ground
    }
    cfg = load_run_config(local);
    terrain = parse_track_spec(cfg.experiment.track);
    mode = parse_policy_mode(cfg.policy.mode);
    if (cfg.experiment.perturb_mode != "impulse" &&
        cfg.experiment.perturb_mode != "periodic") {
      throw std::runtime_error("perturb mode must be 'impulse' or 'periodic'");
    }
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  AffinePolicy policy;
  try {
    policy = load_policy_checked(opts.policy_path, mode);
  } catch (const std::exception& e) {
    std::cerr << "policy error: " << e.what() << "\n";
    return 1;
  }

  try {
    const std::filesystem::path dir = prepare_out_dir(cfg);
    const Environment env(make_env_config(cfg), terrain);
    const int steps = opts.steps > 0 ? opts.steps : cfg.env.episode_steps;
    const double dt = env.config().timing.control_dt();
    const double episode_duration = steps * dt;

    const double force = cfg.experiment.perturb_force_n;
    const double duration = cfg.experiment.perturb_duration_s;
    const double t_start = cfg.experiment.perturb_t_start_s;
    PerturbationSchedule schedule;
    if (cfg.experiment.perturb_mode == "periodic") {
      schedule = periodic_schedule(t_start, cfg.experiment.perturb_period_s,
                                   duration, force, episode_duration);
    } else {
      schedule.push_back({t_start, duration, force});
    }

    StartCondition sc;
    sc.start_x = terrain.x_begin() + env.config().start_margin;
    sc.pitch = 0.0;
    std::vector<LogRow> rows;
    const EpisodeResult pushed = env.rollout(policy, schedule, sc, steps, &rows);

    const std::filesystem::path csv = opts.csv_path.empty()
                                          ? dir / "perturb_log.csv"
                                          : std::filesystem::path(opts.csv_path);
    write_rollout_csv(csv, rows);

    // Nominal pitch: mean over the second before the first push (or whatever
    // pre-push history exists).
    double nominal = 0.0;
    int n_nominal = 0;
    for (const LogRow& r : rows) {
      if (r.t < t_start && r.t >= t_start - 1.0) {
        nominal += r.pitch_deg;
        ++n_nominal;
      }
    }
    if (n_nominal == 0) {
      for (const LogRow& r : rows) {
        if (r.t < t_start) {
          nominal += r.pitch_deg;
          ++n_nominal;
        }
      }
    }
    nominal = n_nominal > 0 ? nominal / n_nominal : 0.0;

    double t_end = t_start + duration;
    for (const Perturbation& p : schedule) {
      t_end = std::max(t_end, p.t_start + p.duration);
    }

    double peak = 0.0;
    for (const LogRow& r : rows) {
      if (r.t >= t_start) {
        peak = std::max(peak, std::abs(r.pitch_deg - nominal));
      }
    }

    // Recovery: earliest time after the last push from which the pitch stays
    // within 2 degrees of nominal for a full second.
    const double kBandDeg = 2.0;
    const double kHoldS = 1.0;
    bool recovered = false;
    double recovery_time = 0.0;
    for (size_t i = 0; i < rows.size() && !recovered; ++i) {
      if (rows[i].t < t_end) {
        continue;
      }
      if (rows[i].t + kHoldS > rows.back().t + dt) {
        break;  // not enough episode left to confirm
      }
      bool ok = true;
      for (size_t j = i; j < rows.size() && rows[j].t <= rows[i].t + kHoldS;
           ++j) {
        if (std::abs(rows[j].pitch_deg - nominal) >= kBandDeg) {
          ok = false;
          break;
        }
      }
      if (ok) {
        recovered = true;
        recovery_time = rows[i].t - t_end;
      }
    }

    int backward = 0;
    for (const LogRow& r : rows) {
      if (r.l_cmd < 0.0) {
        ++backward;
      }
    }

    std::cout << "track: " << cfg.experiment.track << "\n";
    std::cout << "mode: " << cfg.experiment.perturb_mode << "\n";
    std::cout << "force_n: " << force << "\n";
    std::cout << "duration_s: " << duration << "\n";
    std::cout << "t_start_s: " << t_start << "\n";
    if (cfg.experiment.perturb_mode == "periodic") {
      std::cout << "period_s: " << cfg.experiment.perturb_period_s << "\n";
    }
    std::cout << "theta_nominal_deg: " << nominal << "\n";
    std::cout << "peak_pitch_deviation_deg: " << peak << "\n";
    if (recovered) {
      std::cout << "recovery_time_s: " << recovery_time << "\n";
    } else {
      std::cout << "recovery_time_s: no recovery\n";
    }
    std::cout << "backward_step_commands: " << backward << "\n";
    std::cout << "steps: " << pushed.steps << "\n";
    std::cout << "termination: " << termination_name(pushed.termination)
              << "\n";
    std::cout << "csv: " << csv.string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_inspect(const CommonOpts& opts) {
  AffinePolicy policy;
  try {
    policy = load_policy(opts.policy_path);
  } catch (const std::exception& e) {
    std::cerr << "policy error: " << e.what() << "\n";
    return 1;
  }

  const std::vector<std::string> obs = observation_labels(policy.mode);
  const std::vector<std::string> act = action_labels(policy.mode);
  std::cout << "mode: "
            << (policy.mode == PolicyMode::kReduced ? "reduced" : "full")
            << "\n";
  std::cout << "observations: " << obs.size() << "  actions: " << act.size()
            << "  learnable: " << policy.learnable_count() << "\n\n";

  size_t w = 10;
  for (const std::string& l : act) {
    w = std::max(w, l.size() + 1);
  }
  char buf[64];
  std::cout << std::string(w, ' ');
  for (const std::string& l : obs) {
    std::snprintf(buf, sizeof(buf), " %12s", l.c_str());
    std::cout << buf;
  }
  std::cout << "       offset      clip_lo      clip_hi\n";
  for (int i = 0; i < policy.M.rows(); ++i) {
    std::cout << act[i] << std::string(w - act[i].size(), ' ');
    for (int j = 0; j < policy.M.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), " %12.5g", policy.M(i, j));
      std::cout << buf;
    }
    std::snprintf(buf, sizeof(buf), " %12.5g %12.5g %12.5g",
                  policy.offset[i], policy.clip_lo[i], policy.clip_hi[i]);
    std::cout << buf << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear-policy slope walking: training, evaluation and "
               "disturbance experiments for a planar five-link biped"};
  app.require_subcommand(1);

  CommonOpts opts;

  CLI::App* train = app.add_subcommand("train", "Run ARS from the seed policy");
  train->add_option("--config", opts.config_path, "YAML config file");
  train->add_option("--out-dir", opts.out_dir, "Output directory override");
  CLI::Option* seed_opt =
      train->add_option("--seed", opts.seed, "Training seed override");

  CLI::App* eval = app.add_subcommand("eval", "Roll out a policy on a track");
  eval->add_option("--config", opts.config_path, "YAML config file");
  eval->add_option("--policy", opts.policy_path, "Policy file")->required();
  eval->add_option("--track", opts.track,
                   "Track spec, e.g. 'ramp:7deg,3m;plateau:2m' or 'flat'");
  eval->add_option("--steps", opts.steps, "Episode length in control steps");
  eval->add_option("--out-dir", opts.out_dir, "Output directory override");
  eval->add_option("--csv", opts.csv_path, "Per-step CSV log path");

  CLI::App* perturb =
      app.add_subcommand("perturb", "Push the walking robot and report recovery");
  perturb->add_option("--config", opts.config_path, "YAML config file");
  perturb->add_option("--policy", opts.policy_path, "Policy file")->required();
  perturb->add_option("--track", opts.track, "Track spec (default flat)");
  CLI::Option* force_opt =
      perturb->add_option("--force-n", opts.force_n, "Push force, N (world x)");
  CLI::Option* duration_opt = perturb->add_option(
      "--duration-s", opts.duration_s, "Push duration, s");
  CLI::Option* t_start_opt =
      perturb->add_option("--t-start", opts.t_start_s, "First push time, s");
  perturb->add_option("--mode", opts.mode, "impulse or periodic");
  CLI::Option* period_opt = perturb->add_option(
      "--period-s", opts.period_s, "Push period for periodic mode, s");
  perturb->add_option("--steps", opts.steps, "Episode length in control steps");
  perturb->add_option("--out-dir", opts.out_dir, "Output directory override");
  perturb->add_option("--csv", opts.csv_path, "Per-step CSV log path");

  CLI::App* inspect =
      app.add_subcommand("inspect", "Print a policy as a labeled gain table");
  inspect->add_option("--policy", opts.policy_path, "Policy file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  opts.seed_set = seed_opt->count() > 0;
  opts.force_set = force_opt->count() > 0;
  opts.duration_set = duration_opt->count() > 0;
  opts.t_start_set = t_start_opt->count() > 0;
  opts.period_set = period_opt->count() > 0;

  if (train->parsed()) {
    return cmd_train(opts);
  }
  if (eval->parsed()) {
    return cmd_eval(opts);
  }
  if (perturb->parsed()) {
    return cmd_perturb(opts);
  }
  if (inspect->parsed()) {
    return cmd_inspect(opts);
  }
  return 2;
}
