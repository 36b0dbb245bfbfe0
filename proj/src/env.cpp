#include "slopewalk/env.hpp"

#include <algorithm>
#include <cstdio>

namespace slopewalk {

double external_force_at(const PerturbationSchedule& schedule, double t) {
  double f = 0.0;
  for (const Perturbation& p : schedule) {
    if (t >= p.t_start && t < p.t_start + p.duration) {
      f += p.force_x;
    }
  }
  return f;
}

PerturbationSchedule periodic_schedule(double t_start, double period,
                                       double duration, double force_x,
                                       double episode_duration) {
  PerturbationSchedule schedule;
  if (period <= 0.0) {
    schedule.push_back({t_start, duration, force_x});
    return schedule;
  }
  for (double t = t_start; t < episode_duration; t += period) {
    schedule.push_back({t, duration, force_x});
  }
  return schedule;
}

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::kAlive:
      return "alive";
    case Termination::kFellLow:
      return "fell_low";
    case Termination::kToppled:
      return "toppled";
    case Termination::kDiverged:
      return "diverged";
    case Termination::kTimeUp:
      return "time_up";
  }
  return "unknown";
}

void write_log_csv(std::ostream& out, const std::vector<LogRow>& rows) {
  out << "t,torso_x,torso_z,pitch_deg,pitch_rate,phase,reward,dist,"
         "contact_L,contact_R,l_cmd,xshift_cmd,zshift_cmd,alpha_est_deg,"
         "force_ext\n";
  char buf[512];
  for (const LogRow& r : rows) {
    std::snprintf(buf, sizeof(buf),
                  "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%d,%d,%.9g,%.9g,"
                  "%.9g,%.9g,%.9g\n",
                  r.t, r.torso_x, r.torso_z, r.pitch_deg, r.pitch_rate,
                  r.phase, r.reward, r.dist, r.contact_l, r.contact_r,
                  r.l_cmd, r.xshift_cmd, r.zshift_cmd, r.alpha_est_deg,
                  r.force_ext);
    out << buf;
  }
}

Vec4 pd_torques(const Vector7d& q, const Vector7d& v, const Vec4& targets,
                const RobotModel& model) {
  constexpr int kJoint[4] = {kHipL, kKneeL, kHipR, kKneeR};
  Vec4 tau;
  for (int i = 0; i < 4; ++i) {
    const double raw =
        model.pd_kp * (targets[i] - q[kJoint[i]]) - model.pd_kd * v[kJoint[i]];
    tau[i] = std::clamp(raw, -model.torque_limit, model.torque_limit);
  }
  return tau;
}

namespace {

// Numeric 2x2 leg Jacobian: columns are the foot-position sensitivities to
// the hip and knee angles.
Eigen::Matrix2d leg_jacobian(double hip, double knee, const RobotModel& model) {
  constexpr double kEps = 1e-6;
  Eigen::Matrix2d j;
  j.col(0) = (forward_kinematics(hip + kEps, knee, model) -
              forward_kinematics(hip - kEps, knee, model)) /
             (2.0 * kEps);
  j.col(1) = (forward_kinematics(hip, knee + kEps, model) -
              forward_kinematics(hip, knee - kEps, model)) /
             (2.0 * kEps);
  return j;
}

}  // namespace

Environment::Environment(EnvConfig config, Terrain terrain)
    : config_(std::move(config)),
      terrain_(std::move(terrain)),
      dynamics_(config_.robot) {
  config_.gait.validate();
  if (config_.timing.dt_physics <= 0.0 || config_.timing.substeps < 1 ||
      config_.timing.episode_steps < 1) {
    throw std::invalid_argument("environment: bad timing configuration");
  }
}

SimState Environment::canonical_state(double start_x, double pitch) const {
  SimState state;
  // Drop the robot onto the running cycle: joints on the reference points
  // for start_phase, joint rates consistent with the moving references, body
  // translating forward at start_speed. At the default phase the left leg is
  // at mid-stance under the hip and the right at the swing apex above it.
  state.phase = config_.start_phase;
  state.q[kX] = start_x;
  state.q[kZ] = terrain_.height(start_x) + config_.gait.hip_height;
  state.q[kPitch] = pitch;
  state.v[kX] = config_.start_speed;

  const auto [phase_l, phase_r] = leg_phases(state.phase, config_.gait);
  const double phases[2] = {phase_l, phase_r};
  for (int leg = 0; leg < 2; ++leg) {
    const Vec3 ref = reference_foot_point(
        phases[leg], config_.init_step_length, config_.gait);
    const Vec2 local =
        clip_to_workspace(Vec2(ref.x(), ref.z()), config_.robot);
    const auto ik = inverse_kinematics(local(0), local(1), config_.robot);
    if (!ik) {
      throw std::invalid_argument("canonical_state: stance is unreachable");
    }
    const double hip =
        std::clamp(ik->hip, config_.robot.hip_min, config_.robot.hip_max);
    const double knee =
        std::clamp(ik->knee, config_.robot.knee_min, config_.robot.knee_max);
    state.q[kHipL + 2 * leg] = hip;
    state.q[kKneeL + 2 * leg] = knee;

    // Foot velocity relative to the hip: a planted foot moves backward at
    // the body speed; a swing foot follows the reference rate.
    Vec2 v_local;
    if (phases[leg] < 0.5) {
      v_local = Vec2(-config_.start_speed, 0.0);
    } else {
      constexpr double kDp = 1e-4;
      const Vec3 ahead = reference_foot_point(
          phases[leg] + kDp, config_.init_step_length, config_.gait);
      const Vec3 behind = reference_foot_point(
          phases[leg] - kDp, config_.init_step_length, config_.gait);
      v_local = Vec2(ahead.x() - behind.x(), ahead.z() - behind.z()) /
                (2.0 * kDp * config_.gait.period);
    }
    const Eigen::Vector2d rates =
        leg_jacobian(hip, knee, config_.robot).lu().solve(v_local);
    state.v[kHipL + 2 * leg] = rates(0);
    state.v[kKneeL + 2 * leg] = rates(1);
  }
  return state;
}

StartCondition Environment::sample_start(uint64_t seed) const {
  Rng rng(seed);
  double lo = terrain_.x_begin() + config_.start_margin;
  double hi = terrain_.x_end() - config_.start_margin;
  if (hi < lo) {
    lo = hi = 0.5 * (terrain_.x_begin() + terrain_.x_end());
  }
  StartCondition sc;
  sc.start_x = rng.uniform(lo, hi);
  sc.pitch = rng.uniform(-config_.max_start_pitch, config_.max_start_pitch);
  return sc;
}

SimState Environment::initial_state(uint64_t seed) const {
  const StartCondition sc = sample_start(seed);
  return canonical_state(sc.start_x, sc.pitch);
}

Environment::ContactForce Environment::foot_contact(SimState& state,
                                                    Leg leg) const {
  const ContactParams& cp = config_.contact;
  const int i = static_cast<int>(leg);
  const Vec2 p = dynamics_.foot_position(state.q, leg);
  const double alpha = terrain_.slope(p(0));
  const double ca = std::cos(alpha);
  const double sa = std::sin(alpha);
  const Vec2 normal(-sa, ca);
  const Vec2 tangent(ca, sa);
  // Signed distance to the surface; the vertical gap projected onto the
  // normal is exact within a terrain segment.
  const double gap = (p(1) - terrain_.height(p(0))) * ca;

  ContactForce out;
  if (gap >= 0.0) {
    if (state.in_contact[i]) {
      state.in_contact[i] = false;
      state.liftoff_time[i] = state.time;
    }
    return out;
  }

  const Vec2 pv = dynamics_.foot_velocity(state.q, state.v, leg);
  const double gap_rate = pv.dot(normal);
  const double fn =
      std::max(0.0, -cp.normal_stiffness * gap - cp.normal_damping * gap_rate);

  const double s = p.dot(tangent);
  if (!state.in_contact[i]) {
    state.in_contact[i] = true;
    state.friction_anchor[i] = s;
    const bool airborne_long_enough =
        state.liftoff_time[i] < 0.0 ||
        state.time - state.liftoff_time[i] >= cp.min_air_time;
    if (airborne_long_enough) {
      state.touchdown_prev = state.touchdown_last;
      state.touchdown_last = ContactRecord{p, leg, state.time};
      if (state.touchdown_prev) {
        state.terrain_pitch_estimate = estimate_terrain_pitch(
            *state.touchdown_prev, *state.touchdown_last,
            state.terrain_pitch_estimate);
      }
    }
  }

  // Anchored tangential spring, clamped to the friction cone; on slip the
  // anchor moves so the spring alone reproduces the clamped force.
  const double vt = pv.dot(tangent);
  double ft = -cp.tangent_stiffness * (s - state.friction_anchor[i]) -
              cp.tangent_damping * vt;
  const double limit = cp.friction_mu * fn;
  if (ft > limit || ft < -limit) {
    ft = std::clamp(ft, -limit, limit);
    state.friction_anchor[i] =
        s + (ft + cp.tangent_damping * vt) / cp.tangent_stiffness;
  }

  out.force = fn * normal + ft * tangent;
  out.normal = fn;
  out.tangential = ft;
  out.penetration = -gap;
  out.active = true;
  return out;
}

void Environment::dynamics_step(SimState& state, const Vec4& joint_torques,
                                double external_force_x,
                                ContactAudit* audit) const {
  const double dt = config_.timing.dt_physics;
  const RobotModel& robot = config_.robot;

  Vector7d Q = Vector7d::Zero();
  Q[kHipL] = joint_torques[0];
  Q[kKneeL] = joint_torques[1];
  Q[kHipR] = joint_torques[2];
  Q[kKneeR] = joint_torques[3];

  if (external_force_x != 0.0) {
    Q += dynamics_.torso_com_jacobian(state.q).transpose() *
         Vec2(external_force_x, 0.0);
  }

  for (int leg = 0; leg < 2; ++leg) {
    const ContactForce cf = foot_contact(state, static_cast<Leg>(leg));
    if (cf.active) {
      Q += dynamics_.foot_jacobian(state.q, static_cast<Leg>(leg)).transpose() *
           cf.force;
      if (audit != nullptr) {
        if (std::abs(cf.tangential) >
            config_.contact.friction_mu * cf.normal + 1e-9) {
          ++audit->cone_violations;
        }
        audit->max_penetration =
            std::max(audit->max_penetration, cf.penetration);
        audit->max_normal_force = std::max(audit->max_normal_force, cf.normal);
      }
    }
  }
  if (audit != nullptr) {
    ++audit->substeps;
  }

  const auto stop = [&](int idx, double lo, double hi) {
    if (state.q[idx] < lo) {
      Q[idx] += config_.joint_stop_stiffness * (lo - state.q[idx]) -
                config_.joint_stop_damping * state.v[idx];
    } else if (state.q[idx] > hi) {
      Q[idx] += config_.joint_stop_stiffness * (hi - state.q[idx]) -
                config_.joint_stop_damping * state.v[idx];
    }
  };
  stop(kHipL, robot.hip_min, robot.hip_max);
  stop(kKneeL, robot.knee_min, robot.knee_max);
  stop(kHipR, robot.hip_min, robot.hip_max);
  stop(kKneeR, robot.knee_min, robot.knee_max);

  const Vector7d a = dynamics_.forward_dynamics(state.q, state.v, Q);
  state.v += dt * a;
  state.q += dt * state.v;
  state.time += dt;
}

double Environment::compute_reward(const SimState& state,
                                   const SimState& prev_state) const {
  const RewardWeights& w = config_.reward;
  const Vec2 com = dynamics_.com_position(state.q);
  const Vec2 com_prev = dynamics_.com_position(prev_state.q);
  const double h = com(1) - terrain_.height(com(0));
  const double vx = dynamics_.linear_momentum(state.q, state.v)(0) /
                    config_.robot.total_mass();
  const auto kernel = [](double wj, double e) { return std::exp(-wj * e * e); };
  return kernel(w.w_roll, 0.0) + kernel(w.w_pitch, state.q[kPitch]) +
         kernel(w.w_yaw, 0.0) + kernel(w.w_height, h - w.com_height) +
         kernel(w.w_velocity, vx - w.nominal_velocity) +
         w.distance_weight * (com(0) - com_prev(0));
}

Termination Environment::check_termination(const SimState& state,
                                           int steps_done,
                                           int episode_steps) const {
  if (!state.q.allFinite() || !state.v.allFinite() ||
      state.v.cwiseAbs().maxCoeff() > config_.termination.max_speed) {
    return Termination::kDiverged;
  }
  if (std::abs(state.q[kPitch]) > config_.termination.max_pitch) {
    return Termination::kToppled;
  }
  if (state.q[kZ] - terrain_.height(state.q[kX]) <
      config_.termination.min_hip_height) {
    return Termination::kFellLow;
  }
  if (steps_done >= episode_steps) {
    return Termination::kTimeUp;
  }
  return Termination::kAlive;
}

EpisodeResult Environment::rollout(const AffinePolicy& policy,
                                   const PerturbationSchedule& schedule,
                                   const StartCondition& start,
                                   int episode_steps,
                                   std::vector<LogRow>* log,
                                   ContactAudit* audit) const {
  const int n_steps =
      episode_steps < 0 ? config_.timing.episode_steps : episode_steps;
  const RobotModel& robot = config_.robot;

  SimState state = canonical_state(start.start_x, start.pitch);
  Vec4 targets(state.q[kHipL], state.q[kKneeL], state.q[kHipR],
               state.q[kKneeR]);
  const auto [hold_l, hold_r] = leg_phases(state.phase, config_.gait);
  const double hold_phases[2] = {hold_l, hold_r};
  const double com_x0 = dynamics_.com_position(state.q)(0);

  EpisodeResult result;
  result.termination = Termination::kTimeUp;
  Eigen::VectorXd cmd;
  const double filter_gain =
      config_.action_filter_tau > 0.0
          ? 1.0 - std::exp(-config_.timing.control_dt() /
                           config_.action_filter_tau)
          : 1.0;
  double pitch_rate_f = state.v[kPitch];
  const double rate_filter_gain =
      1.0 - std::exp(-config_.timing.control_dt() / 0.02);
  for (int k = 0; k < n_steps; ++k) {
    pitch_rate_f += rate_filter_gain * (state.v[kPitch] - pitch_rate_f);
    const Eigen::VectorXd obs =
        build_observation(state.q[kPitch], state.v[kPitch],
                          state.terrain_pitch_estimate, config_.mode);
    const Eigen::VectorXd clipped =
        clip_action(policy.evaluate(obs), policy.clip_lo, policy.clip_hi);
    if (k == 0) {
      cmd = clipped;
    } else {
      cmd += filter_gain * (clipped - cmd);
    }
    const std::array<GaitAction, 2> actions =
        to_leg_actions(cmd, config_.mode, config_.planar);

    const auto [phase_l, phase_r] = leg_phases(state.phase, config_.gait);
    const double phases[2] = {phase_l, phase_r};
    const double blend =
        config_.startup_ramp_s > 0.0
            ? std::min(1.0, state.time / config_.startup_ramp_s)
            : 1.0;
    for (int leg = 0; leg < 2; ++leg) {
      Vec3 ref = reference_foot_point(phases[leg], actions[leg].step_length,
                                      config_.gait);
      if (blend < 1.0) {
        // Grow the cycle out of the double-support stand by interpolating
        // from the reset-phase reference rather than scaling the amplitude:
        // shrinking the references collapses them onto the hip, and the
        // loaded legs then drag the hip around instead of supporting it.
        const Vec3 held = reference_foot_point(
            hold_phases[leg], config_.init_step_length, config_.gait);
        ref = blend * ref + (1.0 - blend) * held;
      }
      const FootTarget ft = transform_foot_point(ref, actions[leg]);
      // Stance-side attitude servo (see EnvConfig): rotate the stance
      // target with the lean so the hip PD reaction rights the torso.
      const double lean =
          phases[leg] < 0.5
              ? -(config_.stance_pitch_gain * state.q[kPitch] +
                  config_.stance_pitch_lead_s * pitch_rate_f)
              : 0.0;
      const double cl = std::cos(lean);
      const double sl = std::sin(lean);
      const Vec2 tgt = clip_to_workspace(
          Vec2(ft.x * cl - ft.z * sl, ft.x * sl + ft.z * cl), robot);
      if (const auto ik = inverse_kinematics(tgt(0), tgt(1), robot)) {
        targets[2 * leg] = std::clamp(ik->hip, robot.hip_min, robot.hip_max);
        targets[2 * leg + 1] =
            std::clamp(ik->knee, robot.knee_min, robot.knee_max);
      }
    }

    const Vec4 tau = pd_torques(state.q, state.v, targets, robot);
    const double force_now = external_force_at(schedule, state.time);
    const SimState prev = state;
    for (int sub = 0; sub < config_.timing.substeps; ++sub) {
      dynamics_step(state, tau, external_force_at(schedule, state.time), audit);
    }
    state.phase =
        phase_advance(state.phase, config_.timing.control_dt(), config_.gait);

    const double reward = compute_reward(state, prev);
    result.total_return += reward;
    result.steps = k + 1;

    if (log != nullptr) {
      LogRow row;
      row.t = state.time;
      row.torso_x = state.q[kX];
      row.torso_z = state.q[kZ];
      row.pitch_deg = rad2deg(state.q[kPitch]);
      row.pitch_rate = state.v[kPitch];
      row.phase = state.phase;
      row.reward = reward;
      row.dist = dynamics_.com_position(state.q)(0) - com_x0;
      row.contact_l = state.in_contact[0] ? 1 : 0;
      row.contact_r = state.in_contact[1] ? 1 : 0;
      row.l_cmd = actions[0].step_length;
      row.xshift_cmd = actions[0].shift_x;
      row.zshift_cmd = actions[0].shift_z;
      row.alpha_est_deg = rad2deg(state.terrain_pitch_estimate);
      row.force_ext = force_now;
      log->push_back(row);
    }

    const Termination term = check_termination(state, k + 1, n_steps);
    if (term != Termination::kAlive) {
      result.termination = term;
      break;
    }
  }

  if (state.q.allFinite()) {
    result.distance = dynamics_.com_position(state.q)(0) - com_x0;
  }
  return result;
}

}  // namespace slopewalk
