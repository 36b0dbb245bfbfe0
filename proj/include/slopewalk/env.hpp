#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <vector>

#include "slopewalk/dynamics.hpp"
#include "slopewalk/gait.hpp"
#include "slopewalk/math_util.hpp"
#include "slopewalk/policy.hpp"
#include "slopewalk/robot_model.hpp"
#include "slopewalk/terrain.hpp"

namespace slopewalk {

/// Full simulation state. Besides the rigid-body coordinates this carries the
/// contact solver bookkeeping (friction anchors, debounce timers) so that a
/// rollout is a pure function of the initial state and the inputs.
struct SimState {
  Vector7d q = Vector7d::Zero();
  Vector7d v = Vector7d::Zero();
  double phase = 0.0;  // gait clock in [0, 1)
  double time = 0.0;   // s

  std::array<bool, 2> in_contact{{false, false}};
  // Friction anchor: terrain-tangent coordinate the tangential spring pulls
  // toward while the foot sticks. Valid only while in_contact.
  std::array<double, 2> friction_anchor{{0.0, 0.0}};
  // Time each foot last left the ground; negative means "airborne since
  // before the episode", so the first touchdown always registers.
  std::array<double, 2> liftoff_time{{-1.0, -1.0}};

  // Last two registered touchdowns, oldest first; feed the support-plane
  // pitch estimate.
  std::optional<ContactRecord> touchdown_prev;
  std::optional<ContactRecord> touchdown_last;
  double terrain_pitch_estimate = 0.0;  // rad, 0 until two touchdowns
};

struct ContactParams {
  double normal_stiffness = 4.0e5;   // N/m
  double normal_damping = 2.0e3;     // N s/m
  double tangent_stiffness = 4.0e5;  // N/m
  double tangent_damping = 5.0e2;    // N s/m
  double friction_mu = 0.8;
  // A touchdown is only recorded after the foot has been airborne this long,
  // so contact chatter does not pollute the pitch estimate.
  double min_air_time = 0.05;  // s
};

struct TerminationParams {
  double min_hip_height = 0.4;       // m, hip clearance above local terrain
  double max_pitch = deg2rad(45.0);  // rad
  double max_speed = 1.0e3;          // any |q̇| beyond this counts as diverged
};

/// Per-step reward: one squared-exponential kernel per posture error plus a
/// forward-progress term, r = sum_j exp(-w_j e_j^2) + distance_weight * Δx_com.
/// Roll and yaw are identically zero for the planar robot, so their kernels
/// contribute 1 each.
struct RewardWeights {
  double w_roll = 4.0;
  double w_pitch = 4.0;
  double w_yaw = 4.0;
  double w_height = 10.0;    // COM height error kernel
  double w_velocity = 8.0;   // COM forward-velocity error kernel
  double distance_weight = 30.0;   // 1/m
  double nominal_velocity = 0.35;  // m/s
  double com_height = 0.61;        // m, desired COM height above support
};

struct SimTiming {
  double dt_physics = 5.0e-4;  // s
  int substeps = 2;            // physics steps per control step
  int episode_steps = 10000;   // control steps per episode

  double control_dt() const { return dt_physics * substeps; }
};

/// Horizontal push applied at the torso COM.
struct Perturbation {
  double t_start = 0.0;   // s
  double duration = 0.0;  // s
  double force_x = 0.0;   // N, world x
};
using PerturbationSchedule = std::vector<Perturbation>;

/// Sum of all active perturbation forces at time t (windows should not
/// overlap, but summing makes the behaviour total).
double external_force_at(const PerturbationSchedule& schedule, double t);

/// Evenly spaced pushes: at t_start, t_start + period, ... while the episode
/// lasts.
PerturbationSchedule periodic_schedule(double t_start, double period,
                                       double duration, double force_x,
                                       double episode_duration);

/// Contact solver health counters, accumulated by dynamics_step on request.
/// A cone violation means an emitted tangential force exceeded mu * normal
/// (beyond rounding); the anchored-spring clamp should make that impossible.
struct ContactAudit {
  long substeps = 0;
  long cone_violations = 0;
  double max_penetration = 0.0;   // m, deepest surface violation
  double max_normal_force = 0.0;  // N, single foot
};

enum class Termination { kAlive, kFellLow, kToppled, kDiverged, kTimeUp };

const char* termination_name(Termination t);

struct LogRow {
  double t = 0.0;
  double torso_x = 0.0;
  double torso_z = 0.0;
  double pitch_deg = 0.0;
  double pitch_rate = 0.0;
  double phase = 0.0;
  double reward = 0.0;
  double dist = 0.0;
  int contact_l = 0;
  int contact_r = 0;
  double l_cmd = 0.0;
  double xshift_cmd = 0.0;
  double zshift_cmd = 0.0;
  double alpha_est_deg = 0.0;
  double force_ext = 0.0;
};

void write_log_csv(std::ostream& out, const std::vector<LogRow>& rows);

struct EpisodeResult {
  double total_return = 0.0;
  int steps = 0;           // control steps survived
  double distance = 0.0;   // COM x displacement, m
  Termination termination = Termination::kTimeUp;
};

/// Where and how the robot is dropped into the world.
struct StartCondition {
  double start_x = 0.0;
  double pitch = 0.0;  // rad
};

struct EnvConfig {
  RobotModel robot;
  GaitConfig gait;
  ContactParams contact;
  TerminationParams termination;
  RewardWeights reward;
  SimTiming timing;

  PolicyMode mode = PolicyMode::kReduced;
  bool planar = true;  // zero out steering / y-shift actions

  double init_step_length = 0.15;          // m, stance width at reset
  double max_start_pitch = deg2rad(2.0);   // rad, randomized initial pitch
  double start_margin = 1.0;               // m, keep sampled starts off ends

  // First-order low-pass on the clipped action vector before it reaches the
  // gait (time constant in s, <= 0 disables). Raw policy output slamming
  // between the clip rails whips the 10 kg legs hard enough to pump the
  // torso; smoothing the commands keeps the foot-placement feedback without
  // the reaction kick. The log records the filtered commands.
  double action_filter_tau = 0.08;

  // Stance-side attitude servo. While a leg is in the stance half of its
  // cycle, its foot target rotates with the lean by gain * pitch +
  // lead_s * pitch_rate, so the hip PD's reaction torque rights the torso
  // against the anchored foot. The sign matters: rotating targets the other
  // way, to keep them world-vertical, feeds the same reaction back with the
  // destabilizing sign (hip torque that drives the thigh foot-forward tips
  // the torso top-forward). The swing leg keeps plain torso-frame targets.
  // The lead uses pitch rate low-passed at 20 ms so contact ringing does
  // not chatter the targets.
  double stance_pitch_gain = 0.5;
  double stance_pitch_lead_s = 0.06;

  // Reset drops the robot on the gait cycle: clock at start_phase, joints on
  // the references, body moving forward at start_speed. Keeping a cycle
  // going is the policy's job; starting one from a dead stand is a separate
  // control problem this environment does not pose.
  double start_phase = 0.25;   // left mid-stance, right swing apex
  double start_speed = 0.375;  // m/s, one step length per half period

  // Optional soft start (s, <= 0 disables): reference points interpolate
  // from the reset-phase pose to the running cycle over this window.
  double startup_ramp_s = 0.0;

  // Soft joint limit stops.
  double joint_stop_stiffness = 1000.0;  // N m / rad
  double joint_stop_damping = 10.0;      // N m s / rad
};

/// PD torque law used at every joint: clamp(Kp (q_d - q) - Kd q̇, ±limit).
/// Order: hip L, knee L, hip R, knee R.
Vec4 pd_torques(const Vector7d& q, const Vector7d& v, const Vec4& targets,
                const RobotModel& model);

class Environment {
 public:
  Environment(EnvConfig config, Terrain terrain);

  const EnvConfig& config() const { return config_; }
  const Terrain& terrain() const { return terrain_; }
  const PlanarBipedDynamics& dynamics() const { return dynamics_; }

  /// On-cycle start: hip at the configured height above the terrain at
  /// start_x, gait clock at start_phase, both legs on their reference points
  /// with joint rates consistent with the cycle, body moving forward at
  /// start_speed.
  SimState canonical_state(double start_x, double pitch) const;

  StartCondition sample_start(uint64_t seed) const;
  SimState initial_state(uint64_t seed) const;

  /// One semi-implicit physics step at dt_physics. Joint torque order as in
  /// pd_torques; external_force_x acts at the torso COM.
  void dynamics_step(SimState& state, const Vec4& joint_torques,
                     double external_force_x,
                     ContactAudit* audit = nullptr) const;

  double compute_reward(const SimState& state,
                        const SimState& prev_state) const;

  Termination check_termination(const SimState& state,
                                int steps_done, int episode_steps) const;

  /// Full control loop: observation → policy → foot targets → IK → PD →
  /// physics substeps. Deterministic given all arguments. episode_steps < 0
  /// uses the configured default. If log is non-null a row is appended per
  /// control step.
  EpisodeResult rollout(const AffinePolicy& policy,
                        const PerturbationSchedule& schedule,
                        const StartCondition& start,
                        int episode_steps = -1,
                        std::vector<LogRow>* log = nullptr,
                        ContactAudit* audit = nullptr) const;

 private:
  struct ContactForce {
    Vec2 force = Vec2::Zero();  // world frame
    double normal = 0.0;
    double tangential = 0.0;
    double penetration = 0.0;  // m, > 0 while below the surface
    bool active = false;
  };

  ContactForce foot_contact(SimState& state, Leg leg) const;

  EnvConfig config_;
  Terrain terrain_;
  PlanarBipedDynamics dynamics_;
};

}  // namespace slopewalk
