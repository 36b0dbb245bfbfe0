#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slopewalk/ars.hpp"
#include "slopewalk/env.hpp"
#include "slopewalk/gait.hpp"
#include "slopewalk/policy.hpp"
#include "slopewalk/robot_model.hpp"

namespace slopewalk {

/// Mirror of the YAML run configuration, in file units: lengths in m, masses
/// in kg, angles in degrees (keys carry a _deg suffix). Conversion to the
/// radian-based domain structs happens in the make_* builders so that a
/// loaded config can be re-emitted bit-identically.
///
/// All six sections must be present in a config file; keys inside a section
/// are optional and default to the values below, unknown keys are rejected.
struct RunConfig {
  RunConfig();  // defaults match RobotModel::rabbit() and the module defaults

  std::string output_dir = "out";

  struct RobotSection {
    double torso_mass = 0.0;
    double thigh_mass = 0.0;
    double shin_mass = 0.0;
    double torso_length = 0.0;
    double thigh_length = 0.0;
    double shin_length = 0.0;
    double torso_inertia = 0.0;
    double thigh_inertia = 0.0;
    double shin_inertia = 0.0;
    double torso_com = 0.0;
    double thigh_com = 0.0;
    double shin_com = 0.0;
    double hip_min_deg = 0.0;
    double hip_max_deg = 0.0;
    double knee_min_deg = 0.0;
    double knee_max_deg = 0.0;
    double torque_limit = 0.0;
    double pd_kp = 0.0;
    double pd_kd = 0.0;
  } robot;

  struct GaitSection {
    double period_s = 0.8;
    double hip_height_m = 0.7;
    double swing_height_m = 0.1;
    double phase_offset = 0.5;
    double stance_offset_m = -0.11;
  } gait;

  struct PolicySection {
    std::string mode = "reduced";
    double step_min = -0.3;
    double step_max = 0.4;
    double shift_limit = 0.12;
    double steer_limit_deg = rad2deg(0.5);
    double k_step = 0.4;
    double k_step_rate = 0.12;
    double k_xshift = 0.3;
    double k_xshift_rate = 0.05;
    double k_zshift = -0.6;
    double k_steer = 0.0;
    double k_steer_rate = 0.0;
    double k_yshift = 0.0;
    double k_yshift_rate = 0.0;
    double nominal_step = 0.15;
    double pitch_setpoint_deg = 0.0;
    double roll_setpoint_deg = 0.0;
    double yaw_setpoint_deg = 0.0;
  } policy;

  struct EnvSection {
    double dt_physics = 5.0e-4;
    int substeps = 2;
    int episode_steps = 10000;
    bool planar = true;
    double init_step_length = 0.15;
    double max_start_pitch_deg = 2.0;
    double start_margin = 1.0;
    double joint_stop_stiffness = 1000.0;
    double joint_stop_damping = 10.0;
    double action_filter_tau = 0.08;
    double stance_pitch_gain = 0.5;
    double stance_pitch_lead_s = 0.06;
    double start_phase = 0.25;
    double start_speed = 0.375;
    double startup_ramp_s = 0.0;

    struct ContactSection {
      double normal_stiffness = 4.0e5;
      double normal_damping = 2.0e3;
      double tangent_stiffness = 4.0e5;
      double tangent_damping = 5.0e2;
      double friction_mu = 0.8;
      double min_air_time = 0.05;
    } contact;

    struct TerminationSection {
      double min_hip_height = 0.4;
      double max_pitch_deg = 45.0;
      double max_speed = 1.0e3;
    } termination;

    struct RewardSection {
      double w_roll = 4.0;
      double w_pitch = 4.0;
      double w_yaw = 4.0;
      double w_height = 10.0;
      double w_velocity = 8.0;
      double distance_weight = 30.0;
      double nominal_velocity = 0.35;
      double com_height = 0.61;
    } reward;
  } env;

  struct ArsSection {
    double step_size = 0.03;
    double noise = 0.04;
    int directions = 16;
    int top_directions = 8;
    int iterations = 1000;
    uint64_t seed = 0;
    int plateau_window = 100;
    double plateau_rel_tol = 1.0e-3;
    int checkpoint_every = 100;
    std::vector<double> train_inclines_deg{0.0, 7.0};
  } ars;

  struct ExperimentSection {
    std::string track = "ramp:7deg,3m;plateau:2m";
    int eval_episode_steps = 60000;
    double perturb_force_n = 10.0;
    double perturb_duration_s = 0.1;
    double perturb_t_start_s = 5.0;
    double perturb_period_s = 2.0;
    std::string perturb_mode = "impulse";
  } experiment;
};

inline RunConfig default_config() { return RunConfig(); }

/// Strict load: all six sections required, unknown keys anywhere are an
/// error. Messages carry the file path and 1-based line number.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& yaml_text, const std::string& label);

/// Deterministic dump of every effective value; loading the dump reproduces
/// the config bit-exactly.
std::string effective_config_yaml(const RunConfig& config);
void write_effective_config(const RunConfig& config, const std::string& path);

PolicyMode parse_policy_mode(const std::string& name);  // throws

RobotModel make_robot_model(const RunConfig& config);
GaitConfig make_gait_config(const RunConfig& config);
SeedGains make_seed_gains(const RunConfig& config);
AffinePolicy make_seed_policy(const RunConfig& config);
EnvConfig make_env_config(const RunConfig& config);
ArsConfig make_ars_config(const RunConfig& config);
std::vector<double> train_inclines_rad(const RunConfig& config);

}  // namespace slopewalk
