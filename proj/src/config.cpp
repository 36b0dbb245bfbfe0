#include "slopewalk/config.hpp"

#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include <yaml-cpp/yaml.h>

namespace slopewalk {

namespace {

[[noreturn]] void fail(const std::string& label, const YAML::Mark& mark,
                       const std::string& what) {
  std::ostringstream os;
  os << label;
  if (mark.line >= 0) {
    os << ":" << mark.line + 1;
  }
  os << ": " << what;
  throw std::runtime_error(os.str());
}

/// Applies per-key parsers to a YAML map and rejects anything unhandled.
class MapReader {
 public:
  MapReader(YAML::Node node, std::string label, std::string section)
      : node_(std::move(node)), label_(std::move(label)),
        section_(std::move(section)) {
    if (!node_.IsMap()) {
      fail(label_, node_.Mark(), "section '" + section_ + "' must be a map");
    }
  }

  ~MapReader() = default;

  void finish() const {
    for (const auto& kv : node_) {
      const std::string key = kv.first.as<std::string>();
      if (!seen_.count(key)) {
        fail(label_, kv.first.Mark(),
             "unknown key '" + section_ + "." + key + "'");
      }
    }
  }

  template <typename T>
  void read(const char* key, T* target) {
    seen_.insert(key);
    const YAML::Node child = node_[key];
    if (!child) {
      return;
    }
    try {
      *target = child.as<T>();
    } catch (const YAML::Exception&) {
      fail(label_, child.Mark(),
           "bad value for '" + section_ + "." + key + "'");
    }
  }

  YAML::Node subsection(const char* key) {
    seen_.insert(key);
    return node_[key];
  }

 private:
  YAML::Node node_;
  std::string label_;
  std::string section_;
  std::set<std::string> seen_;
};

}  // namespace

RunConfig::RunConfig() {
  const RobotModel m = RobotModel::rabbit();
  robot.torso_mass = m.torso_mass;
  robot.thigh_mass = m.thigh_mass;
  robot.shin_mass = m.shin_mass;
  robot.torso_length = m.torso_length;
  robot.thigh_length = m.thigh_length;
  robot.shin_length = m.shin_length;
  robot.torso_inertia = m.torso_inertia;
  robot.thigh_inertia = m.thigh_inertia;
  robot.shin_inertia = m.shin_inertia;
  robot.torso_com = m.torso_com;
  robot.thigh_com = m.thigh_com;
  robot.shin_com = m.shin_com;
  robot.hip_min_deg = rad2deg(m.hip_min);
  robot.hip_max_deg = rad2deg(m.hip_max);
  robot.knee_min_deg = rad2deg(m.knee_min);
  robot.knee_max_deg = rad2deg(m.knee_max);
  robot.torque_limit = m.torque_limit;
  robot.pd_kp = m.pd_kp;
  robot.pd_kd = m.pd_kd;
}

RunConfig parse_config(const std::string& yaml_text, const std::string& label) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::ParserException& e) {
    fail(label, e.mark, std::string("parse error: ") + e.msg);
  }
  if (!root.IsMap()) {
    fail(label, root.Mark(), "config must be a mapping");
  }

  RunConfig cfg;

  MapReader top(root, label, "top-level");
  top.read("output_dir", &cfg.output_dir);

  const char* const kSections[] = {"robot", "gait",
                                   "policy", "env",
                                   "ars", "experiment"};
  for (const char* name : kSections) {
    if (!top.subsection(name)) {
      fail(label, root.Mark(),
           std::string("missing required section '") + name + "'");
    }
  }

  {
    MapReader r(root["robot"], label, "robot");
    r.read("torso_mass", &cfg.robot.torso_mass);
    r.read("thigh_mass", &cfg.robot.thigh_mass);
    r.read("shin_mass", &cfg.robot.shin_mass);
    r.read("torso_length", &cfg.robot.torso_length);
    r.read("thigh_length", &cfg.robot.thigh_length);
    r.read("shin_length", &cfg.robot.shin_length);
    r.read("torso_inertia", &cfg.robot.torso_inertia);
    r.read("thigh_inertia", &cfg.robot.thigh_inertia);
    r.read("shin_inertia", &cfg.robot.shin_inertia);
    r.read("torso_com", &cfg.robot.torso_com);
    r.read("thigh_com", &cfg.robot.thigh_com);
    r.read("shin_com", &cfg.robot.shin_com);
    r.read("hip_min_deg", &cfg.robot.hip_min_deg);
    r.read("hip_max_deg", &cfg.robot.hip_max_deg);
    r.read("knee_min_deg", &cfg.robot.knee_min_deg);
    r.read("knee_max_deg", &cfg.robot.knee_max_deg);
    r.read("torque_limit", &cfg.robot.torque_limit);
    r.read("pd_kp", &cfg.robot.pd_kp);
    r.read("pd_kd", &cfg.robot.pd_kd);
    r.finish();
  }

  {
    MapReader r(root["gait"], label, "gait");
    r.read("period_s", &cfg.gait.period_s);
    r.read("hip_height_m", &cfg.gait.hip_height_m);
    r.read("swing_height_m", &cfg.gait.swing_height_m);
    r.read("phase_offset", &cfg.gait.phase_offset);
    r.read("stance_offset_m", &cfg.gait.stance_offset_m);
    r.finish();
  }

  {
    MapReader r(root["policy"], label, "policy");
    r.read("mode", &cfg.policy.mode);
    r.read("step_min", &cfg.policy.step_min);
    r.read("step_max", &cfg.policy.step_max);
    r.read("shift_limit", &cfg.policy.shift_limit);
    r.read("steer_limit_deg", &cfg.policy.steer_limit_deg);
    r.read("k_step", &cfg.policy.k_step);
    r.read("k_step_rate", &cfg.policy.k_step_rate);
    r.read("k_xshift", &cfg.policy.k_xshift);
    r.read("k_xshift_rate", &cfg.policy.k_xshift_rate);
    r.read("k_zshift", &cfg.policy.k_zshift);
    r.read("k_steer", &cfg.policy.k_steer);
    r.read("k_steer_rate", &cfg.policy.k_steer_rate);
    r.read("k_yshift", &cfg.policy.k_yshift);
    r.read("k_yshift_rate", &cfg.policy.k_yshift_rate);
    r.read("nominal_step", &cfg.policy.nominal_step);
    r.read("pitch_setpoint_deg", &cfg.policy.pitch_setpoint_deg);
    r.read("roll_setpoint_deg", &cfg.policy.roll_setpoint_deg);
    r.read("yaw_setpoint_deg", &cfg.policy.yaw_setpoint_deg);
    r.finish();
  }

  {
    MapReader r(root["env"], label, "env");
    r.read("dt_physics", &cfg.env.dt_physics);
    r.read("substeps", &cfg.env.substeps);
    r.read("episode_steps", &cfg.env.episode_steps);
    r.read("planar", &cfg.env.planar);
    r.read("init_step_length", &cfg.env.init_step_length);
    r.read("max_start_pitch_deg", &cfg.env.max_start_pitch_deg);
    r.read("start_margin", &cfg.env.start_margin);
    r.read("joint_stop_stiffness", &cfg.env.joint_stop_stiffness);
    r.read("joint_stop_damping", &cfg.env.joint_stop_damping);
    r.read("action_filter_tau", &cfg.env.action_filter_tau);
    r.read("stance_pitch_gain", &cfg.env.stance_pitch_gain);
    r.read("stance_pitch_lead_s", &cfg.env.stance_pitch_lead_s);
    r.read("start_phase", &cfg.env.start_phase);
    r.read("start_speed", &cfg.env.start_speed);
    r.read("startup_ramp_s", &cfg.env.startup_ramp_s);

    if (const YAML::Node contact = r.subsection("contact")) {
      MapReader c(contact, label, "env.contact");
      c.read("normal_stiffness", &cfg.env.contact.normal_stiffness);
      c.read("normal_damping", &cfg.env.contact.normal_damping);
      c.read("tangent_stiffness", &cfg.env.contact.tangent_stiffness);
      c.read("tangent_damping", &cfg.env.contact.tangent_damping);
      c.read("friction_mu", &cfg.env.contact.friction_mu);
      c.read("min_air_time", &cfg.env.contact.min_air_time);
      c.finish();
    }
    if (const YAML::Node term = r.subsection("termination")) {
      MapReader c(term, label, "env.termination");
      c.read("min_hip_height", &cfg.env.termination.min_hip_height);
      c.read("max_pitch_deg", &cfg.env.termination.max_pitch_deg);
      c.read("max_speed", &cfg.env.termination.max_speed);
      c.finish();
    }
    if (const YAML::Node reward = r.subsection("reward")) {
      MapReader c(reward, label, "env.reward");
      c.read("w_roll", &cfg.env.reward.w_roll);
      c.read("w_pitch", &cfg.env.reward.w_pitch);
      c.read("w_yaw", &cfg.env.reward.w_yaw);
      c.read("w_height", &cfg.env.reward.w_height);
      c.read("w_velocity", &cfg.env.reward.w_velocity);
      c.read("distance_weight", &cfg.env.reward.distance_weight);
      c.read("nominal_velocity", &cfg.env.reward.nominal_velocity);
      c.read("com_height", &cfg.env.reward.com_height);
      c.finish();
    }
    r.finish();
  }

  {
    MapReader r(root["ars"], label, "ars");
    r.read("step_size", &cfg.ars.step_size);
    r.read("noise", &cfg.ars.noise);
    r.read("directions", &cfg.ars.directions);
    r.read("top_directions", &cfg.ars.top_directions);
    r.read("iterations", &cfg.ars.iterations);
    r.read("seed", &cfg.ars.seed);
    r.read("plateau_window", &cfg.ars.plateau_window);
    r.read("plateau_rel_tol", &cfg.ars.plateau_rel_tol);
    r.read("checkpoint_every", &cfg.ars.checkpoint_every);
    r.read("train_inclines_deg", &cfg.ars.train_inclines_deg);
    r.finish();
  }

  {
    MapReader r(root["experiment"], label, "experiment");
    r.read("track", &cfg.experiment.track);
    r.read("eval_episode_steps", &cfg.experiment.eval_episode_steps);
    r.read("perturb_force_n", &cfg.experiment.perturb_force_n);
    r.read("perturb_duration_s", &cfg.experiment.perturb_duration_s);
    r.read("perturb_t_start_s", &cfg.experiment.perturb_t_start_s);
    r.read("perturb_period_s", &cfg.experiment.perturb_period_s);
    r.read("perturb_mode", &cfg.experiment.perturb_mode);
    r.finish();
  }

  top.finish();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error(path + ": cannot open config file");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

std::string effective_config_yaml(const RunConfig& c) {
  YAML::Emitter out;
  out.SetDoublePrecision(std::numeric_limits<double>::max_digits10);
  out.SetFloatPrecision(std::numeric_limits<float>::max_digits10);

  out << YAML::BeginMap;
  out << YAML::Key << "output_dir" << YAML::Value << c.output_dir;

  out << YAML::Key << "robot" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "torso_mass" << YAML::Value << c.robot.torso_mass;
  out << YAML::Key << "thigh_mass" << YAML::Value << c.robot.thigh_mass;
  out << YAML::Key << "shin_mass" << YAML::Value << c.robot.shin_mass;
  out << YAML::Key << "torso_length" << YAML::Value << c.robot.torso_length;
  out << YAML::Key << "thigh_length" << YAML::Value << c.robot.thigh_length;
  out << YAML::Key << "shin_length" << YAML::Value << c.robot.shin_length;
  out << YAML::Key << "torso_inertia" << YAML::Value << c.robot.torso_inertia;
  out << YAML::Key << "thigh_inertia" << YAML::Value << c.robot.thigh_inertia;
  out << YAML::Key << "shin_inertia" << YAML::Value << c.robot.shin_inertia;
  out << YAML::Key << "torso_com" << YAML::Value << c.robot.torso_com;
  out << YAML::Key << "thigh_com" << YAML::Value << c.robot.thigh_com;
  out << YAML::Key << "shin_com" << YAML::Value << c.robot.shin_com;
  out << YAML::Key << "hip_min_deg" << YAML::Value << c.robot.hip_min_deg;
  out << YAML::Key << "hip_max_deg" << YAML::Value << c.robot.hip_max_deg;
  out << YAML::Key << "knee_min_deg" << YAML::Value << c.robot.knee_min_deg;
  out << YAML::Key << "knee_max_deg" << YAML::Value << c.robot.knee_max_deg;
  out << YAML::Key << "torque_limit" << YAML::Value << c.robot.torque_limit;
  out << YAML::Key << "pd_kp" << YAML::Value << c.robot.pd_kp;
  out << YAML::Key << "pd_kd" << YAML::Value << c.robot.pd_kd;
  out << YAML::EndMap;

  out << YAML::Key << "gait" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "period_s" << YAML::Value << c.gait.period_s;
  out << YAML::Key << "hip_height_m" << YAML::Value << c.gait.hip_height_m;
  out << YAML::Key << "swing_height_m" << YAML::Value << c.gait.swing_height_m;
  out << YAML::Key << "phase_offset" << YAML::Value << c.gait.phase_offset;
  out << YAML::Key << "stance_offset_m" << YAML::Value
      << c.gait.stance_offset_m;
  out << YAML::EndMap;

  out << YAML::Key << "policy" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "mode" << YAML::Value << c.policy.mode;
  out << YAML::Key << "step_min" << YAML::Value << c.policy.step_min;
  out << YAML::Key << "step_max" << YAML::Value << c.policy.step_max;
  out << YAML::Key << "shift_limit" << YAML::Value << c.policy.shift_limit;
  out << YAML::Key << "steer_limit_deg" << YAML::Value
      << c.policy.steer_limit_deg;
  out << YAML::Key << "k_step" << YAML::Value << c.policy.k_step;
  out << YAML::Key << "k_step_rate" << YAML::Value << c.policy.k_step_rate;
  out << YAML::Key << "k_xshift" << YAML::Value << c.policy.k_xshift;
  out << YAML::Key << "k_xshift_rate" << YAML::Value
      << c.policy.k_xshift_rate;
  out << YAML::Key << "k_zshift" << YAML::Value << c.policy.k_zshift;
  out << YAML::Key << "k_steer" << YAML::Value << c.policy.k_steer;
  out << YAML::Key << "k_steer_rate" << YAML::Value << c.policy.k_steer_rate;
  out << YAML::Key << "k_yshift" << YAML::Value << c.policy.k_yshift;
  out << YAML::Key << "k_yshift_rate" << YAML::Value
      << c.policy.k_yshift_rate;
  out << YAML::Key << "nominal_step" << YAML::Value << c.policy.nominal_step;
  out << YAML::Key << "pitch_setpoint_deg" << YAML::Value
      << c.policy.pitch_setpoint_deg;
  out << YAML::Key << "roll_setpoint_deg" << YAML::Value
      << c.policy.roll_setpoint_deg;
  out << YAML::Key << "yaw_setpoint_deg" << YAML::Value
      << c.policy.yaw_setpoint_deg;
  out << YAML::EndMap;

  out << YAML::Key << "env" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "dt_physics" << YAML::Value << c.env.dt_physics;
  out << YAML::Key << "substeps" << YAML::Value << c.env.substeps;
  out << YAML::Key << "episode_steps" << YAML::Value << c.env.episode_steps;
  out << YAML::Key << "planar" << YAML::Value << c.env.planar;
  out << YAML::Key << "init_step_length" << YAML::Value
      << c.env.init_step_length;
  out << YAML::Key << "max_start_pitch_deg" << YAML::Value
      << c.env.max_start_pitch_deg;
  out << YAML::Key << "start_margin" << YAML::Value << c.env.start_margin;
  out << YAML::Key << "joint_stop_stiffness" << YAML::Value
      << c.env.joint_stop_stiffness;
  out << YAML::Key << "joint_stop_damping" << YAML::Value
      << c.env.joint_stop_damping;
  out << YAML::Key << "action_filter_tau" << YAML::Value
      << c.env.action_filter_tau;
  out << YAML::Key << "stance_pitch_gain" << YAML::Value
      << c.env.stance_pitch_gain;
  out << YAML::Key << "stance_pitch_lead_s" << YAML::Value
      << c.env.stance_pitch_lead_s;
  out << YAML::Key << "start_phase" << YAML::Value << c.env.start_phase;
  out << YAML::Key << "start_speed" << YAML::Value << c.env.start_speed;
  out << YAML::Key << "startup_ramp_s" << YAML::Value
      << c.env.startup_ramp_s;

  out << YAML::Key << "contact" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "normal_stiffness" << YAML::Value
      << c.env.contact.normal_stiffness;
  out << YAML::Key << "normal_damping" << YAML::Value
      << c.env.contact.normal_damping;
  out << YAML::Key << "tangent_stiffness" << YAML::Value
      << c.env.contact.tangent_stiffness;
  out << YAML::Key << "tangent_damping" << YAML::Value
      << c.env.contact.tangent_damping;
  out << YAML::Key << "friction_mu" << YAML::Value
      << c.env.contact.friction_mu;
  out << YAML::Key << "min_air_time" << YAML::Value
      << c.env.contact.min_air_time;
  out << YAML::EndMap;

  out << YAML::Key << "termination" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "min_hip_height" << YAML::Value
      << c.env.termination.min_hip_height;
  out << YAML::Key << "max_pitch_deg" << YAML::Value
      << c.env.termination.max_pitch_deg;
  out << YAML::Key << "max_speed" << YAML::Value << c.env.termination.max_speed;
  out << YAML::EndMap;

  out << YAML::Key << "reward" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "w_roll" << YAML::Value << c.env.reward.w_roll;
  out << YAML::Key << "w_pitch" << YAML::Value << c.env.reward.w_pitch;
  out << YAML::Key << "w_yaw" << YAML::Value << c.env.reward.w_yaw;
  out << YAML::Key << "w_height" << YAML::Value << c.env.reward.w_height;
  out << YAML::Key << "w_velocity" << YAML::Value << c.env.reward.w_velocity;
  out << YAML::Key << "distance_weight" << YAML::Value
      << c.env.reward.distance_weight;
  out << YAML::Key << "nominal_velocity" << YAML::Value
      << c.env.reward.nominal_velocity;
  out << YAML::Key << "com_height" << YAML::Value << c.env.reward.com_height;
  out << YAML::EndMap;

  out << YAML::EndMap;  // env

  out << YAML::Key << "ars" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "step_size" << YAML::Value << c.ars.step_size;
  out << YAML::Key << "noise" << YAML::Value << c.ars.noise;
  out << YAML::Key << "directions" << YAML::Value << c.ars.directions;
  out << YAML::Key << "top_directions" << YAML::Value << c.ars.top_directions;
  out << YAML::Key << "iterations" << YAML::Value << c.ars.iterations;
  out << YAML::Key << "seed" << YAML::Value << c.ars.seed;
  out << YAML::Key << "plateau_window" << YAML::Value << c.ars.plateau_window;
  out << YAML::Key << "plateau_rel_tol" << YAML::Value
      << c.ars.plateau_rel_tol;
  out << YAML::Key << "checkpoint_every" << YAML::Value
      << c.ars.checkpoint_every;
  out << YAML::Key << "train_inclines_deg" << YAML::Value << YAML::Flow
      << c.ars.train_inclines_deg;
  out << YAML::EndMap;

  out << YAML::Key << "experiment" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "track" << YAML::Value << c.experiment.track;
  out << YAML::Key << "eval_episode_steps" << YAML::Value
      << c.experiment.eval_episode_steps;
  out << YAML::Key << "perturb_force_n" << YAML::Value
      << c.experiment.perturb_force_n;
  out << YAML::Key << "perturb_duration_s" << YAML::Value
      << c.experiment.perturb_duration_s;
  out << YAML::Key << "perturb_t_start_s" << YAML::Value
      << c.experiment.perturb_t_start_s;
  out << YAML::Key << "perturb_period_s" << YAML::Value
      << c.experiment.perturb_period_s;
  out << YAML::Key << "perturb_mode" << YAML::Value
      << c.experiment.perturb_mode;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

void write_effective_config(const RunConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error(path + ": cannot write effective config");
  }
  out << effective_config_yaml(config);
}

PolicyMode parse_policy_mode(const std::string& name) {
  if (name == "reduced") {
    return PolicyMode::kReduced;
  }
  if (name == "full") {
    return PolicyMode::kFull;
  }
  throw std::runtime_error("policy.mode must be 'reduced' or 'full', got '" +
                           name + "'");
}

RobotModel make_robot_model(const RunConfig& c) {
  RobotModel m;
  m.torso_mass = c.robot.torso_mass;
  m.thigh_mass = c.robot.thigh_mass;
  m.shin_mass = c.robot.shin_mass;
  m.torso_length = c.robot.torso_length;
  m.thigh_length = c.robot.thigh_length;
  m.shin_length = c.robot.shin_length;
  m.torso_inertia = c.robot.torso_inertia;
  m.thigh_inertia = c.robot.thigh_inertia;
  m.shin_inertia = c.robot.shin_inertia;
  m.torso_com = c.robot.torso_com;
  m.thigh_com = c.robot.thigh_com;
  m.shin_com = c.robot.shin_com;
  m.hip_min = deg2rad(c.robot.hip_min_deg);
  m.hip_max = deg2rad(c.robot.hip_max_deg);
  m.knee_min = deg2rad(c.robot.knee_min_deg);
  m.knee_max = deg2rad(c.robot.knee_max_deg);
  m.torque_limit = c.robot.torque_limit;
  m.pd_kp = c.robot.pd_kp;
  m.pd_kd = c.robot.pd_kd;
  m.validate();
  return m;
}

GaitConfig make_gait_config(const RunConfig& c) {
  GaitConfig g;
  g.period = c.gait.period_s;
  g.hip_height = c.gait.hip_height_m;
  g.swing_height = c.gait.swing_height_m;
  g.phase_offset = c.gait.phase_offset;
  g.stance_offset = c.gait.stance_offset_m;
  g.validate();
  return g;
}

SeedGains make_seed_gains(const RunConfig& c) {
  SeedGains g;
  g.k_step = c.policy.k_step;
  g.k_step_rate = c.policy.k_step_rate;
  g.k_xshift = c.policy.k_xshift;
  g.k_xshift_rate = c.policy.k_xshift_rate;
  g.k_zshift = c.policy.k_zshift;
  g.k_steer = c.policy.k_steer;
  g.k_steer_rate = c.policy.k_steer_rate;
  g.k_yshift = c.policy.k_yshift;
  g.k_yshift_rate = c.policy.k_yshift_rate;
  g.nominal_step = c.policy.nominal_step;
  g.pitch_setpoint = deg2rad(c.policy.pitch_setpoint_deg);
  g.roll_setpoint = deg2rad(c.policy.roll_setpoint_deg);
  g.yaw_setpoint = deg2rad(c.policy.yaw_setpoint_deg);
  return g;
}

AffinePolicy make_seed_policy(const RunConfig& c) {
  const PolicyMode mode = parse_policy_mode(c.policy.mode);
  AffinePolicy p = build_seed_policy(make_seed_gains(c), mode);

  const double steer = deg2rad(c.policy.steer_limit_deg);
  const double shift = c.policy.shift_limit;
  if (mode == PolicyMode::kReduced) {
    p.clip_lo << c.policy.step_min, -shift, -shift;
    p.clip_hi << c.policy.step_max, shift, shift;
  } else {
    for (int leg = 0; leg < 2; ++leg) {
      const int base = 5 * leg;
      p.clip_lo.segment<5>(base) << c.policy.step_min, -steer, -shift, -shift,
          -shift;
      p.clip_hi.segment<5>(base) << c.policy.step_max, steer, shift, shift,
          shift;
    }
  }
  return p;
}

EnvConfig make_env_config(const RunConfig& c) {
  EnvConfig e;
  e.robot = make_robot_model(c);
  e.gait = make_gait_config(c);

  e.contact.normal_stiffness = c.env.contact.normal_stiffness;
  e.contact.normal_damping = c.env.contact.normal_damping;
  e.contact.tangent_stiffness = c.env.contact.tangent_stiffness;
  e.contact.tangent_damping = c.env.contact.tangent_damping;
  e.contact.friction_mu = c.env.contact.friction_mu;
  e.contact.min_air_time = c.env.contact.min_air_time;

  e.termination.min_hip_height = c.env.termination.min_hip_height;
  e.termination.max_pitch = deg2rad(c.env.termination.max_pitch_deg);
  e.termination.max_speed = c.env.termination.max_speed;

  e.reward.w_roll = c.env.reward.w_roll;
  e.reward.w_pitch = c.env.reward.w_pitch;
  e.reward.w_yaw = c.env.reward.w_yaw;
  e.reward.w_height = c.env.reward.w_height;
  e.reward.w_velocity = c.env.reward.w_velocity;
  e.reward.distance_weight = c.env.reward.distance_weight;
  e.reward.nominal_velocity = c.env.reward.nominal_velocity;
  e.reward.com_height = c.env.reward.com_height;

  e.timing.dt_physics = c.env.dt_physics;
  e.timing.substeps = c.env.substeps;
  e.timing.episode_steps = c.env.episode_steps;

  e.mode = parse_policy_mode(c.policy.mode);
  e.planar = c.env.planar;
  e.init_step_length = c.env.init_step_length;
  e.max_start_pitch = deg2rad(c.env.max_start_pitch_deg);
  e.start_margin = c.env.start_margin;
  e.joint_stop_stiffness = c.env.joint_stop_stiffness;
  e.joint_stop_damping = c.env.joint_stop_damping;
  e.action_filter_tau = c.env.action_filter_tau;
  e.stance_pitch_gain = c.env.stance_pitch_gain;
  e.stance_pitch_lead_s = c.env.stance_pitch_lead_s;
  e.start_phase = c.env.start_phase;
  e.start_speed = c.env.start_speed;
  e.startup_ramp_s = c.env.startup_ramp_s;
  return e;
}

ArsConfig make_ars_config(const RunConfig& c) {
  ArsConfig a;
  a.step_size = c.ars.step_size;
  a.noise = c.ars.noise;
  a.directions = c.ars.directions;
  a.top_directions = c.ars.top_directions;
  a.iterations = c.ars.iterations;
  a.seed = c.ars.seed;
  a.plateau_window = c.ars.plateau_window;
  a.plateau_rel_tol = c.ars.plateau_rel_tol;
  a.validate();
  return a;
}

std::vector<double> train_inclines_rad(const RunConfig& c) {
  std::vector<double> out;
  out.reserve(c.ars.train_inclines_deg.size());
  for (const double deg : c.ars.train_inclines_deg) {
    out.push_back(deg2rad(deg));
  }
  if (out.empty()) {
    throw std::runtime_error("ars.train_inclines_deg must not be empty");
  }
  return out;
}

}  // namespace slopewalk
