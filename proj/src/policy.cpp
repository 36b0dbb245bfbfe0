#include "slopewalk/policy.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace slopewalk {

int observation_dim(PolicyMode mode) {
  return mode == PolicyMode::kReduced ? 3 : 8;
}

int action_dim(PolicyMode mode) {
  return mode == PolicyMode::kReduced ? 3 : 10;
}

std::vector<std::string> observation_labels(PolicyMode mode) {
  if (mode == PolicyMode::kReduced) {
    return {"pitch", "pitch_rate", "support_pitch"};
  }
  return {"roll",      "pitch",    "yaw",          "roll_rate",
          "pitch_rate", "yaw_rate", "support_roll", "support_pitch"};
}

std::vector<std::string> action_labels(PolicyMode mode) {
  if (mode == PolicyMode::kReduced) {
    return {"step_length", "x_shift", "z_shift"};
  }
  std::vector<std::string> labels;
  for (const char* leg : {"L", "R"}) {
    for (const char* a :
         {"step_length", "steering", "x_shift", "y_shift", "z_shift"}) {
      labels.push_back(std::string(leg) + "." + a);
    }
  }
  return labels;
}

Eigen::VectorXd build_observation(double pitch, double pitch_rate,
                                  double support_pitch, PolicyMode mode) {
  if (mode == PolicyMode::kReduced) {
    Eigen::VectorXd s(3);
    s << pitch, pitch_rate, support_pitch;
    return s;
  }
  Eigen::VectorXd s = Eigen::VectorXd::Zero(8);
  s(1) = pitch;
  s(4) = pitch_rate;
  s(7) = support_pitch;
  return s;
}

Eigen::VectorXd AffinePolicy::evaluate(const Eigen::VectorXd& s) const {
  if (s.size() != M.cols() || offset.size() != M.rows()) {
    throw std::invalid_argument("policy: dimension mismatch");
  }
  return M * s + offset;
}

Eigen::VectorXd clip_action(const Eigen::VectorXd& raw,
                            const Eigen::VectorXd& lo,
                            const Eigen::VectorXd& hi) {
  return raw.cwiseMax(lo).cwiseMin(hi);
}

std::array<GaitAction, 2> to_leg_actions(const Eigen::VectorXd& clipped,
                                         PolicyMode mode, bool planar) {
  std::array<GaitAction, 2> actions;
  if (mode == PolicyMode::kReduced) {
    GaitAction a;
    a.step_length = clipped(0);
    a.shift_x = clipped(1);
    a.shift_z = clipped(2);
    actions[0] = actions[1] = a;
  } else {
    for (int leg = 0; leg < 2; ++leg) {
      const int base = 5 * leg;
      GaitAction a;
      a.step_length = clipped(base + 0);
      a.steering = clipped(base + 1);
      a.shift_x = clipped(base + 2);
      a.shift_y = clipped(base + 3);
      a.shift_z = clipped(base + 4);
      actions[leg] = a;
    }
  }
  if (planar) {
    for (GaitAction& a : actions) {
      a.steering = 0.0;
      a.shift_y = 0.0;
    }
  }
  return actions;
}

void default_clip_bounds(PolicyMode mode, Eigen::VectorXd* lo,
                         Eigen::VectorXd* hi) {
  const int m = action_dim(mode);
  lo->resize(m);
  hi->resize(m);
  if (mode == PolicyMode::kReduced) {
    *lo << -0.3, -0.12, -0.12;
    *hi << 0.4, 0.12, 0.12;
  } else {
    for (int leg = 0; leg < 2; ++leg) {
      const int base = 5 * leg;
      (*lo)(base + 0) = -0.3;
      (*hi)(base + 0) = 0.4;
      (*lo)(base + 1) = -0.5;
      (*hi)(base + 1) = 0.5;
      for (int k = 2; k < 5; ++k) {
        (*lo)(base + k) = -0.12;
        (*hi)(base + k) = 0.12;
      }
    }
  }
}

AffinePolicy build_seed_policy(const SeedGains& gains, PolicyMode mode) {
  AffinePolicy p;
  p.mode = mode;
  const int n = observation_dim(mode);
  const int m = action_dim(mode);
  p.M = Eigen::MatrixXd::Zero(m, n);
  p.offset = Eigen::VectorXd::Zero(m);
  default_clip_bounds(mode, &p.clip_lo, &p.clip_hi);

  if (mode == PolicyMode::kReduced) {
    // obs = [pitch, pitch_rate, support_pitch]
    p.M(0, 0) = gains.k_step;
    p.M(0, 1) = gains.k_step_rate;
    p.offset(0) = gains.nominal_step - gains.k_step * gains.pitch_setpoint;
    p.M(1, 0) = gains.k_xshift;
    p.M(1, 1) = gains.k_xshift_rate;
    p.M(1, 2) = -gains.k_xshift;
    p.offset(1) = -gains.k_xshift * gains.pitch_setpoint;
    p.M(2, 2) = gains.k_zshift;
    return p;
  }

  for (int leg = 0; leg < 2; ++leg) {
    const int base = 5 * leg;
    p.M(base + 0, 1) = gains.k_step;
    p.M(base + 0, 4) = gains.k_step_rate;
    p.offset(base + 0) = gains.nominal_step - gains.k_step * gains.pitch_setpoint;
    p.M(base + 1, 2) = gains.k_steer;
    p.M(base + 1, 5) = gains.k_steer_rate;
    p.offset(base + 1) = -gains.k_steer * gains.yaw_setpoint;
    p.M(base + 2, 1) = gains.k_xshift;
    p.M(base + 2, 4) = gains.k_xshift_rate;
    p.M(base + 2, 7) = -gains.k_xshift;
    p.offset(base + 2) = -gains.k_xshift * gains.pitch_setpoint;
    p.M(base + 3, 0) = gains.k_yshift;
    p.M(base + 3, 3) = gains.k_yshift_rate;
    p.offset(base + 3) = -gains.k_yshift * gains.roll_setpoint;
    p.M(base + 4, 7) = gains.k_zshift;
  }
  return p;
}

namespace {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_row(std::ostream& out, const double* v, int n) {
  for (int i = 0; i < n; ++i) {
    out << (i ? " " : "") << fmt17(v[i]);
  }
  out << "\n";
}

void expect(std::istream& in, const std::string& token,
            const std::string& path) {
  std::string got;
  in >> got;
  if (got != token) {
    throw std::runtime_error("policy file " + path + ": expected '" + token +
                             "', got '" + got + "'");
  }
}

}  // namespace

void save_policy(const std::string& path, const AffinePolicy& policy) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("policy file " + path + ": cannot open for write");
  }
  out << "slopewalk-policy v1\n";
  out << "mode " << (policy.mode == PolicyMode::kReduced ? "reduced" : "full")
      << "\n";
  out << "obs_dim " << policy.M.cols() << "\n";
  out << "act_dim " << policy.M.rows() << "\n";
  out << "M\n";
  for (int r = 0; r < policy.M.rows(); ++r) {
    Eigen::VectorXd row = policy.M.row(r);
    write_row(out, row.data(), static_cast<int>(row.size()));
  }
  out << "b\n";
  write_row(out, policy.offset.data(), static_cast<int>(policy.offset.size()));
  out << "clip_lo\n";
  write_row(out, policy.clip_lo.data(), static_cast<int>(policy.clip_lo.size()));
  out << "clip_hi\n";
  write_row(out, policy.clip_hi.data(), static_cast<int>(policy.clip_hi.size()));
  if (!out) {
    throw std::runtime_error("policy file " + path + ": write failed");
  }
}

AffinePolicy load_policy(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("policy file " + path + ": cannot open");
  }
  std::string magic, version;
  in >> magic >> version;
  if (magic != "slopewalk-policy" || version != "v1") {
    throw std::runtime_error("policy file " + path + ": bad header");
  }
  AffinePolicy p;
  expect(in, "mode", path);
  std::string mode;
  in >> mode;
  if (mode == "reduced") {
    p.mode = PolicyMode::kReduced;
  } else if (mode == "full") {
    p.mode = PolicyMode::kFull;
  } else {
    throw std::runtime_error("policy file " + path + ": unknown mode '" +
                             mode + "'");
  }
  int obs = 0, act = 0;
  expect(in, "obs_dim", path);
  in >> obs;
  expect(in, "act_dim", path);
  in >> act;
  if (!in || obs != observation_dim(p.mode) || act != action_dim(p.mode)) {
    throw std::runtime_error("policy file " + path +
                             ": dimensions inconsistent with mode");
  }
  auto read_vec = [&](const char* name, Eigen::VectorXd* v, int n) {
    expect(in, name, path);
    v->resize(n);
    for (int i = 0; i < n; ++i) {
      in >> (*v)(i);
    }
  };
  expect(in, "M", path);
  p.M.resize(act, obs);
  for (int r = 0; r < act; ++r) {
    for (int c = 0; c < obs; ++c) {
      in >> p.M(r, c);
    }
  }
  read_vec("b", &p.offset, act);
  read_vec("clip_lo", &p.clip_lo, act);
  read_vec("clip_hi", &p.clip_hi, act);
  if (!in) {
    throw std::runtime_error("policy file " + path + ": truncated or invalid");
  }
  return p;
}

}  // namespace slopewalk
