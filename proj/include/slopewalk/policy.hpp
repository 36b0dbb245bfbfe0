#pragma once

#include <array>
#include <string>
#include <vector>

#include "slopewalk/gait.hpp"
#include "slopewalk/math_util.hpp"

namespace slopewalk {

/// Observation/action configuration. Reduced is the planar Rabbit setup
/// (3 observations, one shared action set); full is the 3D layout
/// (8 observations, independent per-leg actions).
enum class PolicyMode { kReduced, kFull };

int observation_dim(PolicyMode mode);  // 3 or 8
int action_dim(PolicyMode mode);       // 3 or 10

/// Full observation layout:
///   [roll, pitch, yaw, roll_rate, pitch_rate, yaw_rate,
///    support_roll, support_pitch]
/// Reduced layout: [pitch, pitch_rate, support_pitch].
std::vector<std::string> observation_labels(PolicyMode mode);

/// Full action layout, per leg {step_length, steering, x_shift, y_shift,
/// z_shift}, left leg first. Reduced layout: [step_length, x_shift, z_shift]
/// shared by both legs.
std::vector<std::string> action_labels(PolicyMode mode);

/// Builds the observation vector from the planar sim quantities. In full
/// mode the out-of-plane entries (roll, yaw, their rates, support roll) are
/// identically zero.
Eigen::VectorXd build_observation(double pitch, double pitch_rate,
                                  double support_pitch, PolicyMode mode);

/// Affine end-foot-modulating policy: action = M * s + offset, then clipped.
/// Only M is learnable; the offset carries the seed constants (nominal step
/// length and setpoint products) and stays fixed through training.
struct AffinePolicy {
  PolicyMode mode = PolicyMode::kReduced;
  Eigen::MatrixXd M;          // action_dim x observation_dim
  Eigen::VectorXd offset;     // action_dim
  Eigen::VectorXd clip_lo;    // action_dim
  Eigen::VectorXd clip_hi;    // action_dim

  int learnable_count() const { return static_cast<int>(M.size()); }

  /// M * s + offset, unclipped. Throws std::invalid_argument on a
  /// dimension mismatch.
  Eigen::VectorXd evaluate(const Eigen::VectorXd& s) const;
};

/// Componentwise clamp of a raw action vector.
Eigen::VectorXd clip_action(const Eigen::VectorXd& raw,
                            const Eigen::VectorXd& lo,
                            const Eigen::VectorXd& hi);

/// Expands a clipped action vector into per-leg gait actions. In reduced
/// mode both legs share one {step_length, x_shift, z_shift} set. When
/// `planar` is set, steering and y-shift are forced to zero.
std::array<GaitAction, 2> to_leg_actions(const Eigen::VectorXd& clipped,
                                         PolicyMode mode, bool planar);

/// Hand-designed balance gains used to seed the policy matrix.
struct SeedGains {
  double k_step = 0.4;         // step length vs pitch error
  double k_step_rate = 0.12;   // step length vs pitch rate
  double k_yshift = 0.0;       // y-shift vs roll error (full mode)
  double k_yshift_rate = 0.0;
  double k_steer = 0.0;        // steering vs yaw error (full mode)
  double k_steer_rate = 0.0;
  double k_xshift = 0.3;       // x-shift vs (pitch error - support pitch)
  double k_xshift_rate = 0.05;
  double k_zshift = -0.6;      // z-shift vs support pitch
  double nominal_step = 0.15;  // m, step length at zero pitch error
  double roll_setpoint = 0.0;  // rad
  double pitch_setpoint = 0.0;
  double yaw_setpoint = 0.0;
};

/// Default action clip bounds: step length [-0.3, 0.4] m, shifts
/// +/- 0.12 m, steering +/- 0.5 rad.
void default_clip_bounds(PolicyMode mode, Eigen::VectorXd* lo,
                         Eigen::VectorXd* hi);

/// Populates the sparse seed matrix encoding the balance heuristics:
/// step length from pitch and pitch rate, x-shift from pitch error minus
/// support pitch, z-shift from support pitch, and (full mode) y-shift from
/// roll and steering from yaw. Constant terms fold into the fixed offset.
AffinePolicy build_seed_policy(const SeedGains& gains, PolicyMode mode);

/// Plain-text policy file, round-trips bit-exactly.
void save_policy(const std::string& path, const AffinePolicy& policy);
AffinePolicy load_policy(const std::string& path);

}  // namespace slopewalk
