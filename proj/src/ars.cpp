#include "slopewalk/ars.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace slopewalk {

void ArsConfig::validate() const {
  if (!(step_size > 0.0) || !(noise > 0.0)) {
    throw std::invalid_argument("ars: step_size and noise must be > 0");
  }
  if (directions < 1 || top_directions < 1 ||
      top_directions > directions) {
    throw std::invalid_argument("ars: need 1 <= top_directions <= directions");
  }
  if (iterations < 0) {
    throw std::invalid_argument("ars: iterations must be >= 0");
  }
}

std::vector<Eigen::MatrixXd> sample_directions(int count, int rows, int cols,
                                               Rng& rng) {
  std::vector<Eigen::MatrixXd> dirs;
  dirs.reserve(static_cast<size_t>(count));
  for (int k = 0; k < count; ++k) {
    Eigen::MatrixXd d(rows, cols);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        d(i, j) = rng.normal();
      }
    }
    dirs.push_back(std::move(d));
  }
  return dirs;
}

ArsUpdate ars_update(const Eigen::MatrixXd& m,
                     const std::vector<Eigen::MatrixXd>& directions,
                     const std::vector<double>& reward_plus,
                     const std::vector<double>& reward_minus,
                     const ArsConfig& config) {
  const size_t n = directions.size();
  if (n == 0 || reward_plus.size() != n || reward_minus.size() != n) {
    throw std::invalid_argument("ars_update: mismatched rollout counts");
  }
  const size_t b = std::min<size_t>(static_cast<size_t>(config.top_directions), n);

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t c) {
    return std::max(reward_plus[a], reward_minus[a]) >
           std::max(reward_plus[c], reward_minus[c]);
  });

  double sum = 0.0;
  double sum_sq = 0.0;
  for (size_t k = 0; k < b; ++k) {
    for (const double r : {reward_plus[order[k]], reward_minus[order[k]]}) {
      sum += r;
      sum_sq += r * r;
    }
  }
  const double count = 2.0 * static_cast<double>(b);
  const double mean = sum / count;
  const double variance = std::max(0.0, sum_sq / count - mean * mean);
  const double sigma = std::sqrt(variance);

  ArsUpdate out;
  out.sigma_r = sigma;
  if (sigma < 1e-8) {
    out.m = m;
    out.skipped = true;
    return out;
  }

  Eigen::MatrixXd step = Eigen::MatrixXd::Zero(m.rows(), m.cols());
  for (size_t k = 0; k < b; ++k) {
    const size_t i = order[k];
    step += (reward_plus[i] - reward_minus[i]) * directions[i];
  }
  out.m = m + (config.step_size / (static_cast<double>(b) * sigma)) * step;
  return out;
}

}  // namespace slopewalk
