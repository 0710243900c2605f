#include "sqlreward/grpo/grpo.h"

#include <algorithm>
#include <cmath>

#include "sqlreward/error.h"

namespace sqlreward::grpo {

void GrpoParams::validate() const {
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  if (!(beta >= 0.0)) throw InvalidArgument("beta must be non-negative");
  if (!(sigma_floor > 0.0)) throw InvalidArgument("sigma_floor must be positive");
}

std::vector<double> advantages(const std::vector<double>& rewards, const GrpoParams& params) {
  const std::size_t g = rewards.size();
  if (g < 2) throw GroupTooSmall("a group needs at least 2 rewards, got " + std::to_string(g));
  for (double r : rewards) {
    if (!std::isfinite(r)) throw InvalidArgument("rewards must be finite");
  }
  double mean = 0.0;
  for (double r : rewards) mean += r;
  mean /= static_cast<double>(g);
  double var = 0.0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  const double sigma = std::sqrt(var / static_cast<double>(g));

  std::vector<double> a(g, 0.0);
  if (sigma < params.sigma_floor) return a;
  for (std::size_t i = 0; i < g; ++i) a[i] = (rewards[i] - mean) / sigma;
  return a;
}

std::vector<double> advantages(const RolloutGroup& group, const GrpoParams& params) {
  return advantages(group.rewards, params);
}

double surrogate_term(double ratio, double advantage, const GrpoParams& params) {
  if (!(ratio > 0.0)) throw NonPositiveRatio("probability ratio must be positive, got " + std::to_string(ratio));
  const double clipped = std::clamp(ratio, 1.0 - params.epsilon, 1.0 + params.epsilon);
  return std::min(ratio * advantage, clipped * advantage);
}

double objective(const RolloutGroup& group, const GrpoParams& params) {
  if (!group.ratios || !group.kl_estimates) {
    throw MissingRatios("group " + group.query_id + " lacks ratios or KL estimates");
  }
  const std::size_t g = group.rewards.size();
  if (group.ratios->size() != g || group.kl_estimates->size() != g) {
    throw InvalidArgument("group " + group.query_id + ": ratios and KL estimates must match the group size");
  }
  const std::vector<double> a = advantages(group.rewards, params);
  double sum = 0.0;
  for (std::size_t i = 0; i < g; ++i) {
    const double kl = (*group.kl_estimates)[i];
    if (!(kl >= 0.0)) throw InvalidArgument("KL estimates must be non-negative");
    sum += surrogate_term((*group.ratios)[i], a[i], params) - params.beta * kl;
  }
  return sum / static_cast<double>(g);
}

}  // namespace sqlreward::grpo
