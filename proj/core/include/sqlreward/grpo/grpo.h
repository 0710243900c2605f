#pragma once

#include <optional>
#include <string>
#include <vector>

namespace sqlreward::grpo {

struct GrpoParams {
  double epsilon = 0.2;
  double beta = 0.01;
  double sigma_floor = 1e-8;

  // Throws InvalidArgument.
  void validate() const;
};

struct RolloutGroup {
  std::string query_id;
  std::vector<double> rewards;
  // pi_theta / pi_theta_old per response.
  std::optional<std::vector<double>> ratios;
  std::optional<std::vector<double>> kl_estimates;
};

// (r_i - mean) / std with the population standard deviation. All zeros when
// std falls below sigma_floor. Throws GroupTooSmall for fewer than two
// rewards.
std::vector<double> advantages(const std::vector<double>& rewards, const GrpoParams& params = {});
std::vector<double> advantages(const RolloutGroup& group, const GrpoParams& params = {});

// min(ratio * A, clip(ratio, 1 - eps, 1 + eps) * A). Throws
// NonPositiveRatio.
double surrogate_term(double ratio, double advantage, const GrpoParams& params = {});

// Mean over the group of surrogate_term - beta * kl. Throws MissingRatios
// when ratios or KL estimates are absent.
double objective(const RolloutGroup& group, const GrpoParams& params = {});

}  // namespace sqlreward::grpo
