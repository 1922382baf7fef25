#include "gcbm/limits.hpp"

#include <algorithm>
#include <cmath>

#include "gcbm/combinatorics.hpp"
#include "gcbm/errors.hpp"

namespace gcbm {

namespace {

ThresholdReport make_report(double limit, std::uint32_t n, std::uint32_t d,
                            ThresholdRegime regime, double epsilon) {
  ThresholdReport report;
  report.sample_complexity_limit = limit;
  report.log_required_p =
      std::log(limit) -
      log_binomial(static_cast<double>(n), static_cast<double>(d));
  report.required_p = std::exp(report.log_required_p);
  report.regime = regime;
  report.slack = epsilon;
  report.d_exceeds_log_n =
      static_cast<double>(d) > std::log(static_cast<double>(n));
  return report;
}

void check_common(std::uint32_t n, std::uint32_t d, double theta) {
  if (d < 2 || d > n) throw DomainError("threshold: need 2 <= d <= n");
  if (!(theta >= 0.0 && theta < 0.5)) {
    throw DomainError("threshold: need 0 <= theta < 1/2");
  }
}

}  // namespace

double binary_entropy(double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw DomainError("binary_entropy: need 0 <= theta <= 1");
  }
  double h = 0.0;
  if (theta > 0.0) h -= theta * std::log2(theta);
  if (theta < 1.0) h -= (1.0 - theta) * std::log2(1.0 - theta);
  return h;
}

double divergence_half_theta(double theta) {
  if (!(theta > 0.0 && theta < 0.5)) {
    throw DomainError("divergence_half_theta: need 0 < theta < 1/2");
  }
  return 0.5 * std::log(0.5 / theta) + 0.5 * std::log(0.5 / (1.0 - theta));
}

double noise_separation(double theta) {
  if (!(theta >= 0.0 && theta < 0.5)) {
    throw DomainError("noise_separation: need 0 <= theta < 1/2");
  }
  const double diff = std::sqrt(1.0 - theta) - std::sqrt(theta);
  return diff * diff;
}

ThresholdReport homogeneity_threshold(std::uint32_t n, std::uint32_t d,
                                      double theta, double epsilon) {
  check_common(n, d, theta);
  const double limit = (1.0 + epsilon) * std::exp2(static_cast<double>(d) - 2.0) /
                       static_cast<double>(d) * static_cast<double>(n) *
                       std::log(static_cast<double>(n)) /
                       noise_separation(theta);
  return make_report(limit, n, d, ThresholdRegime::kConstantD, epsilon);
}

ThresholdReport parity_threshold(std::uint32_t n, std::uint32_t d, double theta,
                                 double epsilon) {
  check_common(n, d, theta);
  const double limit = (1.0 + epsilon) / static_cast<double>(d) *
                       static_cast<double>(n) *
                       std::log(static_cast<double>(n)) /
                       noise_separation(theta);
  return make_report(limit, n, d, ThresholdRegime::kConstantD, epsilon);
}

double ScalingBounds::upper() const {
  return std::max(upper_log_term.sample_complexity_limit,
                  upper_linear_term.sample_complexity_limit);
}

double ScalingBounds::lower() const {
  return std::max(lower_log_term.sample_complexity_limit,
                  lower_linear_term.sample_complexity_limit);
}

ScalingBounds parity_scaling_bounds(std::uint32_t n, std::uint32_t d,
                                    double theta, double epsilon) {
  check_common(n, d, theta);
  if (2 * d > n) throw DomainError("parity_scaling_bounds: need d <= n/2");
  const double sep = noise_separation(theta);
  const double nd = static_cast<double>(n);
  const double dd = static_cast<double>(d);
  const double nlogn = nd * std::log(nd);
  ScalingBounds bounds;
  bounds.upper_log_term =
      make_report((1.0 + epsilon) * 2.5 / dd * nlogn / sep, n, d,
                  ThresholdRegime::kScalingUpper, epsilon);
  bounds.upper_linear_term =
      make_report((1.0 + epsilon) * 5.0 * std::log(2.0) * nd / sep, n, d,
                  ThresholdRegime::kScalingUpper, epsilon);
  bounds.lower_log_term =
      make_report((1.0 - epsilon) / dd * nlogn / sep, n, d,
                  ThresholdRegime::kScalingLower, epsilon);
  bounds.lower_linear_term =
      make_report(nd / (1.0 - binary_entropy(theta)), n, d,
                  ThresholdRegime::kScalingLower, epsilon);
  return bounds;
}

double ldgm_rate(std::uint32_t n, std::uint32_t d, double p) {
  if (d < 2 || d > n) throw DomainError("ldgm_rate: need 2 <= d <= n");
  if (!(p > 0.0 && p <= 1.0)) {
    throw DomainError("ldgm_rate: need 0 < p <= 1");
  }
  return std::exp(std::log(static_cast<double>(n)) - std::log(p) -
                  log_binomial(static_cast<double>(n), static_cast<double>(d)));
}

double conjectured_parity_limit(std::uint32_t n, std::uint32_t d,
                                double theta) {
  check_common(n, d, theta);
  const double shannon = static_cast<double>(n) / (1.0 - binary_entropy(theta));
  const double logterm = static_cast<double>(n) *
                         std::log(static_cast<double>(n)) /
                         (static_cast<double>(d) * noise_separation(theta));
  return std::max(shannon, logterm);
}

}  // namespace gcbm
