#pragma once

#include <cstdint>

namespace gcbm {

enum class ThresholdRegime {
  kConstantD,      // fixed-d threshold
  kScalingUpper,   // scaling-d sufficient condition
  kScalingLower,   // scaling-d necessary condition
};

/// A single information-theoretic boundary on the expected sample count
/// p*C(n,d), together with the edge probability that realizes it.
struct ThresholdReport {
  double sample_complexity_limit = 0.0;  // value of p*C(n,d) at the boundary
  double required_p = 0.0;               // limit / C(n,d), log-space computed
  double log_required_p = 0.0;
  ThresholdRegime regime = ThresholdRegime::kConstantD;
  double slack = 0.0;  // epsilon applied multiplicatively
  // The fixed-d formulas are proven for d constant in n; flagged when
  // d > log n so callers know the regime assumption is strained.
  bool d_exceeds_log_n = false;
};

/// Binary entropy in bits (base 2), with 0*log0 = 0, so 1 - H(theta) is the
/// BSC capacity. Note the thresholds themselves use natural logarithms; the
/// base-2 choice here only affects the Shannon-capacity bound below.
double binary_entropy(double theta);

/// KL divergence D(Bern(1/2) || Bern(theta)) in nats. Domain (0, 1/2).
double divergence_half_theta(double theta);

/// (sqrt(1-theta) - sqrt(theta))^2, equal to 1 - exp(-D(1/2||theta)).
/// Defined by continuity as 1 at theta = 0.
double noise_separation(double theta);

/// Fixed-d homogeneity boundary: p*C(n,d) = (2^(d-2)/d) * n ln n / separation.
ThresholdReport homogeneity_threshold(std::uint32_t n, std::uint32_t d,
                                      double theta, double epsilon = 0.0);

/// Fixed-d parity boundary: p*C(n,d) = (1/d) * n ln n / separation.
ThresholdReport parity_threshold(std::uint32_t n, std::uint32_t d,
                                 double theta, double epsilon = 0.0);

/// The four scaling-d parity boundaries. Recovery is guaranteed above
/// upper() and impossible below lower().
struct ScalingBounds {
  ThresholdReport upper_log_term;     // (1+eps) * (5/2)/d * n ln n / separation
  ThresholdReport upper_linear_term;  // (1+eps) * 5 ln 2 * n / separation
  ThresholdReport lower_log_term;     // (1-eps) * (1/d) * n ln n / separation
  ThresholdReport lower_linear_term;  // n / (1 - H(theta)), Shannon bound

  double upper() const;
  double lower() const;
};

ScalingBounds parity_scaling_bounds(std::uint32_t n, std::uint32_t d,
                                    double theta, double epsilon = 0.0);

/// Expected rate of the induced generator-matrix code: n / (p*C(n,d)).
double ldgm_rate(std::uint32_t n, std::uint32_t d, double p);

/// Conjectured exact scaling-d parity limit:
/// max{ n/(1-H(theta)), (1/d) n ln n / separation }. Not a theorem.
double conjectured_parity_limit(std::uint32_t n, std::uint32_t d, double theta);

}  // namespace gcbm
