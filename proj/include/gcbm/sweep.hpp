#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gcbm/decoders.hpp"
#include "gcbm/model.hpp"

namespace gcbm {

enum class DecoderMethod { kMlExhaustive, kGf2, kTwoStage };

const char* method_name(DecoderMethod m);  // "ml" / "gf2" / "alg1"
DecoderMethod method_from_string(std::string_view text);

enum class NormalizationMode {
  kTheoremThreshold,  // fixed-d closed-form threshold for the chosen kind
  kLinearMax,         // max(n, n ln n / d)
};

/// Monte Carlo experiment grid: the cartesian product of n, d and theta lists
/// defines the curves; each curve is evaluated at every multiplier of its
/// normalization threshold.
struct SweepSpec {
  MeasurementKind kind = MeasurementKind::kHomogeneity;
  DecoderMethod method = DecoderMethod::kTwoStage;
  std::vector<std::uint32_t> n_values;
  std::vector<std::uint32_t> d_values;
  std::vector<double> theta_values{0.0};
  std::vector<double> multipliers;
  std::uint32_t trials = 0;  // 0 -> kind default (100 homogeneity, 50 parity)
  std::uint64_t master_seed = 1;
  NormalizationMode normalization = NormalizationMode::kTheoremThreshold;
  // Ground truth per trial is uniform over {0,1}^n by default; balanced
  // forces the floor(n/2) / ceil(n/2) split.
  bool balanced_truth = false;
  double refine_c = 2.0;
  SpectralConfig spectral;

  std::uint32_t effective_trials() const;
  void validate() const;  // throws ConfigError before any trial runs
};

struct TrialRecord {
  std::uint64_t samples = 0;
  bool success = false;
};

struct SweepRow {
  MeasurementKind kind;
  std::uint32_t n = 0;
  std::uint32_t d = 0;
  double theta = 0.0;
  double multiplier = 0.0;
  double mean_samples = 0.0;
  std::uint32_t successes = 0;
  std::uint32_t trials = 0;
  double rate = 0.0;
  double seconds = 0.0;  // measured wall time; excluded from CSV by default
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

/// Runs every grid point. Trials execute in a work pool of `jobs` threads
/// (0 = hardware concurrency); results are aggregated in trial-index order,
/// so the outcome is identical for any worker count. Per-trial seeds are
/// hash(master_seed, point_id, trial_index).
SweepResult run_sweep(const SweepSpec& spec, unsigned jobs = 0);

/// CSV with header kind,n,d,theta,multiplier,mean_samples,successes,trials,
/// rate,seconds. Deterministic byte-for-byte for a given SweepResult; the
/// seconds column is written as 0 unless include_timing is set (measured wall
/// time is not reproducible across runs).
void emit_csv(const SweepResult& result, std::ostream& out,
              bool include_timing = false);
void emit_csv_file(const SweepResult& result, const std::string& path,
                   bool include_timing = false);

/// Self-contained python/matplotlib script plotting one success-rate curve
/// per (kind, n, d, theta) combination from the given CSV.
void emit_plot_script(const SweepResult& result, const std::string& csv_path,
                      const std::string& script_path);

// Flat key = value config (lists comma-separated). Keys: kind, method, n, d,
// theta, multipliers, trials, master_seed, normalization (theorem|linear),
// balanced, refine_c, power_iterations, tolerance, deflation.
SweepSpec parse_sweep_config(std::istream& in);
SweepSpec parse_sweep_config_file(const std::string& path);

}  // namespace gcbm
