#pragma once

#include <cstdint>
#include <string>

#include "gcbm/bitvec.hpp"
#include "gcbm/model.hpp"

namespace gcbm {

struct DecodeResult {
  BitVector estimate;
  std::uint64_t objective = 0;       // hamming_objective(ms, estimate)
  std::uint32_t iterations = 0;      // refinement sweeps executed
  std::uint32_t flips_last_sweep = 0;
  std::string method;
  bool tie_broken = false;           // >= 2 non-equivalent minimizers seen
};

struct SpectralConfig {
  std::uint32_t power_iterations = 200;
  double tolerance = 1e-9;
  // When set, iterates are projected off the all-ones direction each step
  // instead of relying on mean-centering alone.
  bool deflation = false;

  void validate() const;
};

enum class UpdateSchedule {
  kSynchronous,  // all flip decisions computed against X^(t), applied together
  kSequential,   // experimental in-place variant, not the reference rule
};

struct MlOptions {
  // Lexicographic-minimum tie resolution by default; seeded uniform choice
  // among minimizers on request.
  bool randomized_ties = false;
  std::uint64_t tie_seed = 0;
};

/// Exhaustive minimizer of the Hamming objective over all label vectors
/// (over one representative per complement class when the measurement is
/// complement-invariant). Budget n <= 24.
DecodeResult decode_ml_exhaustive(const MeasurementSet& ms,
                                  const MlOptions& options = {});

/// Noiseless parity decoding: solve {xor of x_i over each edge = Y_E} over
/// GF(2) by Gaussian elimination on packed 64-bit rows. Labels are treated as
/// exact. Throws InconsistentSystemError / UnderdeterminedError.
DecodeResult decode_parity_noiseless(const MeasurementSet& ms);

/// Initial estimate for homogeneity measurements: leading eigenvector (by
/// power iteration) of the mean-centered pairwise co-occurrence matrix
/// A[u][v] = sum of labels over sampled edges containing both u and v,
/// thresholded at zero by sign. Deterministic given (ms, cfg).
BitVector spectral_init(const MeasurementSet& ms, const SpectralConfig& cfg);

/// Coordinate-flip local refinement: per sweep, node i is flipped iff
/// d_H(X) >= d_H(X xor e_i), evaluated incrementally on the edges incident to
/// i. Stops early on a zero-flip sweep. Nodes with no incident edges are
/// frozen: for them the two objectives are always equal and the >= rule would
/// oscillate forever.
DecodeResult refine(const MeasurementSet& ms, const BitVector& start,
                    std::uint32_t max_sweeps,
                    UpdateSchedule schedule = UpdateSchedule::kSynchronous);

/// Two-stage decoder: spectral_init followed by refine with
/// T = ceil(c * ln n) sweeps. Homogeneity measurements only.
DecodeResult decode_two_stage(const MeasurementSet& ms,
                              const SpectralConfig& cfg, double c = 2.0);

}  // namespace gcbm
