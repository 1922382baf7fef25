#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gcbm/bitvec.hpp"
#include "gcbm/errors.hpp"

namespace gcbm {

enum class MeasurementKind : std::uint8_t {
  kHomogeneity,  // 1 iff all d labels equal
  kParity,       // mod-2 sum of the d labels
};

char kind_code(MeasurementKind kind);
MeasurementKind kind_from_string(std::string_view text);

/// Full model specification: n nodes, d-uniform hyperedges sampled with
/// probability p each, labels flipped independently with probability theta.
struct ModelParams {
  std::uint32_t n = 0;
  std::uint32_t d = 0;
  double p = 0.0;
  double theta = 0.0;
  MeasurementKind kind = MeasurementKind::kHomogeneity;

  void validate() const;  // throws DomainError
  bool operator==(const ModelParams&) const = default;
};

/// A sorted d-subset of [0, n).
struct Hyperedge {
  std::vector<std::uint32_t> nodes;  // strictly increasing

  /// Canonicalizes (sorts) and validates: >= 2 distinct in-range indices.
  static Hyperedge make(std::vector<std::uint32_t> nodes, std::uint32_t n);
  bool operator==(const Hyperedge&) const = default;
};

/// Evaluate the measurement function on explicit bit values.
/// Throws DomainError for arity < 2.
int measure(MeasurementKind kind, std::span<const std::uint8_t> values);

/// Evaluate the measurement function on labels restricted to a node set.
int measure_on(MeasurementKind kind, const BitVector& labels,
               std::span<const std::uint32_t> nodes);

/// Sampled hyperedges with noisy labels. Edges are stored flat (d indices per
/// edge, each ascending) in canonical lexicographic order; immutable after
/// construction and safe to share across threads.
struct MeasurementSet {
  ModelParams params;
  std::uint64_t seed = 0;
  std::vector<std::uint32_t> edge_nodes;  // edge_count() * d entries
  std::vector<std::uint8_t> labels;       // one bit per edge

  std::size_t edge_count() const { return labels.size(); }

  std::span<const std::uint32_t> edge(std::size_t idx) const {
    return {edge_nodes.data() + idx * params.d, params.d};
  }

  bool operator==(const MeasurementSet&) const = default;
};

/// Draws the measurement hypergraph and its noisy labels. Every d-subset is
/// included independently with probability p; each included edge is labeled
/// f(truth restricted to the edge) XOR Bern(theta). Identical
/// (params, truth, seed) reproduce the identical set bit-for-bit. Noise bits
/// are drawn in edge-canonical order after all edges, so measurement sets with
/// the same seed and different theta share the same edge set.
MeasurementSet sample_measurements(const ModelParams& params,
                                   const BitVector& truth, std::uint64_t seed);

/// Number of sampled edges whose label disagrees with the measurement
/// function evaluated on the candidate.
std::uint64_t hamming_objective(const MeasurementSet& ms,
                                const BitVector& candidate);

/// Exact-recovery predicate. The global complement is accepted when the
/// measurement cannot distinguish it: always for homogeneity, and for parity
/// when d is even. For odd-d parity the complement flips every measurement,
/// so recovery means exact equality.
bool recovery_success(MeasurementKind kind, std::uint32_t d,
                      const BitVector& truth, const BitVector& estimate);

// Line-oriented text serialization:
//   gcbm v1 n=<n> d=<d> p=<p> theta=<theta> kind=<h|p> seed=<u64>
//   <i1> <i2> ... <id>\t<bit>
// Edges must be canonical (each ascending, strictly increasing across lines);
// the writer always produces this form and the reader rejects anything else,
// which makes round-trips byte-exact.
void write_measurements(const MeasurementSet& ms, std::ostream& out);
void write_measurements_file(const MeasurementSet& ms, const std::string& path);
MeasurementSet read_measurements(std::istream& in);
MeasurementSet read_measurements_file(const std::string& path);

/// Shortest round-trip decimal form of a double (via std::to_chars).
std::string format_double(double value);

}  // namespace gcbm
