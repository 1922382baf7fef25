#include "gcbm/decoders.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <numeric>
#include <vector>

#include "gcbm/rng.hpp"

namespace gcbm {

namespace {

constexpr std::uint32_t kMlNodeCap = 24;
constexpr std::uint32_t kSpectralNodeCap = 8192;

// CSR incidence lists: edge ids per node.
struct IncidenceIndex {
  std::vector<std::uint32_t> offsets;
  std::vector<std::uint32_t> edge_ids;

  static IncidenceIndex build(const MeasurementSet& ms) {
    const std::uint32_t n = ms.params.n;
    IncidenceIndex index;
    index.offsets.assign(n + 1, 0);
    for (const auto v : ms.edge_nodes) ++index.offsets[v + 1];
    for (std::uint32_t v = 0; v < n; ++v) {
      index.offsets[v + 1] += index.offsets[v];
    }
    index.edge_ids.resize(ms.edge_nodes.size());
    std::vector<std::uint32_t> cursor(index.offsets.begin(),
                                      index.offsets.end() - 1);
    const std::size_t m = ms.edge_count();
    const std::uint32_t d = ms.params.d;
    for (std::size_t e = 0; e < m; ++e) {
      for (const auto v : ms.edge(e)) {
        index.edge_ids[cursor[v]++] = static_cast<std::uint32_t>(e);
      }
    }
    return index;
  }

  std::span<const std::uint32_t> incident(std::uint32_t v) const {
    return {edge_ids.data() + offsets[v], offsets[v + 1] - offsets[v]};
  }

  std::uint32_t degree(std::uint32_t v) const {
    return offsets[v + 1] - offsets[v];
  }
};

inline int mismatch_from_ones(MeasurementKind kind, std::int32_t ones,
                              std::int32_t d, std::uint8_t label) {
  const int f = kind == MeasurementKind::kHomogeneity
                    ? static_cast<int>(ones == 0 || ones == d)
                    : (ones & 1);
  return f != label;
}

// Per-edge count of ones under the given labeling.
std::vector<std::int32_t> ones_per_edge(const MeasurementSet& ms,
                                        const BitVector& labels) {
  const std::size_t m = ms.edge_count();
  std::vector<std::int32_t> ones(m, 0);
  for (std::size_t e = 0; e < m; ++e) {
    std::int32_t s = 0;
    for (const auto v : ms.edge(e)) s += labels.get(v);
    ones[e] = s;
  }
  return ones;
}

// Lexicographic order on label sequences packed as bit i = node i.
inline bool lex_less_mask(std::uint32_t a, std::uint32_t b) {
  const std::uint32_t diff = a ^ b;
  if (diff == 0) return false;
  const int bit = std::countr_zero(diff);
  return ((a >> bit) & 1) == 0;
}

BitVector mask_to_vector(std::uint32_t mask, std::uint32_t n) {
  BitVector v(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    if ((mask >> i) & 1) v.set(i, true);
  }
  return v;
}

}  // namespace

void SpectralConfig::validate() const {
  if (power_iterations < 1) {
    throw DomainError("SpectralConfig: power_iterations must be >= 1");
  }
  if (!(tolerance > 0.0)) {
    throw DomainError("SpectralConfig: tolerance must be positive");
  }
}

DecodeResult decode_ml_exhaustive(const MeasurementSet& ms,
                                  const MlOptions& options) {
  const std::uint32_t n = ms.params.n;
  const std::uint32_t d = ms.params.d;
  if (n > kMlNodeCap) {
    throw BudgetExceededError("decode_ml_exhaustive: n above the 2^n budget");
  }
  // The complement class is a single candidate whenever the measurement is
  // complement-invariant, so node 0 can be pinned to 0.
  const bool halve = ms.params.kind == MeasurementKind::kHomogeneity ||
                     d % 2 == 0;
  const std::uint32_t free_bits = halve ? n - 1 : n;
  const std::size_t m = ms.edge_count();

  const IncidenceIndex index = IncidenceIndex::build(ms);
  std::vector<std::int32_t> ones(m, 0);
  std::uint64_t objective = 0;
  for (std::size_t e = 0; e < m; ++e) {
    objective += mismatch_from_ones(ms.params.kind, 0, d, ms.labels[e]);
  }

  std::uint32_t current = 0;
  std::uint32_t best_mask = 0;
  std::uint64_t best_objective = objective;
  bool tie_broken = false;
  std::uint64_t tie_count = 1;
  Rng tie_rng(options.tie_seed);

  const std::uint64_t total = 1ULL << free_bits;
  for (std::uint64_t t = 1; t < total; ++t) {
    // Gray-code step: exactly one node flips per candidate.
    const int bit = std::countr_zero(t);
    const std::uint32_t v = halve ? static_cast<std::uint32_t>(bit) + 1
                                  : static_cast<std::uint32_t>(bit);
    const bool was_one = (current >> v) & 1;
    const std::int32_t delta_ones = was_one ? -1 : 1;
    for (const auto e : index.incident(v)) {
      objective -= mismatch_from_ones(ms.params.kind, ones[e], d, ms.labels[e]);
      ones[e] += delta_ones;
      objective += mismatch_from_ones(ms.params.kind, ones[e], d, ms.labels[e]);
    }
    current ^= 1U << v;

    if (objective < best_objective) {
      best_objective = objective;
      best_mask = current;
      tie_broken = false;
      tie_count = 1;
    } else if (objective == best_objective) {
      // distinct candidates are never complement-equivalent here, so any
      // further minimizer is a genuine tie
      tie_broken = true;
      ++tie_count;
      if (options.randomized_ties) {
        if (tie_rng.next_below(tie_count) == 0) best_mask = current;
      } else if (lex_less_mask(current, best_mask)) {
        best_mask = current;
      }
    }
  }

  DecodeResult result;
  result.estimate = mask_to_vector(best_mask, n);
  result.objective = hamming_objective(ms, result.estimate);
  result.method = "ml";
  result.tie_broken = tie_broken;
  return result;
}

DecodeResult decode_parity_noiseless(const MeasurementSet& ms) {
  if (ms.params.kind != MeasurementKind::kParity) {
    throw DomainError("decode_parity_noiseless: parity measurements required");
  }
  const std::uint32_t n = ms.params.n;
  const std::size_t m = ms.edge_count();
  const std::size_t words = (n + 1 + 63) / 64;  // column n carries the label

  std::vector<std::uint64_t> rows(m * words, 0);
  auto row = [&](std::size_t r) { return rows.data() + r * words; };
  auto get_bit = [&](const std::uint64_t* r, std::uint32_t c) {
    return (r[c >> 6] >> (c & 63)) & 1;
  };
  for (std::size_t e = 0; e < m; ++e) {
    auto* r = row(e);
    for (const auto v : ms.edge(e)) r[v >> 6] |= 1ULL << (v & 63);
    if (ms.labels[e]) r[n >> 6] |= 1ULL << (n & 63);
  }

  // Gauss-Jordan with pivot = first row carrying the column bit.
  std::vector<std::uint32_t> pivot_col;
  pivot_col.reserve(n);
  std::size_t pivot_rows = 0;
  for (std::uint32_t col = 0; col < n && pivot_rows < m; ++col) {
    std::size_t found = m;
    for (std::size_t r = pivot_rows; r < m; ++r) {
      if (get_bit(row(r), col)) {
        found = r;
        break;
      }
    }
    if (found == m) continue;
    if (found != pivot_rows) {
      std::swap_ranges(row(found), row(found) + words, row(pivot_rows));
    }
    const auto* p = row(pivot_rows);
    for (std::size_t r = 0; r < m; ++r) {
      if (r != pivot_rows && get_bit(row(r), col)) {
        auto* q = row(r);
        for (std::size_t w = 0; w < words; ++w) q[w] ^= p[w];
      }
    }
    pivot_col.push_back(col);
    ++pivot_rows;
  }

  const std::size_t rank = pivot_rows;
  for (std::size_t r = rank; r < m; ++r) {
    if (get_bit(row(r), n)) {
      throw InconsistentSystemError(
          "decode_parity_noiseless: no solution (corrupted or noisy labels)");
    }
  }

  const std::size_t kernel_dim = n - rank;
  if (kernel_dim > 1) {
    throw UnderdeterminedError(
        "decode_parity_noiseless: solution space dimension " +
            std::to_string(kernel_dim),
        kernel_dim);
  }

  BitVector solution(n);
  for (std::size_t r = 0; r < rank; ++r) {
    if (get_bit(row(r), n)) solution.set(pivot_col[r], true);
  }

  if (kernel_dim == 1) {
    // single free column: kernel generator has 1 there and the matching
    // pivot-row coefficients elsewhere
    std::vector<std::uint8_t> is_pivot(n, 0);
    for (const auto c : pivot_col) is_pivot[c] = 1;
    std::uint32_t free_col = n;
    for (std::uint32_t c = 0; c < n; ++c) {
      if (!is_pivot[c]) {
        free_col = c;
        break;
      }
    }
    BitVector kernel(n);
    kernel.set(free_col, true);
    for (std::size_t r = 0; r < rank; ++r) {
      if (get_bit(row(r), free_col)) kernel.set(pivot_col[r], true);
    }
    if (kernel != BitVector::ones(n)) {
      throw UnderdeterminedError(
          "decode_parity_noiseless: 1-dimensional kernel is not the global flip",
          1);
    }
    // both representatives solve the system; return the one with node 0 clear
    if (solution.get(0)) solution.complement_in_place();
  }

  DecodeResult result;
  result.estimate = std::move(solution);
  result.objective = hamming_objective(ms, result.estimate);
  result.method = "gf2";
  return result;
}

BitVector spectral_init(const MeasurementSet& ms, const SpectralConfig& cfg) {
  cfg.validate();
  if (ms.params.kind != MeasurementKind::kHomogeneity) {
    throw DomainError("spectral_init: homogeneity measurements required");
  }
  if (ms.edge_count() == 0) {
    throw DegenerateInputError("spectral_init: zero sampled edges");
  }
  const std::uint32_t n = ms.params.n;
  if (n > kSpectralNodeCap) {
    throw BudgetExceededError("spectral_init: dense co-occurrence matrix too large");
  }

  // pairwise co-occurrence weights from positive labels, zero diagonal
  std::vector<double> A(static_cast<std::size_t>(n) * n, 0.0);
  const std::size_t m = ms.edge_count();
  for (std::size_t e = 0; e < m; ++e) {
    if (!ms.labels[e]) continue;
    const auto nodes = ms.edge(e);
    for (std::size_t a = 0; a < nodes.size(); ++a) {
      for (std::size_t b = a + 1; b < nodes.size(); ++b) {
        A[static_cast<std::size_t>(nodes[a]) * n + nodes[b]] += 1.0;
        A[static_cast<std::size_t>(nodes[b]) * n + nodes[a]] += 1.0;
      }
    }
  }
  double mean = 0.0;
  for (const auto w : A) mean += w;
  mean /= static_cast<double>(n) * static_cast<double>(n);

  Rng rng(mix_seed(ms.seed, 0x5bec7a11u));
  std::vector<double> x(n), y(n);
  for (auto& value : x) value = rng.next_double() - 0.5;
  double norm = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
  if (norm == 0.0) {
    x[0] = 1.0;
    norm = 1.0;
  }
  for (auto& value : x) value /= norm;

  for (std::uint32_t it = 0; it < cfg.power_iterations; ++it) {
    const double sum_x = std::accumulate(x.begin(), x.end(), 0.0);
    for (std::uint32_t u = 0; u < n; ++u) {
      const double* arow = A.data() + static_cast<std::size_t>(u) * n;
      double acc = 0.0;
      for (std::uint32_t v = 0; v < n; ++v) acc += arow[v] * x[v];
      y[u] = acc - mean * sum_x;  // rank-one centering
    }
    if (cfg.deflation) {
      const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) /
                            static_cast<double>(n);
      for (auto& value : y) value -= mean_y;
    }
    norm = std::sqrt(std::inner_product(y.begin(), y.end(), y.begin(), 0.0));
    if (norm == 0.0) break;
    double drift_same = 0.0, drift_flip = 0.0;
    for (std::uint32_t u = 0; u < n; ++u) {
      const double scaled = y[u] / norm;
      const double ds = scaled - x[u];
      const double df = scaled + x[u];
      drift_same += ds * ds;
      drift_flip += df * df;
      x[u] = scaled;
    }
    if (std::min(drift_same, drift_flip) < cfg.tolerance * cfg.tolerance) break;
  }

  BitVector estimate(n);
  for (std::uint32_t u = 0; u < n; ++u) {
    if (x[u] > 0.0) estimate.set(u, true);
  }
  return estimate;
}

DecodeResult refine(const MeasurementSet& ms, const BitVector& start,
                    std::uint32_t max_sweeps, UpdateSchedule schedule) {
  const std::uint32_t n = ms.params.n;
  const std::int32_t d = static_cast<std::int32_t>(ms.params.d);
  if (start.size() != n) throw DomainError("refine: start length != n");
  if (max_sweeps < 1) throw DomainError("refine: max_sweeps must be >= 1");

  const IncidenceIndex index = IncidenceIndex::build(ms);
  BitVector labels = start;
  std::vector<std::int32_t> ones = ones_per_edge(ms, labels);
  const MeasurementKind kind = ms.params.kind;

  auto flip_gain = [&](std::uint32_t v) {
    // d_H(X xor e_v) - d_H(X), restricted to edges incident to v
    const std::int32_t delta_ones = labels.get(v) ? -1 : 1;
    std::int64_t delta = 0;
    for (const auto e : index.incident(v)) {
      delta -= mismatch_from_ones(kind, ones[e], d, ms.labels[e]);
      delta += mismatch_from_ones(kind, ones[e] + delta_ones, d, ms.labels[e]);
    }
    return delta;
  };
  auto apply_flip = [&](std::uint32_t v) {
    const std::int32_t delta_ones = labels.get(v) ? -1 : 1;
    for (const auto e : index.incident(v)) ones[e] += delta_ones;
    labels.flip(v);
  };

  std::uint32_t sweeps = 0;
  std::uint32_t last_flips = 0;
  std::vector<std::uint32_t> to_flip;
  for (std::uint32_t sweep = 0; sweep < max_sweeps; ++sweep) {
    std::uint32_t flips = 0;
    if (schedule == UpdateSchedule::kSynchronous) {
      to_flip.clear();
      for (std::uint32_t v = 0; v < n; ++v) {
        if (index.degree(v) == 0) continue;  // frozen, see header
        if (flip_gain(v) <= 0) to_flip.push_back(v);
      }
      for (const auto v : to_flip) apply_flip(v);
      flips = static_cast<std::uint32_t>(to_flip.size());
    } else {
      for (std::uint32_t v = 0; v < n; ++v) {
        if (index.degree(v) == 0) continue;
        if (flip_gain(v) <= 0) {
          apply_flip(v);
          ++flips;
        }
      }
    }
    ++sweeps;
    last_flips = flips;
    if (flips == 0) break;
  }

  DecodeResult result;
  result.estimate = std::move(labels);
  result.objective = hamming_objective(ms, result.estimate);
  result.iterations = sweeps;
  result.flips_last_sweep = last_flips;
  result.method = schedule == UpdateSchedule::kSynchronous
                      ? "refine"
                      : "refine-sequential";
  return result;
}

DecodeResult decode_two_stage(const MeasurementSet& ms,
                              const SpectralConfig& cfg, double c) {
  if (!(c > 0.0)) throw DomainError("decode_two_stage: c must be positive");
  const BitVector start = spectral_init(ms, cfg);
  const auto sweeps = static_cast<std::uint32_t>(std::max(
      1.0, std::ceil(c * std::log(static_cast<double>(ms.params.n)))));
  DecodeResult result = refine(ms, start, sweeps);
  result.method = "alg1";
  return result;
}

}  // namespace gcbm
