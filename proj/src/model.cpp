#include "gcbm/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "gcbm/combinatorics.hpp"
#include "gcbm/rng.hpp"

namespace gcbm {

namespace {

// Full enumeration is used whenever C(n,d) is at most this many subsets.
constexpr std::uint64_t kEnumerationBudget = 10'000'000;
// Dense draws (expected count above C(n,d)/4) fall back to enumeration up to
// this larger cap; rejection sampling would thrash there.
constexpr std::uint64_t kDenseEnumerationCap = 250'000'000;
// Hard cap on the expected number of sampled edges.
constexpr double kMaxExpectedEdges = 5e7;

// Acklam's rational approximation of the standard normal quantile,
// |relative error| < 1.15e-9. Deterministic, no libm dependence beyond sqrt/log.
double inverse_normal_cdf(double u) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  u = std::min(std::max(u, 1e-300), 1.0 - 1e-16);
  if (u < plow) {
    const double q = std::sqrt(-2 * std::log(u));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  if (u > 1 - plow) {
    const double q = std::sqrt(-2 * std::log(1 - u));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  const double q = u - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}

// m ~ Binomial(total, p) where total = exp(log_total) may be far beyond
// uint64 range. Exact CDF inversion for small means, normal approximation
// with continuity correction otherwise.
std::uint64_t sample_edge_count(Rng& rng, double log_total, double p) {
  if (p <= 0.0) return 0;
  const double log_lambda = log_total + std::log(p);
  if (log_lambda > std::log(kMaxExpectedEdges)) {
    throw BudgetExceededError(
        "sample_measurements: expected edge count p*C(n,d) exceeds budget");
  }
  const double lambda = std::exp(log_lambda);
  const double total = std::exp(log_total);  // may be +inf
  const double u = rng.next_double();
  if (lambda <= 600.0) {
    double pmf = std::isfinite(total) ? std::exp(total * std::log1p(-p))
                                      : std::exp(-lambda);
    double cdf = pmf;
    const double odds = p / (1.0 - p);
    const double cap = lambda + 20.0 * std::sqrt(lambda) + 600.0;
    std::uint64_t k = 0;
    while (u > cdf && static_cast<double>(k) < cap) {
      const double ratio = std::isfinite(total)
                               ? (total - static_cast<double>(k)) /
                                     (static_cast<double>(k) + 1.0) * odds
                               : lambda / (static_cast<double>(k) + 1.0);
      pmf *= ratio;
      cdf += pmf;
      ++k;
    }
    return k;
  }
  const double variance = lambda * (std::isfinite(total) ? (1.0 - p) : 1.0);
  const double z = inverse_normal_cdf(u);
  double m = std::round(lambda + std::sqrt(variance) * z);
  m = std::max(m, 0.0);
  if (std::isfinite(total)) m = std::min(m, total);
  return static_cast<std::uint64_t>(m);
}

// Floyd's algorithm: uniform d-subset of [0, n), built sorted.
void draw_subset(Rng& rng, std::uint32_t n, std::uint32_t d,
                 std::vector<std::uint32_t>& out) {
  out.clear();
  for (std::uint32_t j = n - d; j < n; ++j) {
    const auto t = static_cast<std::uint32_t>(rng.next_below(j + 1));
    auto it = std::lower_bound(out.begin(), out.end(), t);
    if (it != out.end() && *it == t) {
      auto jt = std::lower_bound(out.begin(), out.end(), j);
      out.insert(jt, j);
    } else {
      out.insert(it, t);
    }
  }
}

}  // namespace

char kind_code(MeasurementKind kind) {
  return kind == MeasurementKind::kHomogeneity ? 'h' : 'p';
}

MeasurementKind kind_from_string(std::string_view text) {
  if (text == "h" || text == "homogeneity") return MeasurementKind::kHomogeneity;
  if (text == "p" || text == "parity") return MeasurementKind::kParity;
  throw DomainError("unknown measurement kind: " + std::string(text));
}

void ModelParams::validate() const {
  if (d < 2 || d > n) throw DomainError("ModelParams: need 2 <= d <= n");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("ModelParams: need 0 <= p <= 1");
  if (!(theta >= 0.0 && theta < 0.5)) {
    throw DomainError("ModelParams: need 0 <= theta < 1/2");
  }
}

Hyperedge Hyperedge::make(std::vector<std::uint32_t> nodes, std::uint32_t n) {
  if (nodes.size() < 2) throw DomainError("Hyperedge: need at least 2 nodes");
  std::sort(nodes.begin(), nodes.end());
  if (std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end()) {
    throw DomainError("Hyperedge: duplicate node index");
  }
  if (nodes.back() >= n) throw DomainError("Hyperedge: node index out of range");
  return Hyperedge{std::move(nodes)};
}

int measure(MeasurementKind kind, std::span<const std::uint8_t> values) {
  if (values.size() < 2) {
    throw DomainError("measure: arity must be at least 2");
  }
  if (kind == MeasurementKind::kHomogeneity) {
    const std::uint8_t first = values.front() != 0;
    for (const auto v : values) {
      if ((v != 0) != first) return 0;
    }
    return 1;
  }
  int acc = 0;
  for (const auto v : values) acc ^= (v != 0);
  return acc;
}

int measure_on(MeasurementKind kind, const BitVector& labels,
               std::span<const std::uint32_t> nodes) {
  if (nodes.size() < 2) {
    throw DomainError("measure_on: arity must be at least 2");
  }
  if (kind == MeasurementKind::kHomogeneity) {
    const bool first = labels.get(nodes.front());
    for (const auto v : nodes) {
      if (labels.get(v) != first) return 0;
    }
    return 1;
  }
  int acc = 0;
  for (const auto v : nodes) acc ^= static_cast<int>(labels.get(v));
  return acc;
}

MeasurementSet sample_measurements(const ModelParams& params,
                                   const BitVector& truth,
                                   std::uint64_t seed) {
  params.validate();
  if (truth.size() != params.n) {
    throw DomainError("sample_measurements: truth length != n");
  }
  const std::uint32_t n = params.n;
  const std::uint32_t d = params.d;

  MeasurementSet ms;
  ms.params = params;
  ms.seed = seed;
  Rng rng(seed);

  std::uint64_t total_u64 = 0;
  const bool total_fits = binomial_fits_u64(n, d, &total_u64);
  const double log_total = log_binomial(n, d);

  if (params.p > 0.0) {
    bool enumerate = total_fits && total_u64 <= kEnumerationBudget;
    if (!enumerate && total_fits && total_u64 <= kDenseEnumerationCap) {
      // dense regime: rejection sampling degenerates, enumerate instead
      enumerate = params.p * static_cast<double>(total_u64) >=
                  static_cast<double>(total_u64) / 4.0;
    }
    if (enumerate) {
      std::vector<std::uint32_t> idx(d);
      for (std::uint32_t i = 0; i < d; ++i) idx[i] = i;
      for (;;) {
        if (rng.bernoulli(params.p)) {
          ms.edge_nodes.insert(ms.edge_nodes.end(), idx.begin(), idx.end());
        }
        // advance the lexicographic odometer
        std::int64_t pos = d - 1;
        while (pos >= 0 && idx[pos] == n - d + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (std::uint32_t q = pos + 1; q < d; ++q) idx[q] = idx[q - 1] + 1;
      }
    } else {
      if (!total_fits && params.p >= 1.0) {
        throw BudgetExceededError(
            "sample_measurements: p = 1 with C(n,d) beyond enumeration budget");
      }
      const std::uint64_t m = sample_edge_count(rng, log_total, params.p);
      std::vector<std::vector<std::uint32_t>> edges;
      edges.reserve(m);
      std::vector<std::uint32_t> scratch;
      while (edges.size() < m) {
        for (std::uint64_t need = m - edges.size(); need > 0; --need) {
          draw_subset(rng, n, d, scratch);
          edges.push_back(scratch);
        }
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
      }
      ms.edge_nodes.reserve(m * d);
      for (const auto& e : edges) {
        ms.edge_nodes.insert(ms.edge_nodes.end(), e.begin(), e.end());
      }
    }
  }

  const std::size_t m = ms.edge_nodes.size() / d;
  ms.labels.resize(m);
  for (std::size_t e = 0; e < m; ++e) {
    const std::span<const std::uint32_t> nodes{ms.edge_nodes.data() + e * d, d};
    const int y = measure_on(params.kind, truth, nodes);
    // one noise draw per edge regardless of theta keeps streams aligned
    const bool z = rng.next_double() < params.theta;
    ms.labels[e] = static_cast<std::uint8_t>(y ^ static_cast<int>(z));
  }
  return ms;
}

std::uint64_t hamming_objective(const MeasurementSet& ms,
                                const BitVector& candidate) {
  if (candidate.size() != ms.params.n) {
    throw DomainError("hamming_objective: candidate length != n");
  }
  std::uint64_t mismatches = 0;
  const std::size_t m = ms.edge_count();
  for (std::size_t e = 0; e < m; ++e) {
    if (measure_on(ms.params.kind, candidate, ms.edge(e)) != ms.labels[e]) {
      ++mismatches;
    }
  }
  return mismatches;
}

bool recovery_success(MeasurementKind kind, std::uint32_t d,
                      const BitVector& truth, const BitVector& estimate) {
  if (truth.size() != estimate.size()) {
    throw DomainError("recovery_success: length mismatch");
  }
  if (estimate == truth) return true;
  const bool complement_ok =
      kind == MeasurementKind::kHomogeneity || d % 2 == 0;
  return complement_ok && estimate.is_complement_of(truth);
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void write_measurements(const MeasurementSet& ms, std::ostream& out) {
  out << "gcbm v1 n=" << ms.params.n << " d=" << ms.params.d
      << " p=" << format_double(ms.params.p)
      << " theta=" << format_double(ms.params.theta)
      << " kind=" << kind_code(ms.params.kind) << " seed=" << ms.seed << "\n";
  const std::size_t m = ms.edge_count();
  for (std::size_t e = 0; e < m; ++e) {
    const auto nodes = ms.edge(e);
    for (std::size_t q = 0; q < nodes.size(); ++q) {
      if (q) out << ' ';
      out << nodes[q];
    }
    out << '\t' << static_cast<int>(ms.labels[e]) << '\n';
  }
}

void write_measurements_file(const MeasurementSet& ms,
                             const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  write_measurements(ms, out);
  if (!out) throw IoError("write failed: " + path);
}

namespace {

double parse_double_token(std::string_view text, const char* what) {
  double value = 0.0;
  const auto res =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw IoError(std::string("measurement header: bad ") + what);
  }
  return value;
}

std::uint64_t parse_u64_token(std::string_view text, const char* what) {
  std::uint64_t value = 0;
  const auto res =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw IoError(std::string("measurement header: bad ") + what);
  }
  return value;
}

std::string_view expect_field(std::string_view token, std::string_view key) {
  if (!token.starts_with(key)) {
    throw IoError("measurement header: expected " + std::string(key) +
                  "..., got " + std::string(token));
  }
  return token.substr(key.size());
}

}  // namespace

MeasurementSet read_measurements(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("measurement file: empty input");
  std::istringstream header(line);
  std::string magic, version, tok_n, tok_d, tok_p, tok_theta, tok_kind, tok_seed;
  if (!(header >> magic >> version >> tok_n >> tok_d >> tok_p >> tok_theta >>
        tok_kind >> tok_seed) ||
      magic != "gcbm" || version != "v1") {
    throw IoError("measurement file: bad header line");
  }
  MeasurementSet ms;
  ms.params.n = static_cast<std::uint32_t>(
      parse_u64_token(expect_field(tok_n, "n="), "n"));
  ms.params.d = static_cast<std::uint32_t>(
      parse_u64_token(expect_field(tok_d, "d="), "d"));
  ms.params.p = parse_double_token(expect_field(tok_p, "p="), "p");
  ms.params.theta =
      parse_double_token(expect_field(tok_theta, "theta="), "theta");
  ms.params.kind = kind_from_string(expect_field(tok_kind, "kind="));
  ms.seed = parse_u64_token(expect_field(tok_seed, "seed="), "seed");
  ms.params.validate();

  const std::uint32_t n = ms.params.n;
  const std::uint32_t d = ms.params.d;
  std::vector<std::uint32_t> prev;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw IoError("measurement file line " + std::to_string(lineno) +
                    ": missing tab separator");
    }
    std::istringstream lhs(line.substr(0, tab));
    std::vector<std::uint32_t> nodes;
    nodes.reserve(d);
    std::uint64_t v = 0;
    while (lhs >> v) {
      if (v >= n) {
        throw IoError("measurement file line " + std::to_string(lineno) +
                      ": node index out of range");
      }
      nodes.push_back(static_cast<std::uint32_t>(v));
    }
    if (nodes.size() != d) {
      throw IoError("measurement file line " + std::to_string(lineno) +
                    ": expected " + std::to_string(d) + " node indices");
    }
    if (!std::is_sorted(nodes.begin(), nodes.end()) ||
        std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end()) {
      throw IoError("measurement file line " + std::to_string(lineno) +
                    ": edge not strictly increasing");
    }
    if (!prev.empty() && !(prev < nodes)) {
      throw IoError("measurement file line " + std::to_string(lineno) +
                    ": edges not in canonical order or duplicated");
    }
    const std::string rhs = line.substr(tab + 1);
    if (rhs != "0" && rhs != "1") {
      throw IoError("measurement file line " + std::to_string(lineno) +
                    ": label must be 0 or 1");
    }
    ms.edge_nodes.insert(ms.edge_nodes.end(), nodes.begin(), nodes.end());
    ms.labels.push_back(rhs == "1" ? 1 : 0);
    prev = std::move(nodes);
  }
  return ms;
}

MeasurementSet read_measurements_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  return read_measurements(in);
}

}  // namespace gcbm
