#include "gcbm/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace gcbm {

namespace {

constexpr std::uint64_t kBruteForceBudget = 10'000'000;

double lgamma_safe(double x) {
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

std::string tuple_str(std::initializer_list<std::int64_t> values) {
  std::ostringstream os;
  os << '(';
  bool first = true;
  for (const auto v : values) {
    if (!first) os << ',';
    os << v;
    first = false;
  }
  os << ')';
  return os.str();
}

void record_failure(CheckReport& report,
                    std::initializer_list<std::int64_t> tuple) {
  ++report.failures;
  if (report.counterexamples.size() < 8) {
    report.counterexamples.push_back(tuple_str(tuple));
  }
}

// N_k as an exact integer (odd-intersection count).
BigCount nk_exact(std::int64_t n, std::int64_t d, std::int64_t k) {
  BigCount total = 0;
  for (std::int64_t i = 1; i <= d; i += 2) {
    total += binomial_exact(k, i) * binomial_exact(n - k, d - i);
  }
  return total;
}

std::int64_t beta_breakpoint(std::int64_t n, std::int64_t d) {
  // ceil((n - d + 1) / (2d + 1))
  return (n - d + 1 + 2 * d) / (2 * d + 1);
}

}  // namespace

BigCount binomial_exact(std::int64_t a, std::int64_t b) {
  if (a < 0 || b < 0 || b > a) return 0;
  b = std::min(b, a - b);
  BigCount r = 1;
  for (std::int64_t i = 0; i < b; ++i) {
    r *= a - i;
    r /= i + 1;
  }
  return r;
}

double log_binomial(double n, double d) {
  if (d < 0.0 || d > n || n < 0.0) {
    return -std::numeric_limits<double>::infinity();
  }
  return lgamma_safe(n + 1.0) - lgamma_safe(d + 1.0) - lgamma_safe(n - d + 1.0);
}

bool binomial_fits_u64(std::int64_t a, std::int64_t b, std::uint64_t* out) {
  if (a < 0 || b < 0 || b > a) {
    if (out) *out = 0;
    return true;
  }
  b = std::min(b, a - b);
  unsigned __int128 r = 1;
  constexpr unsigned __int128 kMax = std::numeric_limits<std::uint64_t>::max();
  for (std::int64_t i = 0; i < b; ++i) {
    r *= static_cast<unsigned __int128>(a - i);
    r /= static_cast<unsigned __int128>(i + 1);
    if (r > kMax) return false;
  }
  if (out) *out = static_cast<std::uint64_t>(r);
  return true;
}

void PartitionPerturbation::validate() const {
  if (d < 2 || d > n) throw DomainError("PartitionPerturbation: need 2 <= d <= n");
  if (k < 0 || 2 * k > n) {
    throw DomainError("PartitionPerturbation: need 0 <= k <= n/2");
  }
  if (i < 0 || i > k) throw DomainError("PartitionPerturbation: need 0 <= i <= k");
  if (j < 0 || j > n - k) {
    throw DomainError("PartitionPerturbation: need 0 <= j <= n-k");
  }
}

BitVector PartitionPerturbation::truth() const {
  validate();
  BitVector v(static_cast<std::size_t>(n));
  for (std::int64_t q = k; q < n; ++q) v.set(static_cast<std::size_t>(q), true);
  return v;
}

BitVector PartitionPerturbation::candidate() const {
  BitVector v = truth();
  for (std::int64_t q = 0; q < i; ++q) v.flip(static_cast<std::size_t>(q));
  for (std::int64_t q = 0; q < j; ++q) v.flip(static_cast<std::size_t>(k + q));
  return v;
}

BigCount count_distinctive_homogeneity(const PartitionPerturbation& pp) {
  pp.validate();
  const std::int64_t n = pp.n, d = pp.d, k = pp.k, i = pp.i, j = pp.j;
  BigCount total = 0;
  for (std::int64_t l = 1; l <= d - 1; ++l) {
    total += binomial_exact(i, l) * binomial_exact(k - i, d - l);
    total += binomial_exact(j, l) * binomial_exact(n - k - j, d - l);
    total += binomial_exact(i, l) * binomial_exact(n - k - j, d - l);
    total += binomial_exact(k - i, l) * binomial_exact(j, d - l);
  }
  return total;
}

BigCount count_distinctive_parity(std::int64_t n, std::int64_t d,
                                  std::int64_t k) {
  if (d < 2 || d > n) {
    throw DomainError("count_distinctive_parity: need 2 <= d <= n");
  }
  if (k < 0 || k > n) {
    throw DomainError("count_distinctive_parity: need 0 <= k <= n");
  }
  return nk_exact(n, d, k);
}

BigCount brute_force_distinctive(std::int64_t n, std::int64_t d,
                                 const BitVector& truth,
                                 const BitVector& candidate,
                                 MeasurementKind kind) {
  if (d < 2 || d > n) {
    throw DomainError("brute_force_distinctive: need 2 <= d <= n");
  }
  if (truth.size() != static_cast<std::size_t>(n) ||
      candidate.size() != static_cast<std::size_t>(n)) {
    throw DomainError("brute_force_distinctive: vector length != n");
  }
  std::uint64_t total = 0;
  if (!binomial_fits_u64(n, d, &total) || total > kBruteForceBudget) {
    throw BudgetExceededError("brute_force_distinctive: C(n,d) above budget");
  }
  std::vector<std::uint32_t> idx(static_cast<std::size_t>(d));
  for (std::int64_t q = 0; q < d; ++q) idx[q] = static_cast<std::uint32_t>(q);
  BigCount count = 0;
  for (;;) {
    if (measure_on(kind, truth, idx) != measure_on(kind, candidate, idx)) {
      ++count;
    }
    std::int64_t pos = d - 1;
    while (pos >= 0 &&
           idx[pos] == static_cast<std::uint32_t>(n - d + pos)) {
      --pos;
    }
    if (pos < 0) break;
    ++idx[pos];
    for (std::int64_t q = pos + 1; q < d; ++q) idx[q] = idx[q - 1] + 1;
  }
  return count;
}

NkBound nk_lower_bound(std::int64_t n, std::int64_t d, std::int64_t k) {
  if (d < 2 || 2 * d > n) throw DomainError("nk_lower_bound: need 2 <= d <= n/2");
  if (k < 1 || 2 * k > n) throw DomainError("nk_lower_bound: need 1 <= k <= n/2");
  const std::int64_t beta = beta_breakpoint(n, d);
  const double log_cnd = log_binomial(static_cast<double>(n), static_cast<double>(d));
  NkBound result;
  if (k < beta) {
    const double alpha = static_cast<double>(n - d + 1) / static_cast<double>(d);
    result.regime = NkRegime::kBelowBeta;
    result.log_bound =
        std::log(2.0 * static_cast<double>(k) / (5.0 * alpha)) + log_cnd;
  } else {
    result.regime = NkRegime::kAboveBeta;
    result.log_bound = std::log(0.2) + log_cnd;
  }
  result.bound = std::exp(result.log_bound);
  return result;
}

bool verify_nk_bound(std::int64_t n, std::int64_t d, std::int64_t k) {
  if (d < 2 || 2 * d > n) throw DomainError("verify_nk_bound: need 2 <= d <= n/2");
  if (k < 1 || 2 * k > n) throw DomainError("verify_nk_bound: need 1 <= k <= n/2");
  const BigCount nk = nk_exact(n, d, k);
  const BigCount cnd = binomial_exact(n, d);
  if (k < beta_breakpoint(n, d)) {
    // N_k >= 2k/(5*alpha) * C(n,d), alpha = (n-d+1)/d, rationals cleared
    return 5 * (n - d + 1) * nk >= 2 * k * d * cnd;
  }
  return 5 * nk >= cnd;
}

bool verify_lemma1(std::int64_t n, std::int64_t d, std::int64_t k,
                   std::int64_t i, std::int64_t j, double delta) {
  if (!(delta > 0.0 && delta < 0.5)) {
    throw DomainError("verify_lemma1: need 0 < delta < 1/2");
  }
  const PartitionPerturbation pp{n, d, k, i, j};
  pp.validate();
  if (!(static_cast<double>(i) < delta * static_cast<double>(n)) ||
      !(static_cast<double>(j) < delta * static_cast<double>(n))) {
    throw DomainError("verify_lemma1: hypothesis requires i < delta*n and j < delta*n");
  }
  if (i == 0 && j == 0) return true;  // 0 >= 0
  const BigCount lhs = count_distinctive_homogeneity(pp);
  if (lhs == 0) return false;
  const double log_lhs = std::log(lhs.convert_to<double>());
  const double log_rhs = std::log(static_cast<double>(i + j)) +
                         static_cast<double>(d - 1) * std::log1p(-2.0 * delta) -
                         static_cast<double>(d - 2) * std::log(2.0) +
                         log_binomial(static_cast<double>(n - 1),
                                      static_cast<double>(d - 1));
  return log_lhs >= log_rhs;
}

bool verify_lemma4(std::int64_t n, std::int64_t d, std::int64_t k) {
  if (d < 2 || d > n) throw DomainError("verify_lemma4: need 2 <= d <= n");
  if (k < 1 || 2 * k > n) throw DomainError("verify_lemma4: need 1 <= k <= n/2");
  BigCount intermediate = 0;
  BigCount intermediate_odd = 0;
  for (std::int64_t q = 1; q <= d - 1; ++q) {
    const BigCount term = binomial_exact(k, q) * binomial_exact(n - k, d - q);
    intermediate += term;
    if (q % 2 == 1) intermediate_odd += term;
  }
  return intermediate <= 2 * intermediate_odd + 3 * nk_exact(n, d, k);
}

bool verify_lemma5(std::int64_t n, std::int64_t d, std::int64_t k) {
  if (d < 2 || 2 * d > n) throw DomainError("verify_lemma5: need 2 <= d <= n/2");
  if (k < 1 || 2 * k > n) throw DomainError("verify_lemma5: need 1 <= k <= n/2");
  const BigCount boundary =
      binomial_exact(n - k, d) + binomial_exact(k, d);
  const BigCount boundary_odd =
      binomial_exact(k, 1) * binomial_exact(n - k, d - 1) +
      binomial_exact(k, d - 1) * binomial_exact(n - k, 1);
  if (k >= beta_breakpoint(n, d)) {
    return boundary <= 2 * boundary_odd;
  }
  // A1 = alpha/k with alpha = (n-d+1)/d; also requires alpha/k >= 2
  if (n - d + 1 < 2 * d * k) return false;
  return d * k * boundary <= (n - d + 1) * boundary_odd;
}

bool vandermonde_check(std::int64_t n, std::int64_t d, std::int64_t k) {
  if (k < 0 || k > n || d < 0 || n < 0) {
    throw DomainError("vandermonde_check: need 0 <= k <= n, 0 <= d");
  }
  BigCount total = 0;
  for (std::int64_t q = 0; q <= d; ++q) {
    total += binomial_exact(k, q) * binomial_exact(n - k, d - q);
  }
  return total == binomial_exact(n, d);
}

std::vector<std::uint32_t> residual_independent_set(
    const MeasurementSet& ms, std::span<const std::uint32_t> big_set) {
  const std::uint32_t n = ms.params.n;
  std::vector<std::uint8_t> member(n, 0);
  for (const auto v : big_set) {
    if (v >= n) throw DomainError("residual_independent_set: index out of range");
    if (member[v]) throw DomainError("residual_independent_set: duplicate index");
    member[v] = 1;
  }
  std::vector<std::uint8_t> erase(n, 0);
  std::vector<std::uint32_t> hits;
  const std::size_t m = ms.edge_count();
  for (std::size_t e = 0; e < m; ++e) {
    hits.clear();
    for (const auto v : ms.edge(e)) {
      if (member[v]) hits.push_back(v);
    }
    if (hits.size() >= 2) {
      for (const auto v : hits) erase[v] = 1;
    }
  }
  std::vector<std::uint32_t> residual;
  residual.reserve(big_set.size());
  for (const auto v : big_set) {
    if (!erase[v]) residual.push_back(v);
  }
  return residual;
}

CheckReport sweep_oracle_homogeneity(int n_max, int d_max) {
  CheckReport report{.name = "oracle-homogeneity"};
  for (std::int64_t n = 2; n <= n_max; ++n) {
    for (std::int64_t d = 2; d <= std::min<std::int64_t>(d_max, n); ++d) {
      for (std::int64_t k = 0; 2 * k <= n; ++k) {
        for (std::int64_t i = 0; i <= k; ++i) {
          for (std::int64_t j = 0; j <= n - k; ++j) {
            const PartitionPerturbation pp{n, d, k, i, j};
            const BigCount closed = count_distinctive_homogeneity(pp);
            const BigCount oracle = brute_force_distinctive(
                n, d, pp.truth(), pp.candidate(), MeasurementKind::kHomogeneity);
            ++report.cases;
            if (closed != oracle) record_failure(report, {n, d, k, i, j});
          }
        }
      }
    }
  }
  return report;
}

CheckReport sweep_oracle_parity(int n_max, int d_max) {
  CheckReport report{.name = "oracle-parity"};
  for (std::int64_t n = 2; n <= n_max; ++n) {
    for (std::int64_t d = 2; d <= std::min<std::int64_t>(d_max, n); ++d) {
      for (std::int64_t k = 0; k <= n; ++k) {
        const BigCount closed = count_distinctive_parity(n, d, k);
        BitVector truth(static_cast<std::size_t>(n));
        BitVector cand(static_cast<std::size_t>(n));
        for (std::int64_t q = 0; q < k; ++q) {
          cand.set(static_cast<std::size_t>(q), true);
        }
        const BigCount oracle = brute_force_distinctive(
            n, d, truth, cand, MeasurementKind::kParity);
        ++report.cases;
        if (closed != oracle) record_failure(report, {n, d, k});
      }
    }
  }
  return report;
}

CheckReport sweep_fact1_symmetry(int n_max, int d_max) {
  CheckReport report{.name = "fact1-symmetry"};
  for (std::int64_t n = 2; n <= n_max; ++n) {
    for (std::int64_t d = 2; d <= std::min<std::int64_t>(d_max, n); ++d) {
      for (std::int64_t k = 0; 2 * k <= n; ++k) {
        for (std::int64_t i = 0; i <= k; ++i) {
          for (std::int64_t j = 0; j <= n - k; ++j) {
            const BigCount a =
                count_distinctive_homogeneity({n, d, k, i, j});
            const BigCount b = count_distinctive_homogeneity(
                {n, d, k, k - i, n - k - j});
            ++report.cases;
            if (a != b) record_failure(report, {n, d, k, i, j});
          }
        }
      }
    }
  }
  return report;
}

CheckReport sweep_lemma1(int n_max, int d_max, double delta) {
  CheckReport report{.name = "lemma1"};
  for (std::int64_t n = 4; n <= n_max; ++n) {
    for (std::int64_t d = 2; 2 * d <= n && d <= d_max; ++d) {
      for (std::int64_t k = 0; 2 * k <= n; ++k) {
        for (std::int64_t i = 0; i <= k; ++i) {
          if (!(static_cast<double>(i) < delta * static_cast<double>(n))) break;
          for (std::int64_t j = 0; j <= n - k; ++j) {
            if (!(static_cast<double>(j) < delta * static_cast<double>(n))) break;
            ++report.cases;
            if (!verify_lemma1(n, d, k, i, j, delta)) {
              record_failure(report, {n, d, k, i, j});
            }
          }
        }
      }
    }
  }
  return report;
}

CheckReport sweep_lemma4(int n_max, int d_max) {
  CheckReport report{.name = "lemma4"};
  for (std::int64_t n = 4; n <= n_max; ++n) {
    for (std::int64_t d = 2; 2 * d <= n && d <= d_max; ++d) {
      for (std::int64_t k = 1; 2 * k <= n; ++k) {
        ++report.cases;
        if (!verify_lemma4(n, d, k)) record_failure(report, {n, d, k});
      }
    }
  }
  return report;
}

CheckReport sweep_lemma5(int n_max, int d_max) {
  CheckReport report{.name = "lemma5"};
  for (std::int64_t n = 4; n <= n_max; ++n) {
    for (std::int64_t d = 2; 2 * d <= n && d <= d_max; ++d) {
      for (std::int64_t k = 1; 2 * k <= n; ++k) {
        ++report.cases;
        if (!verify_lemma5(n, d, k)) record_failure(report, {n, d, k});
      }
    }
  }
  return report;
}

CheckReport sweep_nk_bound(int n_max, int d_max) {
  CheckReport report{.name = "nk-lower-bound"};
  for (std::int64_t n = 4; n <= n_max; ++n) {
    for (std::int64_t d = 2; 2 * d <= n && d <= d_max; ++d) {
      for (std::int64_t k = 1; 2 * k <= n; ++k) {
        ++report.cases;
        if (!verify_nk_bound(n, d, k)) record_failure(report, {n, d, k});
      }
    }
  }
  return report;
}

CheckReport sweep_vandermonde(int n_max) {
  CheckReport report{.name = "vandermonde"};
  for (std::int64_t n = 0; n <= n_max; ++n) {
    for (std::int64_t d = 0; d <= n; ++d) {
      for (std::int64_t k = 0; k <= n; ++k) {
        ++report.cases;
        if (!vandermonde_check(n, d, k)) record_failure(report, {n, d, k});
      }
    }
  }
  return report;
}

CheckReport sweep_logspace_binomial(int n_max) {
  CheckReport report{.name = "logspace-binomial"};
  for (std::int64_t n = 0; n <= n_max; ++n) {
    for (std::int64_t d = 0; d <= n; ++d) {
      const double approx =
          std::exp(log_binomial(static_cast<double>(n), static_cast<double>(d)));
      const double exact = binomial_exact(n, d).convert_to<double>();
      ++report.cases;
      if (std::abs(approx - exact) > 1e-10 * exact) {
        record_failure(report, {n, d});
      }
    }
  }
  return report;
}

}  // namespace gcbm
