#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gcbm/bitvec.hpp"
#include "gcbm/model.hpp"

namespace gcbm {

/// Exact arbitrary-precision count.
using BigCount = boost::multiprecision::cpp_int;

/// Exact binomial coefficient with the convention C(a,b) = 0 for b < 0 or
/// b > a (and a < 0), C(0,0) = 1.
BigCount binomial_exact(std::int64_t a, std::int64_t b);

/// log C(n, d) via lgamma; -inf outside 0 <= d <= n. Overflow-safe at any n.
double log_binomial(double n, double d);

/// C(n, d) as uint64 when it fits, nothing otherwise.
/// Used to pick between exact enumeration and sparse sampling.
bool binomial_fits_u64(std::int64_t a, std::int64_t b, std::uint64_t* out);

/// The canonical two-block perturbation: ground truth A = (0^k, 1^{n-k}) with
/// i flips among the first k coordinates and j flips among the last n-k.
struct PartitionPerturbation {
  std::int64_t n = 0;
  std::int64_t d = 0;
  std::int64_t k = 0;
  std::int64_t i = 0;
  std::int64_t j = 0;

  void validate() const;  // throws DomainError outside the stated ranges

  BitVector truth() const;      // A
  BitVector candidate() const;  // A with the (i, j) flips applied
};

/// |F_{i,j}|: number of d-subsets on which the homogeneity measurement of A
/// and of the perturbed vector differ. Closed-form four-sum count.
BigCount count_distinctive_homogeneity(const PartitionPerturbation& pp);

/// |F_k|: number of d-subsets with odd intersection with the first k nodes,
/// i.e. parity-distinctive edges between the all-zero vector and the vector
/// with the first k coordinates set.
BigCount count_distinctive_parity(std::int64_t n, std::int64_t d,
                                  std::int64_t k);

/// Independent oracle: enumerate every d-subset and count measurement
/// disagreements between truth and candidate. Budget C(n,d) <= 1e7.
BigCount brute_force_distinctive(std::int64_t n, std::int64_t d,
                                 const BitVector& truth,
                                 const BitVector& candidate,
                                 MeasurementKind kind);

enum class NkRegime { kBelowBeta, kAboveBeta };

struct NkBound {
  double log_bound = 0.0;
  double bound = 0.0;  // exp(log_bound); may overflow to inf for huge n
  NkRegime regime = NkRegime::kAboveBeta;
};

/// Closed-form lower bound on N_k = |F_k| with the breakpoint
/// beta = ceil((n-d+1)/(2d+1)): (2k/(5*alpha))*C(n,d) below beta with
/// alpha = (n-d+1)/d, and C(n,d)/5 from beta up to n/2.
NkBound nk_lower_bound(std::int64_t n, std::int64_t d, std::int64_t k);

/// Exact-arithmetic check that count_distinctive_parity(n,d,k) satisfies the
/// nk_lower_bound inequality (rationals cleared, no floating point).
bool verify_nk_bound(std::int64_t n, std::int64_t d, std::int64_t k);

/// |F_{i,j}| >= (i+j) * (1-2*delta)^(d-1) / 2^(d-2) * C(n-1, d-1),
/// hypothesis i < delta*n and j < delta*n. Exact left side, log-space right
/// side. Throws DomainError when the hypothesis does not hold.
/// Note: the bound is an asymptotic statement; exact checking finds finite-n
/// violations (the smallest at n=11, d=4, k=5, i=j=1).
bool verify_lemma1(std::int64_t n, std::int64_t d, std::int64_t k,
                   std::int64_t i, std::int64_t j, double delta);

/// Intermediate terms of the Vandermonde split are at most twice the
/// intermediate odd terms plus 3*N_k. Exact integers.
bool verify_lemma4(std::int64_t n, std::int64_t d, std::int64_t k);

/// Boundary terms are at most A1 * (boundary odd terms), A1 = 2 for k >= beta
/// and A1 = alpha/k (>= 2) for k < beta. Exact integers, rationals cleared.
bool verify_lemma5(std::int64_t n, std::int64_t d, std::int64_t k);

/// C(n,d) == sum_i C(k,i) C(n-k,d-i), exactly.
bool vandermonde_check(std::int64_t n, std::int64_t d, std::int64_t k);

/// Deletion technique: drops every member of big_set that co-occurs in some
/// sampled hyperedge with another member. Order preserved.
std::vector<std::uint32_t> residual_independent_set(
    const MeasurementSet& ms, std::span<const std::uint32_t> big_set);

/// One exhaustive check family; counterexamples are reported as formatted
/// parameter tuples (capped) so property failures are actionable.
struct CheckReport {
  std::string name;
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  std::vector<std::string> counterexamples;  // first few only
  bool ok() const { return failures == 0; }
};

CheckReport sweep_oracle_homogeneity(int n_max, int d_max);
CheckReport sweep_oracle_parity(int n_max, int d_max);
CheckReport sweep_fact1_symmetry(int n_max, int d_max);
CheckReport sweep_lemma1(int n_max, int d_max, double delta);
CheckReport sweep_lemma4(int n_max, int d_max);
CheckReport sweep_lemma5(int n_max, int d_max);
CheckReport sweep_nk_bound(int n_max, int d_max);
CheckReport sweep_vandermonde(int n_max);
CheckReport sweep_logspace_binomial(int n_max);

}  // namespace gcbm
