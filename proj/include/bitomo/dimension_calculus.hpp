#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bitomo/checked.hpp"
#include "bitomo/errors.hpp"
#include "bitomo/partitions.hpp"

namespace bitomo {

/// Parameter counts of a system: k measurable state parameters and l latent
/// parameters that only become accessible in joint measurements.
struct KLPair {
  std::int64_t k = 1;
  std::int64_t l = 0;
};

/// Exponent pair (r, s) with r >= s >= 1 plus the composition factor alpha;
/// alpha = 1 recovers the plain N_AB = N_A * N_B rule.
struct TheoryProfile {
  int r = 2;
  int s = 2;
  std::int64_t alpha = 1;
};

/// Distinguishable-state counts of the components of a composite system.
using SystemDims = std::vector<std::int64_t>;

/// Outcome of counting bilocal measurement parameters class by class and
/// comparing against the true joint K.
struct RedundancyAudit {
  std::int64_t naive_count = 0;
  std::int64_t true_k = 0;
  std::int64_t surplus = 0;
  std::map<std::string, std::int64_t> per_class;
};

inline void validate_profile(const TheoryProfile& profile) {
  if (profile.s < 1 || profile.r < profile.s)
    throw DomainError("theory profile needs r >= s >= 1");
  if (profile.alpha < 1) throw DomainError("theory profile needs alpha >= 1");
}

inline void validate_dims(const SystemDims& dims) {
  if (dims.empty()) throw DomainError("dims list must be nonempty");
  for (std::int64_t n : dims)
    if (n < 1) throw DomainError("dims entries must be >= 1");
}

/// K = ((alpha*n)^r + (alpha*n)^s)/2, L = ((alpha*n)^r - (alpha*n)^s)/2.
/// Both powers share the base alpha*n, so their sum and difference are even
/// and the division is exact.
inline KLPair kl_single(std::int64_t n, const TheoryProfile& profile) {
  validate_profile(profile);
  if (n < 1) throw DomainError("kl_single needs n >= 1");
  const std::int64_t base = checked_mul(profile.alpha, n);
  const std::int64_t hi = checked_pow(base, profile.r);
  const std::int64_t lo = checked_pow(base, profile.s);
  return KLPair{checked_add(hi, lo) / 2, checked_sub(hi, lo) / 2};
}

/// Pairwise composition law: K_AB = K_A K_B + L_A L_B and
/// L_AB = K_A L_B + L_A K_B.
inline KLPair kl_compose(const KLPair& a, const KLPair& b) {
  return KLPair{
      checked_add(checked_mul(a.k, b.k), checked_mul(a.l, b.l)),
      checked_add(checked_mul(a.k, b.l), checked_mul(a.l, b.k))};
}

/// Left fold of kl_compose over per-component kl_single values.
inline KLPair kl_multi(const SystemDims& dims, const TheoryProfile& profile) {
  validate_dims(dims);
  KLPair acc = kl_single(dims[0], profile);
  for (std::size_t i = 1; i < dims.size(); ++i)
    acc = kl_compose(acc, kl_single(dims[i], profile));
  return acc;
}

/// Three-body count K_ABC = K_A K_BC + K_B K_AC + K_C K_AB - 2 K_A K_B K_C.
inline std::int64_t k_three_body(std::int64_t ka, std::int64_t kb,
                                 std::int64_t kc, std::int64_t kab,
                                 std::int64_t kac, std::int64_t kbc) {
  for (std::int64_t v : {ka, kb, kc, kab, kac, kbc})
    if (v < 1) throw DomainError("k_three_body needs all counts >= 1");
  std::int64_t sum = checked_mul(ka, kbc);
  sum = checked_add(sum, checked_mul(kb, kac));
  sum = checked_add(sum, checked_mul(kc, kab));
  const std::int64_t triple = checked_mul(checked_mul(ka, kb), kc);
  return checked_sub(sum, checked_mul(2, triple));
}

/// Joint-measurement excess h(na, nb) = K(na*nb) - K(na)*K(nb).  For
/// alpha = 1 this equals L(na)*L(nb).
inline std::int64_t h_value(std::int64_t na, std::int64_t nb,
                            const TheoryProfile& profile) {
  if (na < 1 || nb < 1) throw DomainError("h_value needs na, nb >= 1");
  const std::int64_t joint = kl_single(checked_mul(na, nb), profile).k;
  const std::int64_t split =
      checked_mul(kl_single(na, profile).k, kl_single(nb, profile).k);
  return checked_sub(joint, split);
}

/// Finds the unique (r, s) with r >= s >= 1 reproducing every table entry as
/// K(n) = (n^r + n^s)/2.  The n = 2 entry bounds the search: K(2) >= 2^(r-1).
inline std::optional<TheoryProfile> fit_profile(
    const std::vector<std::pair<std::int64_t, std::int64_t>>& k_table) {
  std::map<std::int64_t, std::int64_t> table;
  for (const auto& [n, k] : k_table) {
    if (n < 1) throw MalformedInputError("fit table has entry with n < 1");
    auto [it, inserted] = table.emplace(n, k);
    if (!inserted && it->second != k)
      throw MalformedInputError("fit table has conflicting K values for n=" +
                                std::to_string(n));
  }
  if (auto it = table.find(1); it != table.end() && it->second != 1)
    throw MalformedInputError("fit table entry for n=1 must be K=1");
  if (!table.count(2) || !table.count(3))
    throw MalformedInputError("fit table needs entries for n=2 and n=3");

  const std::int64_t k2 = table.at(2);
  if (k2 < 1) return std::nullopt;
  const int r_max =
      static_cast<int>(std::floor(std::log2(static_cast<double>(2 * k2)))) + 1;

  for (int r = 1; r <= r_max; ++r) {
    for (int s = 1; s <= r; ++s) {
      const TheoryProfile candidate{r, s, 1};
      bool ok = true;
      for (const auto& [n, k] : table) {
        try {
          if (kl_single(n, candidate).k != k) {
            ok = false;
            break;
          }
        } catch (const OverflowError&) {
          ok = false;
          break;
        }
      }
      if (ok) return candidate;
    }
  }
  return std::nullopt;
}

/// Counts bilocal measurement parameters partition class by partition class:
/// singletons contribute their K, pairs contribute K_pair - K*K, and the sum
/// over all singleton/pair partitions is compared with the true joint K.
inline RedundancyAudit bilocal_redundancy_audit(const SystemDims& dims,
                                                const TheoryProfile& profile) {
  validate_dims(dims);
  validate_profile(profile);
  if (dims.size() < 3)
    throw DomainError("bilocal redundancy audit needs at least 3 components");

  std::vector<KLPair> singles;
  singles.reserve(dims.size());
  for (std::int64_t n : dims) singles.push_back(kl_single(n, profile));

  RedundancyAudit audit;
  for (const auto& partition : pair_partitions(static_cast<int>(dims.size()))) {
    std::int64_t contribution = 1;
    for (const auto& block : partition) {
      if (block.size() == 1) {
        contribution = checked_mul(contribution, singles[block[0]].k);
      } else {
        const KLPair& a = singles[block[0]];
        const KLPair& b = singles[block[1]];
        const std::int64_t excess =
            checked_sub(kl_compose(a, b).k, checked_mul(a.k, b.k));
        contribution = checked_mul(contribution, excess);
      }
    }
    std::string key = shape_string(shape_of(partition));
    auto [it, inserted] = audit.per_class.emplace(key, contribution);
    if (!inserted) it->second = checked_add(it->second, contribution);
    audit.naive_count = checked_add(audit.naive_count, contribution);
  }
  audit.true_k = kl_multi(dims, profile).k;
  audit.surplus = checked_sub(audit.naive_count, audit.true_k);
  return audit;
}

}  // namespace bitomo
