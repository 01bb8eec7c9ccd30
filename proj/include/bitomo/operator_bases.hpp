#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bitomo/dimension_calculus.hpp"
#include "bitomo/errors.hpp"
#include "bitomo/hermitian.hpp"

namespace bitomo {

/// Label of a single-site basis element.  Levels u, v are 1-based; diagonal
/// labels store the level in both u and v, off-diagonal labels have u < v.
struct SiteLabel {
  enum class Kind { Diag, X, Y };
  Kind kind = Kind::Diag;
  int u = 1;
  int v = 1;

  std::string str() const {
    switch (kind) {
      case Kind::Diag:
        return "d" + std::to_string(v);
      case Kind::X:
        return "x" + std::to_string(u) + "-" + std::to_string(v);
      case Kind::Y:
        return "y" + std::to_string(u) + "-" + std::to_string(v);
    }
    return {};
  }
};

/// One label per component of a product operator.
struct BasisLabel {
  std::vector<SiteLabel> sites;

  int y_count() const {
    int c = 0;
    for (const auto& s : sites)
      if (s.kind == SiteLabel::Kind::Y) ++c;
    return c;
  }

  /// Number of off-diagonal (x or y) factors.
  int sigma_count() const {
    int c = 0;
    for (const auto& s : sites)
      if (s.kind != SiteLabel::Kind::Diag) ++c;
    return c;
  }

  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < sites.size(); ++i) {
      if (i > 0) out += '*';
      out += sites[i].str();
    }
    return out;
  }
};

enum class BasisKind { ComplexProjector, Sigma, RealProduct, BilocalProjector };

struct OperatorBasis {
  std::vector<HermitianOp> ops;
  std::vector<BasisLabel> labels;
  BasisKind kind = BasisKind::Sigma;

  int dim() const { return ops.empty() ? 0 : ops[0].dim(); }
  std::size_t size() const { return ops.size(); }
};

inline Eigen::MatrixXcd proj_diag(int n, int v) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  m(v - 1, v - 1) = 1.0;
  return m;
}

inline Eigen::MatrixXcd sigma_x_mat(int n, int u, int v) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  m(u - 1, v - 1) = 1.0;
  m(v - 1, u - 1) = 1.0;
  return m;
}

inline Eigen::MatrixXcd sigma_y_mat(int n, int u, int v) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  m(u - 1, v - 1) = std::complex<double>(0.0, -1.0);
  m(v - 1, u - 1) = std::complex<double>(0.0, 1.0);
  return m;
}

/// Canonical single-site label order: diagonal levels, then x pairs, then y
/// pairs, each lexicographic in (u, v).
inline std::vector<SiteLabel> site_labels_in_order(int n) {
  std::vector<SiteLabel> labels;
  for (int v = 1; v <= n; ++v) labels.push_back({SiteLabel::Kind::Diag, v, v});
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v) labels.push_back({SiteLabel::Kind::X, u, v});
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v) labels.push_back({SiteLabel::Kind::Y, u, v});
  return labels;
}

inline Eigen::MatrixXcd sigma_op_for_label(int n, const SiteLabel& label) {
  switch (label.kind) {
    case SiteLabel::Kind::Diag:
      return proj_diag(n, label.v);
    case SiteLabel::Kind::X:
      return sigma_x_mat(n, label.u, label.v);
    case SiteLabel::Kind::Y:
      return sigma_y_mat(n, label.u, label.v);
  }
  throw InvalidStateError("unreachable site label kind");
}

/// Rank-1 projector for a single-site label: the diagonal |v><v|, or the
/// normalized superposition projector (P_u + P_v + sigma)/2 for x and y.
inline Eigen::MatrixXcd projector_op_for_label(int n, const SiteLabel& label) {
  if (label.kind == SiteLabel::Kind::Diag) return proj_diag(n, label.v);
  Eigen::MatrixXcd m = proj_diag(n, label.u) + proj_diag(n, label.v) +
                       sigma_op_for_label(n, label);
  return 0.5 * m;
}

/// The n diagonal projectors plus the real and imaginary off-diagonal sigma
/// operators; n(n+1)/2 real-symmetric and n(n-1)/2 imaginary-antisymmetric
/// elements in total.
inline OperatorBasis sigma_basis(std::int64_t n) {
  if (n < 1) throw DomainError("sigma basis needs n >= 1");
  const int ni = static_cast<int>(n);
  OperatorBasis basis;
  basis.kind = BasisKind::Sigma;
  for (const auto& label : site_labels_in_order(ni)) {
    basis.ops.push_back(make_hermitian(sigma_op_for_label(ni, label)));
    basis.labels.push_back(BasisLabel{{label}});
  }
  return basis;
}

namespace detail {

/// Runs `emit` for every combination of per-site label indices, with site 0
/// varying slowest (outermost).
inline void for_each_product(const std::vector<int>& site_counts,
                             const std::function<void(const std::vector<int>&)>& emit) {
  std::vector<int> idx(site_counts.size(), 0);
  while (true) {
    emit(idx);
    int pos = static_cast<int>(idx.size()) - 1;
    while (pos >= 0) {
      if (++idx[pos] < site_counts[pos]) break;
      idx[pos] = 0;
      --pos;
    }
    if (pos < 0) return;
  }
}

inline std::vector<int> as_int_dims(const SystemDims& dims) {
  validate_dims(dims);
  std::vector<int> out;
  out.reserve(dims.size());
  for (std::int64_t n : dims) {
    if (n > 64) throw DomainError("site dimension too large for dense bases");
    out.push_back(static_cast<int>(n));
  }
  return out;
}

}  // namespace detail

/// All n^2 rank-1 projectors: the diagonal |v><v| plus the x and y
/// superposition projectors for each level pair.
inline OperatorBasis complex_projector_basis(std::int64_t n) {
  if (n < 1) throw DomainError("complex projector basis needs n >= 1");
  const int ni = static_cast<int>(n);
  OperatorBasis basis;
  basis.kind = BasisKind::ComplexProjector;
  for (const auto& label : site_labels_in_order(ni)) {
    basis.ops.push_back(make_hermitian(projector_op_for_label(ni, label)));
    basis.labels.push_back(BasisLabel{{label}});
  }
  return basis;
}

/// Tensor products of per-site complex projectors, (Pi dims)^2 in total.
inline OperatorBasis complex_product_basis(const SystemDims& dims) {
  const auto site_dims = detail::as_int_dims(dims);
  std::vector<std::vector<SiteLabel>> site_labels;
  std::vector<int> counts;
  for (int n : site_dims) {
    site_labels.push_back(site_labels_in_order(n));
    counts.push_back(static_cast<int>(site_labels.back().size()));
  }
  OperatorBasis basis;
  basis.kind = BasisKind::ComplexProjector;
  detail::for_each_product(counts, [&](const std::vector<int>& idx) {
    std::vector<HermitianOp> factors;
    BasisLabel label;
    for (std::size_t t = 0; t < idx.size(); ++t) {
      const SiteLabel& sl = site_labels[t][idx[t]];
      factors.push_back(
          make_hermitian(projector_op_for_label(site_dims[t], sl)));
      label.sites.push_back(sl);
    }
    basis.ops.push_back(tensor(factors));
    basis.labels.push_back(std::move(label));
  });
  return basis;
}

/// Tensor products of per-site sigma operators with an even total y-count;
/// exactly N(N+1)/2 real-symmetric operators for N = Pi dims.
inline OperatorBasis real_product_basis(const SystemDims& dims) {
  const auto site_dims = detail::as_int_dims(dims);
  std::vector<std::vector<SiteLabel>> site_labels;
  std::vector<int> counts;
  for (int n : site_dims) {
    site_labels.push_back(site_labels_in_order(n));
    counts.push_back(static_cast<int>(site_labels.back().size()));
  }
  OperatorBasis basis;
  basis.kind = BasisKind::RealProduct;
  detail::for_each_product(counts, [&](const std::vector<int>& idx) {
    BasisLabel label;
    for (std::size_t t = 0; t < idx.size(); ++t)
      label.sites.push_back(site_labels[t][idx[t]]);
    if (label.y_count() % 2 != 0) return;
    std::vector<HermitianOp> factors;
    for (std::size_t t = 0; t < idx.size(); ++t)
      factors.push_back(
          make_hermitian(sigma_op_for_label(site_dims[t], label.sites[t])));
    basis.ops.push_back(tensor(factors));
    basis.labels.push_back(std::move(label));
  });
  return basis;
}

namespace detail {

/// Resolves the y-site pairing for one product: template pairs lying fully
/// inside the product's y-set are taken as given, the remaining y-sites are
/// paired adjacently left to right.
inline std::vector<std::pair<int, int>> resolve_pairing(
    const std::vector<int>& y_sites,
    const std::optional<std::vector<std::pair<int, int>>>& pairing) {
  std::set<int> pending(y_sites.begin(), y_sites.end());
  std::vector<std::pair<int, int>> pairs;
  if (pairing) {
    for (const auto& [a, b] : *pairing) {
      if (pending.count(a) && pending.count(b)) {
        pairs.emplace_back(a, b);
        pending.erase(a);
        pending.erase(b);
      }
    }
  }
  std::vector<int> rest(pending.begin(), pending.end());
  if (rest.size() % 2 != 0)
    throw InvalidStateError("odd number of unpaired y-sites");
  for (std::size_t i = 0; i + 1 < rest.size(); i += 2)
    pairs.emplace_back(rest[i], rest[i + 1]);
  return pairs;
}

inline void validate_pairing_template(
    const std::vector<std::pair<int, int>>& pairing, int num_sites) {
  std::set<int> seen;
  for (const auto& [a, b] : pairing) {
    if (a < 0 || b < 0 || a >= num_sites || b >= num_sites)
      throw DomainError("pairing site index out of range");
    if (a == b) throw DomainError("pairing pairs a site with itself");
    if (!seen.insert(a).second || !seen.insert(b).second)
      throw DomainError("pairing repeats a site");
  }
}

}  // namespace detail

/// Projector form of the real product basis: x factors become
/// (P_u + P_v + sigma_x)/2 and each pair of y factors becomes
/// ((P_u + P_v) x (P_u' + P_v') + sigma_y x sigma_y)/2.  Every output is an
/// idempotent real-symmetric product of operators on at most two sites.
inline OperatorBasis bilocal_projector_basis(
    const SystemDims& dims,
    const std::optional<std::vector<std::pair<int, int>>>& pairing =
        std::nullopt) {
  const auto site_dims = detail::as_int_dims(dims);
  if (pairing)
    detail::validate_pairing_template(*pairing,
                                      static_cast<int>(site_dims.size()));
  const OperatorBasis base = real_product_basis(dims);
  const int m = static_cast<int>(site_dims.size());

  std::int64_t total_dim = 1;
  for (int n : site_dims) total_dim *= n;

  OperatorBasis basis;
  basis.kind = BasisKind::BilocalProjector;
  basis.labels = base.labels;
  for (const BasisLabel& label : base.labels) {
    std::vector<Eigen::MatrixXcd> fixed(m);
    std::vector<int> y_sites;
    for (int t = 0; t < m; ++t) {
      const SiteLabel& sl = label.sites[t];
      if (sl.kind == SiteLabel::Kind::Y)
        y_sites.push_back(t);
      else
        fixed[t] = projector_op_for_label(site_dims[t], sl);
    }
    const auto pairs = detail::resolve_pairing(y_sites, pairing);
    const int np = static_cast<int>(pairs.size());

    Eigen::MatrixXcd total =
        Eigen::MatrixXcd::Zero(total_dim, total_dim);
    const double weight = std::pow(0.5, np);
    for (int mask = 0; mask < (1 << np); ++mask) {
      std::vector<Eigen::MatrixXcd> slots = fixed;
      for (int p = 0; p < np; ++p) {
        const auto [i, j] = pairs[p];
        const SiteLabel& li = label.sites[i];
        const SiteLabel& lj = label.sites[j];
        if (mask & (1 << p)) {
          slots[i] = sigma_op_for_label(site_dims[i], li);
          slots[j] = sigma_op_for_label(site_dims[j], lj);
        } else {
          slots[i] = proj_diag(site_dims[i], li.u) + proj_diag(site_dims[i], li.v);
          slots[j] = proj_diag(site_dims[j], lj.u) + proj_diag(site_dims[j], lj.v);
        }
      }
      Eigen::MatrixXcd branch = slots[0];
      for (int t = 1; t < m; ++t) branch = kron(branch, slots[t]);
      total += weight * branch;
    }
    basis.ops.push_back(make_hermitian(total));
  }
  return basis;
}

}  // namespace bitomo
