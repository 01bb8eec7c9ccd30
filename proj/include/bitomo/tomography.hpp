#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "bitomo/dimension_calculus.hpp"
#include "bitomo/errors.hpp"
#include "bitomo/hermitian.hpp"
#include "bitomo/operator_bases.hpp"
#include "bitomo/tolerances.hpp"

namespace bitomo {

enum class FieldKind { Complex, Real };

inline std::string field_name(FieldKind field) {
  return field == FieldKind::Complex ? "complex" : "real";
}

/// Possibly unnormalized state: positive semidefinite with trace in (0, 1].
struct DensityMatrix {
  HermitianOp op;
  FieldKind field = FieldKind::Complex;

  int dim() const { return op.dim(); }
  double trace() const { return op.mat.trace().real(); }
};

inline DensityMatrix make_density(const Eigen::MatrixXcd& mat,
                                  FieldKind field) {
  HermitianOp op = make_hermitian(mat);
  if (field == FieldKind::Real && op.reality != Reality::RealSymmetric)
    throw InvalidStateError("real state has nonzero imaginary entries");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mat,
                                                     Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -kPsdTol)
    throw InvalidStateError("state is not positive semidefinite");
  const double tr = mat.trace().real();
  if (tr <= 0.0 || tr > 1.0 + kPsdTol)
    throw InvalidStateError("state trace must lie in (0, 1]");
  return DensityMatrix{std::move(op), field};
}

/// Measurement frame: an operator family plus, per operator, the largest
/// number of sites any one of its measurement groups covers.
struct MeasurementFrame {
  OperatorBasis basis;
  std::string id;
  std::vector<int> locality_degrees;

  int dim() const { return basis.dim(); }
  std::size_t size() const { return basis.size(); }
};

inline MeasurementFrame make_frame(OperatorBasis basis, std::string id) {
  MeasurementFrame frame{std::move(basis), std::move(id), {}};
  frame.locality_degrees.reserve(frame.basis.size());
  for (const BasisLabel& label : frame.basis.labels) {
    int degree = 1;
    if (frame.basis.kind == BasisKind::BilocalProjector && label.y_count() > 0)
      degree = 2;
    frame.locality_degrees.push_back(degree);
  }
  return frame;
}

/// Fiducial probability vector: one expectation per frame operator.
struct GptStateVector {
  Eigen::VectorXd probs;
  std::string frame_id;
};

/// p_i = Trace(frame_i * rho).  Traces must be real within tolerance; for
/// projector frames every entry must lie in [0, 1] within tolerance.
inline GptStateVector expectations(const DensityMatrix& rho,
                                   const MeasurementFrame& frame) {
  if (frame.dim() != rho.dim())
    throw DomainError("frame and state dimensions differ");
  const bool projective = frame.basis.kind == BasisKind::ComplexProjector ||
                          frame.basis.kind == BasisKind::BilocalProjector;
  Eigen::VectorXd probs(static_cast<Eigen::Index>(frame.size()));
  for (std::size_t i = 0; i < frame.size(); ++i) {
    const std::complex<double> tr =
        (frame.basis.ops[i].mat * rho.op.mat).trace();
    if (std::abs(tr.imag()) > kHermitianTol)
      throw InvalidStateError("expectation has imaginary residue");
    if (projective &&
        (tr.real() < -kPsdTol || tr.real() > 1.0 + kPsdTol))
      throw InvalidStateError("projector expectation outside [0, 1]");
    probs(static_cast<Eigen::Index>(i)) = tr.real();
  }
  return GptStateVector{std::move(probs), frame.id};
}

namespace detail {

/// Hermitian parameter basis of the reconstruction target space: the full
/// sigma basis for complex states, its real-symmetric subset for real ones.
inline std::vector<HermitianOp> param_basis(int dim, FieldKind field) {
  std::vector<HermitianOp> params;
  for (auto& op : sigma_basis(dim).ops) {
    if (field == FieldKind::Real && op.reality != Reality::RealSymmetric)
      continue;
    params.push_back(std::move(op));
  }
  return params;
}

}  // namespace detail

/// Solves for the unique target-space matrix reproducing the given
/// expectations.  Throws IncompleteFrameError (with the rank deficit) if the
/// frame does not determine the target space, InconsistentDataError if the
/// probabilities are not in the frame's range.
inline DensityMatrix reconstruct(const GptStateVector& p,
                                 const MeasurementFrame& frame,
                                 FieldKind field,
                                 double rank_rel_tol = kRankRelTol) {
  if (p.probs.size() != static_cast<Eigen::Index>(frame.size()))
    throw DomainError("probability vector length differs from frame size");
  const int dim = frame.dim();
  const auto params = detail::param_basis(dim, field);
  const Eigen::Index target = static_cast<Eigen::Index>(params.size());

  Eigen::MatrixXd design(static_cast<Eigen::Index>(frame.size()), target);
  for (std::size_t i = 0; i < frame.size(); ++i)
    for (Eigen::Index j = 0; j < target; ++j)
      design(static_cast<Eigen::Index>(i), j) =
          (frame.basis.ops[i].mat * params[j].mat).trace().real();

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double top = sv.size() > 0 ? sv(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (top > 0.0 && sv(i) / top > rank_rel_tol) ++rank;
  if (rank < target)
    throw IncompleteFrameError(
        "frame rank " + std::to_string(rank) + " does not determine the " +
            std::to_string(target) + "-dimensional target space",
        static_cast<int>(target - rank));

  const Eigen::VectorXd coeffs = svd.solve(p.probs);
  const double residual = (design * coeffs - p.probs).cwiseAbs().maxCoeff();
  if (residual > kResidualTol)
    throw InconsistentDataError(
        "expectations are inconsistent with the frame (residual " +
        std::to_string(residual) + ")");

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index j = 0; j < target; ++j) out += coeffs(j) * params[j].mat;
  return make_density(out, field);
}

/// Builds the 2x2 density matrix from the fiducial probabilities
/// (p_z+, p_z-, p_x+, p_y+): diagonal (p_z+, p_z-) and off-diagonal
/// a = p_x+ - i p_y+ - (1-i)/2 (p_z+ + p_z-).
inline DensityMatrix qubit_gpt_to_density(const std::array<double, 4>& p) {
  const double trace = p[0] + p[1];
  const std::complex<double> a =
      std::complex<double>(p[2], -p[3]) -
      0.5 * std::complex<double>(1.0, -1.0) * trace;
  Eigen::MatrixXcd mat(2, 2);
  mat(0, 0) = p[0];
  mat(1, 1) = p[1];
  mat(0, 1) = a;
  mat(1, 0) = std::conj(a);
  return make_density(mat, FieldKind::Complex);
}

/// Inverse of qubit_gpt_to_density; composing the two is the identity.
inline std::array<double, 4> qubit_density_to_gpt(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw DomainError("fiducial map is for 2-level states");
  const double trace = rho.trace();
  const std::complex<double> a = rho.op.mat(0, 1);
  return {rho.op.mat(0, 0).real(), rho.op.mat(1, 1).real(),
          a.real() + trace / 2.0, trace / 2.0 - a.imag()};
}

/// sigma_y acting on levels 1 and 2 of every site, as one product operator.
inline HermitianOp sigma_y_product(const SystemDims& dims) {
  validate_dims(dims);
  std::vector<HermitianOp> factors;
  for (std::int64_t n : dims) {
    if (n < 2) throw DomainError("sigma_y embedding needs site dimension >= 2");
    factors.push_back(make_hermitian(sigma_y_mat(static_cast<int>(n), 1, 2)));
  }
  return tensor(factors);
}

/// Two states that differ globally while agreeing on every product of
/// single-site real observables.
struct WitnessReport {
  DensityMatrix state_a;
  DensityMatrix state_b;
  double global_distance = 0.0;
  double max_local_stat_gap = 0.0;
  BasisLabel discriminating_observable;
  double discriminator_gap = 0.0;
  bool valid = false;
};

/// rho_pm = (I +- sigma_y x sigma_y)/D on two sites (D the total dimension,
/// sigma_y embedded in levels 1 and 2 of each site).  The two states share
/// all single-site real product statistics yet are far apart globally; the
/// two-site observable sigma_y x sigma_y tells them apart.
inline WitnessReport local_tomography_witness(const SystemDims& dims) {
  validate_dims(dims);
  if (dims.size() != 2)
    throw DomainError("local tomography witness needs exactly 2 sites");
  for (std::int64_t n : dims)
    if (n < 2) throw DomainError("witness needs both site dimensions >= 2");

  const HermitianOp y_product = sigma_y_product(dims);
  const int total_dim = y_product.dim();
  const Eigen::MatrixXcd identity =
      Eigen::MatrixXcd::Identity(total_dim, total_dim);
  const double scale = 1.0 / static_cast<double>(total_dim);

  WitnessReport report;
  report.state_a =
      make_density(scale * (identity + y_product.mat), FieldKind::Real);
  report.state_b =
      make_density(scale * (identity - y_product.mat), FieldKind::Real);

  const Eigen::MatrixXcd delta = report.state_a.op.mat - report.state_b.op.mat;
  report.global_distance = delta.norm();

  std::vector<std::vector<HermitianOp>> site_real_ops;
  for (std::int64_t n : dims) {
    std::vector<HermitianOp> ops;
    for (auto& op : sigma_basis(n).ops)
      if (op.reality == Reality::RealSymmetric) ops.push_back(std::move(op));
    site_real_ops.push_back(std::move(ops));
  }
  for (const auto& a : site_real_ops[0]) {
    for (const auto& b : site_real_ops[1]) {
      const double gap =
          std::abs((tensor({a, b}).mat * delta).trace().real());
      report.max_local_stat_gap = std::max(report.max_local_stat_gap, gap);
    }
  }

  const SiteLabel y12{SiteLabel::Kind::Y, 1, 2};
  report.discriminating_observable = BasisLabel{{y12, y12}};
  report.discriminator_gap =
      std::abs((y_product.mat * delta).trace().real());
  report.valid = report.global_distance > 0.1 &&
                 report.max_local_stat_gap <= kHermitianTol;
  return report;
}

inline DensityMatrix random_real_state(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = normal(rng);
  Eigen::MatrixXd gram = g * g.transpose();
  gram /= gram.trace();
  return make_density(gram.cast<std::complex<double>>(), FieldKind::Real);
}

inline DensityMatrix random_complex_state(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXcd g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      g(i, j) = std::complex<double>(normal(rng), normal(rng));
  Eigen::MatrixXcd gram = g * g.adjoint();
  gram /= gram.trace().real();
  return make_density(gram, FieldKind::Complex);
}

/// Coefficient of the all-sites sigma_y product in the Pauli-product
/// expansion of a state, extracted three ways.
struct FourRebitReport {
  double coeff_direct = 0.0;
  double coeff_ab_cd = 0.0;
  double coeff_ac_bd = 0.0;
  double coeff_ad_bc = 0.0;
  double max_spread = 0.0;
  int bilocal_rank = 0;
  RedundancyAudit audit;
};

/// Draws a random four-rebit state, reconstructs it from the bilocal
/// projector frame under each of the three ways of pairing the four y
/// factors, and extracts the sigma_y^x4 coefficient from each
/// reconstruction.  All three must agree: the three pairing measurements
/// carry the same single parameter.
inline FourRebitReport four_rebit_coincidence(std::uint64_t seed = 0) {
  const SystemDims dims{2, 2, 2, 2};
  std::mt19937_64 rng(seed);
  const DensityMatrix rho = random_real_state(16, rng);
  const HermitianOp y4 = sigma_y_product(dims);

  FourRebitReport report;
  report.coeff_direct = (y4.mat * rho.op.mat).trace().real() / 16.0;

  const std::vector<std::vector<std::pair<int, int>>> pairings = {
      {{0, 1}, {2, 3}}, {{0, 2}, {1, 3}}, {{0, 3}, {1, 2}}};
  std::array<double, 3> coeffs{};
  for (std::size_t k = 0; k < pairings.size(); ++k) {
    MeasurementFrame frame =
        make_frame(bilocal_projector_basis(dims, pairings[k]),
                   "bilocal-projector[2,2,2,2]/" + std::to_string(k));
    if (k == 0)
      report.bilocal_rank = linear_independence_rank(frame.basis.ops).rank;
    const DensityMatrix rebuilt =
        reconstruct(expectations(rho, frame), frame, FieldKind::Real);
    coeffs[k] = (y4.mat * rebuilt.op.mat).trace().real() / 16.0;
  }
  report.coeff_ab_cd = coeffs[0];
  report.coeff_ac_bd = coeffs[1];
  report.coeff_ad_bc = coeffs[2];
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    for (std::size_t j = i + 1; j < coeffs.size(); ++j)
      report.max_spread =
          std::max(report.max_spread, std::abs(coeffs[i] - coeffs[j]));

  report.audit = bilocal_redundancy_audit(dims, TheoryProfile{2, 1, 1});
  return report;
}

}  // namespace bitomo
