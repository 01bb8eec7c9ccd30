#pragma once

#include <Eigen/Dense>
#include <vector>

#include "bitomo/errors.hpp"
#include "bitomo/tolerances.hpp"

namespace bitomo {

enum class Reality { RealSymmetric, ImagAntisymmetric, GeneralHermitian };

/// Dense Hermitian operator together with its entrywise reality class.
struct HermitianOp {
  Eigen::MatrixXcd mat;
  Reality reality = Reality::GeneralHermitian;

  int dim() const { return static_cast<int>(mat.rows()); }
};

inline Reality classify_reality(const Eigen::MatrixXcd& mat,
                                double tol = kHermitianTol) {
  const double max_im = mat.imag().cwiseAbs().maxCoeff();
  if (max_im <= tol) return Reality::RealSymmetric;
  const double max_re = mat.real().cwiseAbs().maxCoeff();
  if (max_re <= tol) return Reality::ImagAntisymmetric;
  return Reality::GeneralHermitian;
}

/// Validates hermiticity and attaches the reality class.
inline HermitianOp make_hermitian(const Eigen::MatrixXcd& mat) {
  if (mat.rows() != mat.cols() || mat.rows() == 0)
    throw DomainError("hermitian operator must be square and nonempty");
  const double dev = (mat - mat.adjoint()).cwiseAbs().maxCoeff();
  if (dev > kHermitianTol)
    throw InvalidStateError("matrix is not hermitian within tolerance");
  return HermitianOp{mat, classify_reality(mat)};
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a,
                             const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Kronecker product in the given site order.  The reality class follows the
/// parity rule: any general factor makes the product general, otherwise an
/// even number of imaginary-antisymmetric factors gives a real-symmetric
/// product and an odd number an imaginary-antisymmetric one.
inline HermitianOp tensor(const std::vector<HermitianOp>& ops) {
  if (ops.empty()) throw DomainError("tensor of an empty operator list");
  Eigen::MatrixXcd acc = ops[0].mat;
  bool any_general = ops[0].reality == Reality::GeneralHermitian;
  int imag_count = ops[0].reality == Reality::ImagAntisymmetric ? 1 : 0;
  for (std::size_t i = 1; i < ops.size(); ++i) {
    acc = kron(acc, ops[i].mat);
    if (ops[i].reality == Reality::GeneralHermitian) any_general = true;
    if (ops[i].reality == Reality::ImagAntisymmetric) ++imag_count;
  }
  Reality reality = any_general ? Reality::GeneralHermitian
                    : (imag_count % 2 == 0 ? Reality::RealSymmetric
                                           : Reality::ImagAntisymmetric);
  return HermitianOp{std::move(acc), reality};
}

/// Row-major flattening with all real parts before all imaginary parts.
/// Dual-frame solves elsewhere assume exactly this layout.
inline Eigen::VectorXd vectorize(const HermitianOp& op) {
  const int d = op.dim();
  Eigen::VectorXd v(2 * d * d);
  int idx = 0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) v(idx++) = op.mat(i, j).real();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) v(idx++) = op.mat(i, j).imag();
  return v;
}

struct RankCertificate {
  int rank = 0;
  double min_relative_sv = 0.0;
};

/// Numerical rank of the vectorized operator family: singular values above
/// the relative threshold count toward the rank.
inline RankCertificate linear_independence_rank(
    const std::vector<HermitianOp>& ops, double rel_tol = kRankRelTol) {
  if (ops.empty()) throw DomainError("rank of an empty operator list");
  const int d = ops[0].dim();
  for (const auto& op : ops)
    if (op.dim() != d) throw DomainError("rank check needs equal dimensions");

  Eigen::MatrixXd stacked(static_cast<Eigen::Index>(ops.size()), 2 * d * d);
  for (std::size_t i = 0; i < ops.size(); ++i)
    stacked.row(static_cast<Eigen::Index>(i)) = vectorize(ops[i]).transpose();

  Eigen::BDCSVD<Eigen::MatrixXd> svd(stacked);
  const auto& sv = svd.singularValues();
  const double top = sv(0);
  RankCertificate cert;
  if (top <= 0.0) return cert;
  cert.min_relative_sv = sv(sv.size() - 1) / top;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) / top > rel_tol) ++cert.rank;
  return cert;
}

}  // namespace bitomo
