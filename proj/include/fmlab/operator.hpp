#pragma once

// Dense complex operator kernels: Schatten and weak quasi-norms, polarization
// block structure, the GL_p metric, and the small set of factorizations the
// rest of the library is built on.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fmlab/error.hpp"

namespace fmlab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kHermitianTolerance = 1e-10;

namespace detail {

inline std::string shape_of(const CMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

inline void require_square(const CMatrix& a, const char* what) {
  if (a.rows() != a.cols())
    throw Error(ErrorKind::Shape, std::string(what) + ": expected square matrix, got " + shape_of(a));
}

inline void require_order(double p, const char* what) {
  if (!(p >= 1.0)) throw Error(ErrorKind::InvalidOrder, std::string(what) + ": order must be >= 1");
}

}  // namespace detail

inline bool all_finite(const CMatrix& a) {
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) return false;
  return true;
}

inline CMatrix identity(Eigen::Index n) { return CMatrix::Identity(n, n); }

/// Singular values in descending order.
inline RVector singular_values(const CMatrix& a) {
  if (a.size() == 0) return RVector(0);
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues();
}

/// (sum_i s_i^p)^(1/p) over the singular values of `a`.
inline double schatten_norm(const CMatrix& a, double p) {
  detail::require_order(p, "schatten_norm");
  const RVector s = singular_values(a);
  if (s.size() == 0 || s(0) == 0.0) return 0.0;
  // Scale by the largest singular value so large p cannot overflow.
  const double top = s(0);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) acc += std::pow(s(i) / top, p);
  return top * std::pow(acc, 1.0 / p);
}

/// Weak-l^p quasi-norm sup_k k^(1/p) s_k with s_1 >= s_2 >= ... (1-indexed).
inline double weak_quasi_norm(const CMatrix& a, double p) {
  detail::require_order(p, "weak_quasi_norm");
  const RVector s = singular_values(a);
  double best = 0.0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    best = std::max(best, std::pow(static_cast<double>(k + 1), 1.0 / p) * s(k));
  return best;
}

/// Largest singular value.
inline double operator_norm(const CMatrix& a) {
  const RVector s = singular_values(a);
  return s.size() == 0 ? 0.0 : s(0);
}

/// Splitting C^n = H+ (first k coordinates) + H- (remaining n-k).
class Polarization {
 public:
  Polarization(Eigen::Index dim, Eigen::Index plus_dim) : dim_(dim), plus_dim_(plus_dim) {
    if (dim < 0 || plus_dim < 0 || plus_dim > dim)
      throw Error(ErrorKind::Shape, "polarization requires 0 <= k <= n, got n=" + std::to_string(dim) +
                                        " k=" + std::to_string(plus_dim));
  }

  Eigen::Index dim() const noexcept { return dim_; }
  Eigen::Index plus_dim() const noexcept { return plus_dim_; }
  Eigen::Index minus_dim() const noexcept { return dim_ - plus_dim_; }

  /// The sign operator: +1 on H+, -1 on H-.
  CMatrix sign() const {
    CMatrix eps = CMatrix::Zero(dim_, dim_);
    for (Eigen::Index i = 0; i < dim_; ++i) eps(i, i) = i < plus_dim_ ? 1.0 : -1.0;
    return eps;
  }

  bool operator==(const Polarization&) const = default;

 private:
  Eigen::Index dim_;
  Eigen::Index plus_dim_;
};

struct BlockOperator {
  CMatrix a;  // H+ -> H+
  CMatrix b;  // H- -> H+
  CMatrix c;  // H+ -> H-
  CMatrix d;  // H- -> H-
};

inline void require_polarized(const CMatrix& m, const Polarization& pol, const char* what) {
  if (m.rows() != pol.dim() || m.cols() != pol.dim())
    throw Error(ErrorKind::Shape, std::string(what) + ": expected " + std::to_string(pol.dim()) + "x" +
                                      std::to_string(pol.dim()) + ", got " + detail::shape_of(m));
}

inline BlockOperator block_decompose(const CMatrix& m, const Polarization& pol) {
  require_polarized(m, pol, "block_decompose");
  const auto k = pol.plus_dim();
  const auto r = pol.minus_dim();
  return BlockOperator{m.topLeftCorner(k, k), m.topRightCorner(k, r), m.bottomLeftCorner(r, k),
                       m.bottomRightCorner(r, r)};
}

inline CMatrix reassemble(const BlockOperator& blocks) {
  const auto k = blocks.a.rows();
  const auto r = blocks.d.rows();
  if (blocks.a.cols() != k || blocks.b.rows() != k || blocks.b.cols() != r || blocks.c.rows() != r ||
      blocks.c.cols() != k || blocks.d.cols() != r)
    throw Error(ErrorKind::Shape, "reassemble: inconsistent block shapes");
  CMatrix m(k + r, k + r);
  m.topLeftCorner(k, k) = blocks.a;
  m.topRightCorner(k, r) = blocks.b;
  m.bottomLeftCorner(r, k) = blocks.c;
  m.bottomRightCorner(r, r) = blocks.d;
  return m;
}

/// [eps, A] = eps A - A eps. Only the off-diagonal blocks survive: 2b and -2c.
inline CMatrix sign_commutator(const CMatrix& m, const Polarization& pol) {
  require_polarized(m, pol, "sign_commutator");
  const CMatrix eps = pol.sign();
  return eps * m - m * eps;
}

struct NormReport {
  double operator_norm_a = 0.0;
  double operator_norm_d = 0.0;
  double schatten_b = 0.0;
  double schatten_c = 0.0;
  double order = 1.0;  // the Schatten order used on b and c (2p)
  double mr_norm = 0.0;
};

/// ||a|| + ||d|| + ||b||_{2p} + ||c||_{2p}, diagonal blocks in the operator 2-norm.
inline NormReport mr_norm_report(const CMatrix& g, const Polarization& pol, double p) {
  detail::require_order(p, "mr_norm_report");
  const BlockOperator blk = block_decompose(g, pol);
  NormReport r;
  r.operator_norm_a = operator_norm(blk.a);
  r.operator_norm_d = operator_norm(blk.d);
  r.order = 2.0 * p;
  r.schatten_b = schatten_norm(blk.b, r.order);
  r.schatten_c = schatten_norm(blk.c, r.order);
  r.mr_norm = r.operator_norm_a + r.operator_norm_d + r.schatten_b + r.schatten_c;
  return r;
}

inline double mr_distance(const CMatrix& g, const CMatrix& h, const Polarization& pol, double p) {
  require_polarized(g, pol, "mr_distance");
  require_polarized(h, pol, "mr_distance");
  return mr_norm_report(g - h, pol, p).mr_norm;
}

struct Eigensystem {
  RVector values;   // ascending
  CMatrix vectors;  // columns, unitary
};

inline double hermitian_defect(const CMatrix& d) {
  if (d.size() == 0) return 0.0;
  return (d - d.adjoint()).cwiseAbs().maxCoeff();
}

inline Eigensystem hermitian_eigensystem(const CMatrix& d) {
  detail::require_square(d, "hermitian_eigensystem");
  const double defect = hermitian_defect(d);
  if (defect > kHermitianTolerance)
    throw Error(ErrorKind::Symmetry, "hermitian_eigensystem: |D - D*|_max = " + std::to_string(defect));
  const CMatrix sym = 0.5 * (d + d.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::InternalConsistency, "hermitian_eigensystem: solver did not converge");
  const auto n = d.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const RVector& raw = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) { return raw(i) < raw(j); });
  Eigensystem out{RVector(n), CMatrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = raw(order[static_cast<std::size_t>(i)]);
    out.vectors.col(i) = solver.eigenvectors().col(order[static_cast<std::size_t>(i)]);
  }
  return out;
}

/// Determinant by LU with partial pivoting.
inline Complex determinant(const CMatrix& a) {
  detail::require_square(a, "determinant");
  if (a.rows() == 0) return Complex(1.0, 0.0);
  return Eigen::PartialPivLU<CMatrix>(a).determinant();
}

/// exp(A) by scaling and squaring around a truncated Taylor series.
inline CMatrix matrix_exponential(const CMatrix& a) {
  detail::require_square(a, "matrix_exponential");
  const auto n = a.rows();
  if (n == 0) return CMatrix(0, 0);
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
  const CMatrix scaled = a / std::ldexp(1.0, squarings);

  CMatrix result = CMatrix::Identity(n, n);
  CMatrix term = CMatrix::Identity(n, n);
  for (int j = 1; j <= 30; ++j) {
    term = (term * scaled) / static_cast<double>(j);
    result += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18 * result.cwiseAbs().maxCoeff()) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

inline double max_abs(const CMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

}  // namespace fmlab
