#pragma once

// Regularized determinants det_p(1+A) = det(1 + R_p(A)), the multiplicativity
// defect gamma_p and the cocycle omega_p.

#include <cmath>
#include <numbers>
#include <string>

#include "fmlab/operator.hpp"

namespace fmlab {

inline constexpr double kSingularCutoff = 1e-12;
inline constexpr double kDualFormulaTolerance = 1e-9;

struct RegDet {
  Complex value;
  int order = 1;
  Complex log_value;  // principal branch of log(value)
};

namespace detail {

inline void require_integer_order(int p, const char* what) {
  if (p < 1) throw Error(ErrorKind::InvalidOrder, std::string(what) + ": p must be a positive integer");
}

// sum_{j=1}^{p-1} (-1)^j A^j / j
inline CMatrix subtracted_log_terms(const CMatrix& a, int p) {
  CMatrix sum = CMatrix::Zero(a.rows(), a.cols());
  CMatrix power = CMatrix::Identity(a.rows(), a.cols());
  for (int j = 1; j < p; ++j) {
    power = power * a;
    sum += ((j % 2 == 0) ? 1.0 : -1.0) * power / static_cast<double>(j);
  }
  return sum;
}

inline double relative_gap(Complex x, Complex y) {
  const double scale = std::max({std::abs(x), std::abs(y), 1e-300});
  return std::abs(x - y) / scale;
}

// Representative of z modulo 2*pi*i with imaginary part in (-pi, pi].
inline Complex reduce_mod_2pi_i(Complex z) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double im = std::remainder(z.imag(), two_pi);
  if (im <= -std::numbers::pi) im += two_pi;
  return {z.real(), im};
}

}  // namespace detail

/// R_p(A) = -1 + (1+A) exp(sum_{j=1}^{p-1} (-1)^j A^j / j).
inline CMatrix r_p(const CMatrix& a, int p) {
  detail::require_integer_order(p, "r_p");
  detail::require_square(a, "r_p");
  const auto n = a.rows();
  const CMatrix one = CMatrix::Identity(n, n);
  if (p == 1) return a;
  return -one + (one + a) * matrix_exponential(detail::subtracted_log_terms(a, p));
}

/// det_p(1+A), evaluated both as det(1+R_p(A)) and as
/// det(1+A) exp(Tr sum_{j<p} (-1)^j A^j / j); the two must agree.
inline RegDet det_p(const CMatrix& a, int p) {
  detail::require_integer_order(p, "det_p");
  detail::require_square(a, "det_p");
  const auto n = a.rows();
  const CMatrix one = CMatrix::Identity(n, n);
  const Complex direct = determinant(one + r_p(a, p));
  const Complex trace_form =
      determinant(one + a) * std::exp(detail::subtracted_log_terms(a, p).trace());
  if (detail::relative_gap(direct, trace_form) > kDualFormulaTolerance &&
      std::abs(direct - trace_form) > kSingularCutoff)
    throw Error(ErrorKind::InternalConsistency,
                "det_p: det(1+R_p(A)) and the trace formula disagree (relative gap " +
                    std::to_string(detail::relative_gap(direct, trace_form)) + ")");
  RegDet out;
  out.value = direct;
  out.order = p;
  out.log_value = std::abs(direct) > 0.0 ? std::log(direct) : Complex(-INFINITY, 0.0);
  return out;
}

/// Largest eigenvalue modulus.
inline double spectral_radius(const CMatrix& a) {
  detail::require_square(a, "spectral_radius");
  if (a.rows() == 0) return 0.0;
  Eigen::ComplexEigenSolver<CMatrix> solver(a, false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

/// Partial sum sum_{j=p}^{p+terms-1} (-1)^{j+1} Tr(A^j)/j of log det_p(1+A).
inline Complex log_det_p_series(const CMatrix& a, int p, int terms) {
  detail::require_integer_order(p, "log_det_p_series");
  detail::require_square(a, "log_det_p_series");
  const double rho = spectral_radius(a);
  if (rho >= 1.0 - 1e-8)
    throw Error(ErrorKind::Divergence, "log_det_p_series: spectral radius " + std::to_string(rho) + " >= 1");
  Complex sum(0.0, 0.0);
  if (a.rows() == 0 || terms <= 0) return sum;
  CMatrix power = CMatrix::Identity(a.rows(), a.cols());
  for (int j = 1; j < p; ++j) power = power * a;
  for (int j = p; j < p + terms; ++j) {
    power = power * a;
    sum += ((j % 2 == 1) ? 1.0 : -1.0) * power.trace() / static_cast<double>(j);
  }
  return sum;
}

/// Materializes (1+A)(1+B) - 1.
inline CMatrix compose_perturbations(const CMatrix& a, const CMatrix& b) {
  detail::require_square(a, "compose_perturbations");
  if (a.rows() != b.rows() || b.rows() != b.cols())
    throw Error(ErrorKind::Shape, "compose_perturbations: mismatched sizes");
  return a + b + a * b;
}

/// gamma_p(A,B) modulo 2*pi*i: Log det_p(AB) - Log det_p(A) - Log det_p(B).
inline Complex gamma_p(const CMatrix& a, const CMatrix& b, int p) {
  const RegDet da = det_p(a, p);
  const RegDet db = det_p(b, p);
  const RegDet dab = det_p(compose_perturbations(a, b), p);
  if (std::abs(da.value) <= kSingularCutoff || std::abs(db.value) <= kSingularCutoff ||
      std::abs(dab.value) <= kSingularCutoff)
    throw Error(ErrorKind::SingularDeterminant, "gamma_p: a regularized determinant vanishes");
  return detail::reduce_mod_2pi_i(dab.log_value - da.log_value - db.log_value);
}

/// omega_p(A,B) = det_p((1+A)(1+B)) / det_p(1+A).
inline Complex omega_p(const CMatrix& a, const CMatrix& b, int p) {
  const RegDet da = det_p(a, p);
  if (std::abs(da.value) <= kSingularCutoff)
    throw Error(ErrorKind::SingularDeterminant, "omega_p: det_p(1+A) vanishes");
  return det_p(compose_perturbations(a, b), p).value / da.value;
}

}  // namespace fmlab
