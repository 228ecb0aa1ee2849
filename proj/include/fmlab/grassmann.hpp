#pragma once

// Big-cell model of the Schatten Grassmannian: frames w (n x k, columns span
// the plane W), the GL^p right action and the determinant line Det_p.

#include <string>

#include "fmlab/operator.hpp"
#include "fmlab/regdet.hpp"

namespace fmlab {

inline constexpr double kRankTolerance = 1e-10;

class Frame {
 public:
  Frame(Polarization ambient, CMatrix matrix) : ambient_(ambient), matrix_(std::move(matrix)) {
    if (matrix_.rows() != ambient_.dim() || matrix_.cols() != ambient_.plus_dim())
      throw Error(ErrorKind::Shape, "frame: expected " + std::to_string(ambient_.dim()) + "x" +
                                        std::to_string(ambient_.plus_dim()) + ", got " +
                                        detail::shape_of(matrix_));
    if (!all_finite(matrix_)) throw Error(ErrorKind::Domain, "frame: non-finite entries");
    const RVector s = singular_values(matrix_);
    if (s.size() > 0 && s(s.size() - 1) <= kRankTolerance)
      throw Error(ErrorKind::Domain, "frame: columns are not linearly independent");
  }

  /// First k standard basis vectors, i.e. the plane H+ itself.
  static Frame standard(const Polarization& pol) {
    return Frame(pol, CMatrix::Identity(pol.dim(), pol.plus_dim()));
  }

  const Polarization& ambient() const noexcept { return ambient_; }
  const CMatrix& matrix() const noexcept { return matrix_; }

 private:
  Polarization ambient_;
  CMatrix matrix_;
};

struct DetLineElement {
  Frame frame;
  Complex lambda;
};

/// Matrix of pr_{H+} restricted to the frame: the top k x k block.
inline CMatrix w_plus(const Frame& w) {
  const auto k = w.ambient().plus_dim();
  return w.matrix().topRows(k);
}

/// ||w+ - 1||_p; always finite in finite dimension.
inline double admissibility_report(const Frame& w, int p) {
  detail::require_integer_order(p, "admissibility_report");
  const CMatrix wp = w_plus(w);
  return schatten_norm(wp - identity(wp.rows()), static_cast<double>(p));
}

/// Fredholm index of pr_{H+}: W -> H+ in finite dimension, k - rank(w+).
inline Eigen::Index plus_projection_index(const Frame& w) {
  const RVector s = singular_values(w_plus(w));
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > kRankTolerance) ++rank;
  return w.ambient().plus_dim() - rank;
}

/// Orthogonal projector onto the column span, from a thin QR factorization.
inline CMatrix plane_projector(const Frame& w) {
  Eigen::HouseholderQR<CMatrix> qr(w.matrix());
  const CMatrix q = qr.householderQ() * CMatrix::Identity(w.matrix().rows(), w.matrix().cols());
  return q * q.adjoint();
}

inline bool same_plane(const Frame& u, const Frame& w, double tol = kRankTolerance) {
  return max_abs(plane_projector(u) - plane_projector(w)) <= tol;
}

namespace detail {

inline void require_invertible_transform(const CMatrix& t, Eigen::Index k, const char* what) {
  if (t.rows() != k || t.cols() != k)
    throw Error(ErrorKind::Shape, std::string(what) + ": transform must be " + std::to_string(k) + "x" +
                                      std::to_string(k));
  if (std::abs(determinant(t)) <= kSingularCutoff)
    throw Error(ErrorKind::SingularTransform, std::string(what) + ": transform is singular");
}

inline void require_big_cell(const CMatrix& wp, const char* what) {
  if (std::abs(determinant(wp)) <= kSingularCutoff)
    throw Error(ErrorKind::ChartSingularity, std::string(what) + ": w+ is singular, frame leaves the big cell");
}

// omega_p of two operators (not perturbations) in GL(H+).
inline Complex omega_ops(const CMatrix& x, const CMatrix& y, int p) {
  const CMatrix one = CMatrix::Identity(x.rows(), x.cols());
  return omega_p(x - one, y - one, p);
}

}  // namespace detail

inline Frame frame_act(const Frame& w, const CMatrix& t) {
  detail::require_invertible_transform(t, w.ambient().plus_dim(), "frame_act");
  return Frame(w.ambient(), w.matrix() * t);
}

/// (w, lambda) . t = (wt, lambda / omega_p(w+, t)).
inline DetLineElement detline_act(const DetLineElement& e, const CMatrix& t, int p) {
  detail::require_invertible_transform(t, e.frame.ambient().plus_dim(), "detline_act");
  const CMatrix wp = w_plus(e.frame);
  detail::require_big_cell(wp, "detline_act");
  const Complex omega = detail::omega_ops(wp, t, p);
  return DetLineElement{frame_act(e.frame, t), e.lambda / omega};
}

/// psi(w) = det_p(w+); transforms as psi(wt) = psi(w) omega_p(w+, t).
inline Complex canonical_section(const Frame& w, int p) {
  const CMatrix wp = w_plus(w);
  detail::require_big_cell(wp, "canonical_section");
  return det_p(wp - identity(wp.rows()), p).value;
}

/// Unsigned ratio omega_p(w+, t) / omega_p((g w q^-1)+, q t q^-1).
inline Complex alpha_ratio(const CMatrix& g, const CMatrix& q, const Frame& w, const CMatrix& t, int p) {
  const Polarization& pol = w.ambient();
  const auto k = pol.plus_dim();
  require_polarized(g, pol, "alpha_ratio");
  if (std::abs(determinant(g)) <= kSingularCutoff)
    throw Error(ErrorKind::SingularTransform, "alpha_ratio: g is singular");
  detail::require_invertible_transform(q, k, "alpha_ratio");
  detail::require_invertible_transform(t, k, "alpha_ratio");
  const CMatrix wp = w_plus(w);
  detail::require_big_cell(wp, "alpha_ratio");
  const CMatrix q_inv = q.inverse();
  const CMatrix moved_plus = (g * w.matrix() * q_inv).topRows(k);
  detail::require_big_cell(moved_plus, "alpha_ratio");
  return detail::omega_ops(wp, t, p) / detail::omega_ops(moved_plus, q * t * q_inv, p);
}

}  // namespace fmlab
