#pragma once

// Exact fermionic Fock representation on m modes.
//
// Basis states are occupation bitmasks in ascending order, bit i <-> mode i.
// Creation on mode i flips bit i with sign (-1)^(number of occupied modes
// below i), which realizes the CAR with integer signs. The polarization
// H = H+ (modes 0..k-1) + H- (modes k..m-1) fixes the vacuum: H- is filled,
// H+ is empty, so psi*(u) kills it for u in H- and psi(v) for v in H+.

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "fmlab/operator.hpp"

namespace fmlab {

using FockVector = CVector;

inline constexpr int kMaxModes = 12;
inline constexpr double kSpectralMargin = 1e-8;
inline constexpr double kFockTolerance = 1e-10;
inline constexpr double kScalarnessTolerance = 1e-9;

class FockSpace {
 public:
  FockSpace(int modes, Polarization pol) : modes_(modes), pol_(pol) {
    if (modes < 1 || modes > kMaxModes)
      throw Error(ErrorKind::Size, "fock space: modes must be in [1, " + std::to_string(kMaxModes) + "], got " +
                                       std::to_string(modes));
    if (pol.dim() != modes)
      throw Error(ErrorKind::Shape, "fock space: polarization dimension " + std::to_string(pol.dim()) +
                                        " does not match " + std::to_string(modes) + " modes");
  }

  int modes() const noexcept { return modes_; }
  const Polarization& polarization() const noexcept { return pol_; }
  Eigen::Index dim() const noexcept { return Eigen::Index{1} << modes_; }

  /// Sign picked up by a creation/annihilation operator on `mode` acting on `state`.
  static double string_sign(std::uint32_t state, int mode) {
    const std::uint32_t below = state & ((std::uint32_t{1} << mode) - 1u);
    return (std::popcount(below) % 2 == 0) ? 1.0 : -1.0;
  }

  /// a*_i as a dense matrix.
  CMatrix creation(int mode) const {
    check_mode(mode);
    CMatrix m = CMatrix::Zero(dim(), dim());
    const std::uint32_t bit = std::uint32_t{1} << mode;
    for (std::uint32_t s = 0; s < static_cast<std::uint32_t>(dim()); ++s)
      if ((s & bit) == 0) m(s | bit, s) = string_sign(s, mode);
    return m;
  }

  CMatrix annihilation(int mode) const { return creation(mode).adjoint(); }

  /// psi*(v) = sum_i v_i a*_i (linear in v).
  CMatrix psi_star(const CVector& v) const {
    check_vector(v);
    CMatrix m = CMatrix::Zero(dim(), dim());
    for (int i = 0; i < modes_; ++i) {
      if (v(i) == Complex(0.0, 0.0)) continue;
      const std::uint32_t bit = std::uint32_t{1} << i;
      for (std::uint32_t s = 0; s < static_cast<std::uint32_t>(dim()); ++s)
        if ((s & bit) == 0) m(s | bit, s) += v(i) * string_sign(s, i);
    }
    return m;
  }

  /// psi(v) = psi*(v)^*, antilinear in v.
  CMatrix psi(const CVector& v) const { return psi_star(v).adjoint(); }

  /// psi*(v) applied to a state without materializing the operator.
  FockVector apply_psi_star(const CVector& v, const FockVector& x) const {
    check_vector(v);
    FockVector out = FockVector::Zero(dim());
    for (int i = 0; i < modes_; ++i) {
      if (v(i) == Complex(0.0, 0.0)) continue;
      const std::uint32_t bit = std::uint32_t{1} << i;
      for (std::uint32_t s = 0; s < static_cast<std::uint32_t>(dim()); ++s)
        if ((s & bit) == 0) out(s | bit) += v(i) * string_sign(s, i) * x(s);
    }
    return out;
  }

  FockVector basis_state(std::uint32_t occupation) const {
    FockVector e = FockVector::Zero(dim());
    e(occupation) = 1.0;
    return e;
  }

 private:
  void check_mode(int mode) const {
    if (mode < 0 || mode >= modes_) throw Error(ErrorKind::Shape, "fock space: mode index out of range");
  }
  void check_vector(const CVector& v) const {
    if (v.size() != modes_) throw Error(ErrorKind::Shape, "fock space: one-particle vector has wrong length");
  }

  int modes_;
  Polarization pol_;
};

struct FockOperator {
  int modes = 0;
  CMatrix matrix;
};

inline FockSpace build_car(int modes, const Polarization& pol) { return FockSpace(modes, pol); }

/// |0> with every H- mode occupied and every H+ mode empty.
inline FockVector vacuum(const FockSpace& space) {
  std::uint32_t occ = 0;
  for (int i = static_cast<int>(space.polarization().plus_dim()); i < space.modes(); ++i)
    occ |= std::uint32_t{1} << i;
  return space.basis_state(occ);
}

namespace detail {

inline void require_one_particle(const FockSpace& space, const CMatrix& x, const char* what) {
  if (x.rows() != space.modes() || x.cols() != space.modes())
    throw Error(ErrorKind::Shape, std::string(what) + ": one-particle operator must be " +
                                      std::to_string(space.modes()) + "x" + std::to_string(space.modes()));
}

// Sum_ij X_ij a*_i a_j without vacuum subtraction.
inline CMatrix bilinear(const FockSpace& space, const CMatrix& x) {
  const auto dim = space.dim();
  const int m = space.modes();
  CMatrix out = CMatrix::Zero(dim, dim);
  for (std::uint32_t s = 0; s < static_cast<std::uint32_t>(dim); ++s) {
    for (int j = 0; j < m; ++j) {
      const std::uint32_t bj = std::uint32_t{1} << j;
      if ((s & bj) == 0) continue;
      const std::uint32_t mid = s & ~bj;
      const double sj = FockSpace::string_sign(mid, j);
      for (int i = 0; i < m; ++i) {
        const Complex xij = x(i, j);
        if (xij == Complex(0.0, 0.0)) continue;
        const std::uint32_t bi = std::uint32_t{1} << i;
        if ((mid & bi) != 0) continue;
        out(mid | bi, s) += xij * sj * FockSpace::string_sign(mid, i);
      }
    }
  }
  return out;
}

}  // namespace detail

/// Largest violation of the two defining conditions of dG(X):
/// [dG(X), psi*(e_l)] = psi*(X e_l) for every mode l, and <0|dG(X)|0> = 0.
inline double d_gamma_defect(const FockSpace& space, const CMatrix& x, const CMatrix& dgx) {
  double worst = 0.0;
  const int m = space.modes();
  for (int l = 0; l < m; ++l) {
    const CMatrix cre = space.creation(l);
    const CMatrix lhs = dgx * cre - cre * dgx;
    const CMatrix rhs = space.psi_star(x.col(l));
    worst = std::max(worst, max_abs(lhs - rhs));
  }
  const FockVector vac = vacuum(space);
  worst = std::max(worst, std::abs(vac.dot(dgx * vac)));
  return worst;
}

/// Normal-ordered second quantization: sum X_ij a*_i a_j - tr(X on H-).
inline FockOperator d_gamma(const FockSpace& space, const CMatrix& x) {
  detail::require_one_particle(space, x, "d_gamma");
  const auto r = space.polarization().minus_dim();
  CMatrix op = detail::bilinear(space, x);
  const Complex sea = x.bottomRightCorner(r, r).trace();
  op.diagonal().array() -= sea;
  const double defect = d_gamma_defect(space, x, op);
  if (defect > kFockTolerance)
    throw Error(ErrorKind::InternalConsistency, "d_gamma: defining conditions violated by " + std::to_string(defect));
  return FockOperator{space.modes(), std::move(op)};
}

struct SchwingerTerm {
  Complex value;
  double residue = 0.0;  // max-norm of S - c 1
};

/// c(X,Y) from S = [dG(X), dG(Y)] - dG([X,Y]), which must be scalar.
inline SchwingerTerm schwinger_term(const FockSpace& space, const CMatrix& x, const CMatrix& y) {
  detail::require_one_particle(space, x, "schwinger_term");
  detail::require_one_particle(space, y, "schwinger_term");
  const CMatrix dx = d_gamma(space, x).matrix;
  const CMatrix dy = d_gamma(space, y).matrix;
  const CMatrix dxy = d_gamma(space, x * y - y * x).matrix;
  CMatrix s = dx * dy - dy * dx - dxy;
  const Complex c = s.trace() / static_cast<double>(space.dim());
  s.diagonal().array() -= c;
  const double residue = max_abs(s);
  if (residue > kScalarnessTolerance)
    throw Error(ErrorKind::Scalarness, "schwinger_term: commutator anomaly is not scalar, residue " +
                                           std::to_string(residue));
  return SchwingerTerm{c, residue};
}

/// A Hermitian one-particle Hamiltonian D together with its spectral data.
class SpectralBackground {
 public:
  explicit SpectralBackground(CMatrix d) : d_(std::move(d)), eig_(hermitian_eigensystem(d_)) {}

  const CMatrix& hamiltonian() const noexcept { return d_; }
  const Eigensystem& spectrum() const noexcept { return eig_; }
  Eigen::Index size() const noexcept { return d_.rows(); }

  bool off_spectrum(double level) const {
    for (Eigen::Index i = 0; i < eig_.values.size(); ++i)
      if (std::abs(eig_.values(i) - level) <= kSpectralMargin) return false;
    return true;
  }

 private:
  CMatrix d_;
  Eigensystem eig_;
};

/// The spectral polarization sign(D) in an eigenbasis with H+ (positive
/// energies) first: returns the change of basis V (columns) and k = dim H+.
struct SpectralPolarization {
  CMatrix basis;
  Polarization pol;
};

inline SpectralPolarization spectral_polarization(const SpectralBackground& bg) {
  if (!bg.off_spectrum(0.0)) throw Error(ErrorKind::Gap, "background has an eigenvalue at zero");
  const auto& eig = bg.spectrum();
  const auto n = bg.size();
  CMatrix basis(n, n);
  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (eig.values(i) > 0.0) basis.col(col++) = eig.vectors.col(i);
  const Eigen::Index k = col;
  for (Eigen::Index i = 0; i < n; ++i)
    if (eig.values(i) < 0.0) basis.col(col++) = eig.vectors.col(i);
  return SpectralPolarization{std::move(basis), Polarization(n, k)};
}

/// Samples c(X, Y; A) over a finite family of backgrounds, each quantized in
/// its own spectral polarization.
inline std::vector<Complex> schwinger_over_backgrounds(const CMatrix& x, const CMatrix& y,
                                                       const std::vector<SpectralBackground>& backgrounds) {
  for (const auto& bg : backgrounds)
    if (!bg.off_spectrum(0.0)) throw Error(ErrorKind::Gap, "schwinger_over_backgrounds: zero-gap background");
  std::vector<Complex> out;
  out.reserve(backgrounds.size());
  for (const auto& bg : backgrounds) {
    const SpectralPolarization sp = spectral_polarization(bg);
    const FockSpace space(static_cast<int>(bg.size()), sp.pol);
    const CMatrix xr = sp.basis.adjoint() * x * sp.basis;
    const CMatrix yr = sp.basis.adjoint() * y * sp.basis;
    out.push_back(schwinger_term(space, xr, yr).value);
  }
  return out;
}

/// Gamma = exp(dG(X)) for anti-Hermitian X; implements psi*(v) -> psi*(e^X v).
inline FockOperator bogoliubov_implement(const FockSpace& space, const CMatrix& x) {
  detail::require_one_particle(space, x, "bogoliubov_implement");
  const double defect = max_abs(x + x.adjoint());
  if (defect > kHermitianTolerance)
    throw Error(ErrorKind::Symmetry, "bogoliubov_implement: X is not anti-Hermitian (" + std::to_string(defect) + ")");
  return FockOperator{space.modes(), matrix_exponential(d_gamma(space, x).matrix)};
}

// ---------------------------------------------------------------------------
// Local vacuum lines over the spectral cover U_lambda = {lambda not in spec D}.

struct VacuumLine {
  double lo = 0.0;
  double hi = 0.0;
  CMatrix frame;  // orthonormal eigenvectors with eigenvalue in (lo, hi), ascending
  Complex phase{1.0, 0.0};

  Eigen::Index dim() const noexcept { return frame.cols(); }
};

inline VacuumLine vacuum_line(const SpectralBackground& bg, double lo, double hi) {
  if (!(lo < hi)) throw Error(ErrorKind::Domain, "vacuum_line: requires lo < hi");
  if (!bg.off_spectrum(lo) || !bg.off_spectrum(hi))
    throw Error(ErrorKind::CoverMembership, "vacuum_line: window edge lies on the spectrum");
  const auto& eig = bg.spectrum();
  std::vector<Eigen::Index> inside;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i)
    if (eig.values(i) > lo && eig.values(i) < hi) inside.push_back(i);
  VacuumLine line;
  line.lo = lo;
  line.hi = hi;
  line.frame = CMatrix(bg.size(), static_cast<Eigen::Index>(inside.size()));
  for (std::size_t c = 0; c < inside.size(); ++c)
    line.frame.col(static_cast<Eigen::Index>(c)) = eig.vectors.col(inside[c]);
  return line;
}

/// Rotating the eigenframe by R multiplies the top exterior power by det R.
inline VacuumLine line_transition(const VacuumLine& line, const CMatrix& rotation) {
  if (rotation.rows() != line.dim() || rotation.cols() != line.dim())
    throw Error(ErrorKind::Shape, "line_transition: rotation must match the window dimension");
  const double defect = max_abs(rotation.adjoint() * rotation - identity(line.dim()));
  if (defect > kHermitianTolerance)
    throw Error(ErrorKind::Symmetry, "line_transition: rotation is not unitary (" + std::to_string(defect) + ")");
  VacuumLine out = line;
  out.frame = line.frame * rotation;
  out.phase = line.phase * determinant(rotation);
  return out;
}

/// Witness of Det(l1,l2) (x) Det(l2,l3) = Det(l1,l3): the determinant of the
/// change of basis from the concatenated frames to the (l1,l3) frame, with
/// the line phases folded in.
inline Complex gerbe_triple_check(const SpectralBackground& bg, double l1, double l2, double l3) {
  if (!(l1 < l2 && l2 < l3)) throw Error(ErrorKind::Domain, "gerbe_triple_check: requires l1 < l2 < l3");
  const VacuumLine a = vacuum_line(bg, l1, l2);
  const VacuumLine b = vacuum_line(bg, l2, l3);
  const VacuumLine ab = vacuum_line(bg, l1, l3);
  if (a.dim() + b.dim() != ab.dim())
    throw Error(ErrorKind::InternalConsistency, "gerbe_triple_check: window dimensions are not additive");
  CMatrix joined(bg.size(), ab.dim());
  joined << a.frame, b.frame;
  const Complex witness = a.phase * b.phase * determinant(ab.frame.adjoint() * joined) / ab.phase;
  if (std::abs(std::abs(witness) - 1.0) > kFockTolerance)
    throw Error(ErrorKind::InternalConsistency, "gerbe_triple_check: witness modulus " +
                                                    std::to_string(std::abs(witness)) + " != 1");
  return witness;
}

/// Dirac sea at level lambda: psi*(u_1) ... psi*(u_s) |empty> over the
/// eigenvectors u_1, ..., u_s of D below lambda, in ascending order.
inline FockVector vacuum_at_level(const FockSpace& space, const SpectralBackground& bg, double level) {
  if (bg.size() != space.modes())
    throw Error(ErrorKind::Shape, "vacuum_at_level: background size does not match the mode count");
  if (!bg.off_spectrum(level)) throw Error(ErrorKind::CoverMembership, "vacuum_at_level: level lies on the spectrum");
  const auto& eig = bg.spectrum();
  FockVector state = space.basis_state(0);
  for (Eigen::Index i = eig.values.size() - 1; i >= 0; --i)
    if (eig.values(i) < level) state = space.apply_psi_star(eig.vectors.col(i), state);
  return state;
}

}  // namespace fmlab
