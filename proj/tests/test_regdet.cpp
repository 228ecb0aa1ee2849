#include <cmath>

#include "fmlab/random.hpp"
#include "fmlab/regdet.hpp"
#include "support.hpp"

using namespace fmlab;

namespace {

// Scalar oracle: det_p(1+a) = (1+a) exp(sum_{j<p} (-1)^j a^j / j).
Complex scalar_det_p(Complex a, int p) {
  Complex s = 0.0;
  for (int j = 1; j < p; ++j) s += ((j % 2 == 0) ? 1.0 : -1.0) * std::pow(a, j) / static_cast<double>(j);
  return (1.0 + a) * std::exp(s);
}

CMatrix scalar(Complex a) { return CMatrix::Constant(1, 1, a); }

}  // namespace

TEST(RegDet, RpExamples) {
  Rng rng(2);
  const CMatrix a = random_complex(rng, 4, 4);
  EXPECT_EQ(r_p(a, 1), a);
  EXPECT_NEAR(r_p(scalar(0.5), 2)(0, 0).real(), -1.0 + 1.5 * std::exp(-0.5), 1e-15);
  EXPECT_NEAR(r_p(scalar(0.5), 2)(0, 0).real(), -0.0902040, 5e-8);
  EXPECT_LE(max_abs(r_p(mat({{0.0, 1.0}, {0.0, 0.0}}), 2)), 1e-15);
  EXPECT_FMLAB_ERROR(ErrorKind::InvalidOrder, r_p(a, 0));
}

TEST(RegDet, DetPExamples) {
  for (int p = 1; p <= 5; ++p) EXPECT_EQ(det_p(CMatrix::Zero(3, 3), p).value, Complex(1.0, 0.0));
  const auto d = det_p(diag({0.5, 0.0}), 2);
  EXPECT_NEAR(d.value.real(), 1.5 * std::exp(-0.5), 1e-15);
  EXPECT_NEAR(d.value.real(), 0.9097960, 5e-8);
  EXPECT_EQ(d.order, 2);
  EXPECT_NEAR(std::abs(std::exp(d.log_value) - d.value), 0.0, 1e-15);
  EXPECT_FMLAB_ERROR(ErrorKind::InvalidOrder, det_p(diag({0.5}), 0));
  EXPECT_FMLAB_ERROR(ErrorKind::Shape, det_p(CMatrix::Zero(2, 3), 2));
}

TEST(RegDet, DiagonalMatchesScalarOracle) {
  Rng rng(4);
  for (int i = 0; i < 40; ++i) {
    const int n = rng.between(1, 6);
    const int p = rng.between(1, 5);
    CMatrix a = CMatrix::Zero(n, n);
    Complex expect = 1.0;
    for (int k = 0; k < n; ++k) {
      a(k, k) = 0.6 * rng.complex_normal();
      expect *= scalar_det_p(a(k, k), p);
    }
    // Conjugating by a unitary leaves every trace and det unchanged.
    const CMatrix u = random_unitary(rng, n);
    const CMatrix b = u * a * u.adjoint();
    EXPECT_LE(std::abs(det_p(b, p).value - expect), 1e-11 * std::max(1.0, std::abs(expect)));
  }
}

TEST(RegDet, ClassicalAndDualFormula) {
  Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    const int n = rng.between(1, 8);
    const CMatrix a = random_with_norm(rng, n, rng.uniform(0.0, 2.0));
    const Complex classical = determinant(identity(n) + a);
    EXPECT_LE(std::abs(det_p(a, 1).value - classical), 1e-12 * std::abs(classical));
    for (int p = 2; p <= 4; ++p) EXPECT_NO_THROW(det_p(a, p));
  }
}

TEST(LogDetSeries, Examples) {
  EXPECT_EQ(log_det_p_series(CMatrix::Zero(3, 3), 2, 30), Complex(0.0, 0.0));
  EXPECT_NEAR(log_det_p_series(scalar(0.1), 1, 30).real(), std::log(1.1), 1e-15);
  EXPECT_NEAR(log_det_p_series(scalar(0.1), 1, 30).real(), 0.0953102, 5e-8);
  EXPECT_NEAR(log_det_p_series(scalar(0.1), 2, 30).real(), std::log(1.1) - 0.1, 1e-15);
  EXPECT_NEAR(log_det_p_series(scalar(0.1), 2, 30).real(), -0.0046898, 5e-8);
  EXPECT_FMLAB_ERROR(ErrorKind::Divergence, log_det_p_series(scalar(1.0), 2, 30));
  EXPECT_FMLAB_ERROR(ErrorKind::Divergence, log_det_p_series(diag({0.2, -1.5}), 1, 30));
}

TEST(LogDetSeries, AgreesWithDetP) {
  Rng rng(9);
  for (int i = 0; i < 50; ++i) {
    const int n = rng.between(1, 8);
    const int p = rng.between(1, 4);
    const CMatrix a = random_with_spectral_radius(rng, n, 0.1);
    EXPECT_LE(std::abs(std::log(det_p(a, p).value) - log_det_p_series(a, p, 40)), 1e-10);
  }
}

TEST(GammaP, Examples) {
  Rng rng(10);
  const CMatrix b = random_with_norm(rng, 3, 0.5);
  EXPECT_LE(std::abs(gamma_p(CMatrix::Zero(3, 3), b, 2)), 1e-14);
  const CMatrix a = random_with_norm(rng, 3, 0.5);
  EXPECT_LE(std::abs(gamma_p(a, b, 1)), 1e-13);
  EXPECT_NEAR(gamma_p(scalar(0.1), scalar(0.1), 2).real(), -0.01, 1e-15);
  EXPECT_FMLAB_ERROR(ErrorKind::SingularDeterminant, gamma_p(scalar(-1.0), scalar(0.5), 2));
}

TEST(GammaP, SymmetricModTwoPiI) {
  Rng rng(12);
  for (int i = 0; i < 50; ++i) {
    const int n = rng.between(1, 6);
    const int p = rng.between(1, 4);
    const CMatrix a = random_with_norm(rng, n, 0.7), b = random_with_norm(rng, n, 0.7);
    const Complex d = gamma_p(a, b, p) - gamma_p(b, a, p);
    EXPECT_NEAR(d.real(), 0.0, 1e-9);
    EXPECT_NEAR(std::remainder(d.imag(), 2.0 * std::numbers::pi), 0.0, 1e-9);
    EXPECT_GT(gamma_p(a, b, p).imag(), -std::numbers::pi);
    EXPECT_LE(gamma_p(a, b, p).imag(), std::numbers::pi);
  }
}

TEST(OmegaP, Examples) {
  Rng rng(14);
  const CMatrix b = random_with_norm(rng, 3, 0.5);
  EXPECT_LE(std::abs(omega_p(CMatrix::Zero(3, 3), b, 2) - det_p(b, 2).value), 1e-14);
  const CMatrix a = random_with_norm(rng, 3, 0.5);
  EXPECT_LE(std::abs(omega_p(a, b, 1) - determinant(identity(3) + b)), 1e-12);
  EXPECT_NEAR(omega_p(scalar(0.1), scalar(0.1), 2).real(), 1.1 * std::exp(-0.11), 1e-15);
  EXPECT_NEAR(omega_p(scalar(0.1), scalar(0.1), 2).real(), 0.9854175, 5e-8);
  EXPECT_FMLAB_ERROR(ErrorKind::SingularDeterminant, omega_p(scalar(-1.0), scalar(0.5), 2));
}

TEST(OmegaP, CocycleIdentityAndGammaConsistency) {
  Rng rng(15);
  for (int i = 0; i < 50; ++i) {
    const int n = rng.between(1, 8);
    const int p = rng.between(1, 4);
    const CMatrix a = random_with_norm(rng, n, 0.5), b = random_with_norm(rng, n, 0.5),
                  c = random_with_norm(rng, n, 0.5);
    const Complex lhs = omega_p(a, compose_perturbations(b, c), p);
    const Complex rhs = omega_p(compose_perturbations(a, b), c, p) * omega_p(a, b, p);
    EXPECT_LE(std::abs(lhs - rhs), 1e-9 * std::abs(rhs));
    const Complex via_gamma = det_p(b, p).value * std::exp(gamma_p(a, b, p));
    EXPECT_LE(std::abs(omega_p(a, b, p) - via_gamma), 1e-9 * std::abs(via_gamma));
  }
}

TEST(ComposePerturbations, MaterializesProduct) {
  Rng rng(16);
  const CMatrix a = random_complex(rng, 4, 4), b = random_complex(rng, 4, 4);
  EXPECT_LE(max_abs(identity(4) + compose_perturbations(a, b) - (identity(4) + a) * (identity(4) + b)), 1e-13);
  EXPECT_FMLAB_ERROR(ErrorKind::Shape, compose_perturbations(a, identity(3)));
}
