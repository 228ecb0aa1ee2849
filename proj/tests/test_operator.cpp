#include <cmath>
#include <numbers>

#include "fmlab/operator.hpp"
#include "fmlab/random.hpp"
#include "support.hpp"

using namespace fmlab;

TEST(SchattenNorm, Examples) {
  EXPECT_NEAR(schatten_norm(identity(3), 2), std::sqrt(3.0), 1e-14);
  EXPECT_NEAR(schatten_norm(diag({3.0, 4.0}), 1), 7.0, 1e-13);
  EXPECT_NEAR(schatten_norm(mat({{0.0, 1.0}, {0.0, 0.0}}), 2), 1.0, 1e-14);
  EXPECT_NEAR(schatten_norm(diag({3.0, 4.0}), 2), 5.0, 1e-13);
}

TEST(SchattenNorm, RejectsOrderBelowOne) {
  EXPECT_FMLAB_ERROR(ErrorKind::InvalidOrder, schatten_norm(identity(2), 0.5));
  EXPECT_FMLAB_ERROR(ErrorKind::InvalidOrder, weak_quasi_norm(identity(2), 0.99));
}

TEST(SchattenNorm, FrobeniusConsistencyAndMonotonicity) {
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    const CMatrix a = random_complex(rng, rng.between(1, 7), rng.between(1, 7));
    const double s2 = schatten_norm(a, 2);
    EXPECT_NEAR(s2 * s2, a.squaredNorm(), 1e-12 * a.squaredNorm());
    double prev = schatten_norm(a, 1);
    for (double q : {1.5, 2.0, 3.0, 8.0, 64.0}) {
      const double cur = schatten_norm(a, q);
      EXPECT_LE(cur, prev * (1 + 1e-12));
      prev = cur;
    }
    EXPECT_GE(prev, operator_norm(a) * (1 - 1e-12));
  }
}

TEST(WeakQuasiNorm, Examples) {
  EXPECT_EQ(weak_quasi_norm(CMatrix::Zero(3, 3), 1.5), 0.0);
  EXPECT_NEAR(weak_quasi_norm(identity(4), 2), 2.0, 1e-14);
  EXPECT_NEAR(weak_quasi_norm(diag({1.0, 1.0 / std::sqrt(2.0)}), 2), 1.0, 1e-14);
}

TEST(Polarization, SignSquaresToIdentity) {
  for (int n = 0; n <= 5; ++n)
    for (int k = 0; k <= n; ++k) {
      const Polarization pol(n, k);
      EXPECT_EQ(pol.sign() * pol.sign(), identity(n));
      EXPECT_EQ(pol.minus_dim(), n - k);
    }
  EXPECT_FMLAB_ERROR(ErrorKind::Shape, Polarization(2, 3));
  EXPECT_FMLAB_ERROR(ErrorKind::Shape, Polarization(2, -1));
}

TEST(BlockDecompose, Examples) {
  const Polarization pol(5, 2);
  const auto eps = block_decompose(pol.sign(), pol);
  EXPECT_EQ(eps.a, identity(2));
  EXPECT_EQ(eps.d, -identity(3));
  EXPECT_EQ(max_abs(eps.b), 0.0);
  EXPECT_EQ(max_abs(eps.c), 0.0);

  const auto ones = block_decompose(CMatrix::Ones(2, 2), Polarization(2, 1));
  for (const CMatrix* blk : {&ones.a, &ones.b, &ones.c, &ones.d}) {
    ASSERT_EQ(blk->size(), 1);
    EXPECT_EQ((*blk)(0, 0), Complex(1.0, 0.0));
  }
}

TEST(BlockDecompose, RoundTripIsBitExact) {
  Rng rng(3);
  for (int i = 0; i < 30; ++i) {
    const int n = rng.between(1, 8);
    const Polarization pol(n, rng.between(0, n));
    const CMatrix a = random_complex(rng, n, n);
    EXPECT_EQ(reassemble(block_decompose(a, pol)), a);
  }
  EXPECT_FMLAB_ERROR(ErrorKind::Shape, block_decompose(identity(3), Polarization(4, 2)));
}

TEST(SignCommutator, Examples) {
  const Polarization pol(2, 1);
  EXPECT_EQ(sign_commutator(mat({{0.0, 1.0}, {0.0, 0.0}}), pol), mat({{0.0, 2.0}, {0.0, 0.0}}));
  EXPECT_EQ(max_abs(sign_commutator(diag({1.0, 2.0}), pol)), 0.0);

  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    const int n = rng.between(2, 7);
    const Polarization p(n, rng.between(1, n - 1));
    const CMatrix a = random_complex(rng, n, n);
    const auto blk = block_decompose(a, p);
    const CMatrix comm = sign_commutator(a, p);
    EXPECT_NEAR(schatten_norm(comm, 2), 2.0 * std::sqrt(blk.b.squaredNorm() + blk.c.squaredNorm()), 1e-12);
    BlockOperator diag_only = blk;
    diag_only.b.setZero();
    diag_only.c.setZero();
    EXPECT_LE(max_abs(sign_commutator(reassemble(diag_only), p)), 1e-12);
  }
}

TEST(MrDistance, MetricProperties) {
  Rng rng(8);
  for (int i = 0; i < 30; ++i) {
    const int n = rng.between(2, 6);
    const Polarization pol(n, rng.between(0, n));
    const double p = rng.uniform(1.0, 3.0);
    const CMatrix g = random_complex(rng, n, n), h = random_complex(rng, n, n), f = random_complex(rng, n, n);
    EXPECT_EQ(mr_distance(g, g, pol, p), 0.0);
    EXPECT_NEAR(mr_distance(g, h, pol, p), mr_distance(h, g, pol, p), 1e-12);
    EXPECT_LE(mr_distance(g, f, pol, p), mr_distance(g, h, pol, p) + mr_distance(h, f, pol, p) + 1e-12);
  }
}

TEST(MrNormReport, SumsFourComponents) {
  const Polarization pol(3, 1);
  const CMatrix g = mat({{2.0, 0.0, 3.0}, {0.0, 1.0, 0.0}, {4.0, 0.0, -5.0}});
  const auto r = mr_norm_report(g, pol, 1.0);
  EXPECT_NEAR(r.operator_norm_a, 2.0, 1e-14);
  EXPECT_NEAR(r.operator_norm_d, 5.0, 1e-13);
  EXPECT_NEAR(r.schatten_b, 3.0, 1e-13);
  EXPECT_NEAR(r.schatten_c, 4.0, 1e-13);
  EXPECT_EQ(r.order, 2.0);
  EXPECT_NEAR(r.mr_norm, 14.0, 1e-12);
}

TEST(HermitianEigensystem, Examples) {
  const auto e1 = hermitian_eigensystem(diag({2.0, -1.0}));
  EXPECT_NEAR(e1.values(0), -1.0, 1e-15);
  EXPECT_NEAR(e1.values(1), 2.0, 1e-15);
  const auto e2 = hermitian_eigensystem(mat({{0.0, 1.0}, {1.0, 0.0}}));
  EXPECT_NEAR(e2.values(0), -1.0, 1e-14);
  EXPECT_NEAR(e2.values(1), 1.0, 1e-14);
  EXPECT_FMLAB_ERROR(ErrorKind::Symmetry, hermitian_eigensystem(mat({{0.0, 1.0}, {0.0, 0.0}})));
}

TEST(HermitianEigensystem, ReconstructsRandomMatrices) {
  Rng rng(13);
  for (int i = 0; i < 20; ++i) {
    const CMatrix d = random_hermitian(rng, 8);
    const auto e = hermitian_eigensystem(d);
    const CMatrix lam = e.values.cast<Complex>().asDiagonal();
    EXPECT_LE(max_abs(e.vectors * lam * e.vectors.adjoint() - d), 1e-10);
    EXPECT_LE(max_abs(e.vectors.adjoint() * e.vectors - identity(8)), 1e-10);
    for (int k = 1; k < 8; ++k) EXPECT_LE(e.values(k - 1), e.values(k));
  }
}

TEST(Determinant, Examples) {
  EXPECT_EQ(determinant(identity(4)), Complex(1.0, 0.0));
  EXPECT_NEAR(std::abs(determinant(mat({{1.0, 2.0}, {3.0, 4.0}})) - Complex(-2.0, 0.0)), 0.0, 1e-14);
  EXPECT_FMLAB_ERROR(ErrorKind::Shape, determinant(CMatrix::Zero(2, 3)));
  Rng rng(17);
  for (int i = 0; i < 20; ++i) {
    const CMatrix a = random_complex(rng, 6, 6), b = random_complex(rng, 6, 6);
    const Complex lhs = determinant(a * b), rhs = determinant(a) * determinant(b);
    EXPECT_LE(std::abs(lhs - rhs), 1e-9 * std::abs(rhs));
  }
}

TEST(MatrixExponential, Examples) {
  EXPECT_EQ(matrix_exponential(CMatrix::Zero(3, 3)), identity(3));
  EXPECT_LE(max_abs(matrix_exponential(diag({std::log(2.0), std::log(2.0)})) - diag({2.0, 2.0})), 1e-14);
  // exp of the rotation generator.
  const double th = 2.5;
  const CMatrix rot = matrix_exponential(mat({{0.0, -th}, {th, 0.0}}));
  EXPECT_LE(max_abs(rot - mat({{std::cos(th), -std::sin(th)}, {std::sin(th), std::cos(th)}})), 1e-13);
  Rng rng(19);
  for (int i = 0; i < 30; ++i) {
    const int n = rng.between(1, 8);
    const CMatrix a = random_with_norm(rng, n, rng.uniform(0.0, 1.0));
    EXPECT_LE(max_abs(matrix_exponential(a) * matrix_exponential(-a) - identity(n)), 1e-9);
  }
}

TEST(Finiteness, DetectsNaN) {
  CMatrix a = identity(2);
  EXPECT_TRUE(all_finite(a));
  a(0, 1) = Complex(std::nan(""), 0.0);
  EXPECT_FALSE(all_finite(a));
}
