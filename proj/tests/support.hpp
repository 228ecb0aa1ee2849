#pragma once

#include <gtest/gtest.h>

#include "fmlab/error.hpp"
#include "fmlab/operator.hpp"

#define EXPECT_FMLAB_ERROR(expected_kind, stmt)                                     \
  do {                                                                              \
    try {                                                                           \
      stmt;                                                                         \
      ADD_FAILURE() << "expected " << fmlab::to_string(expected_kind) << " error";  \
    } catch (const fmlab::Error& e_) {                                              \
      EXPECT_EQ(e_.kind(), expected_kind) << e_.what();                             \
    }                                                                               \
  } while (0)

inline fmlab::CMatrix mat(std::initializer_list<std::initializer_list<fmlab::Complex>> rows) {
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = static_cast<Eigen::Index>(rows.begin()->size());
  fmlab::CMatrix m(r, c);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (const auto& v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline fmlab::CMatrix diag(std::initializer_list<fmlab::Complex> d) {
  fmlab::CMatrix m = fmlab::CMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (const auto& v : d) {
    m(i, i) = v;
    ++i;
  }
  return m;
}
