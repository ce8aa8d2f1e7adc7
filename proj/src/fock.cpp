// Copyright 2026 The Cohstate Authors
// SPDX-License-Identifier: Apache-2.0

#include "cohstate/fock.hpp"

#include <cmath>

namespace cohstate::fock {

double FockVector::norm_squared() const {
  double s = 0.0;
  for (const auto& c : coeffs) s += std::norm(c);
  return s;
}

FockVector basis_vector(int n, int dim) {
  if (n < 0 || n >= dim) throw std::out_of_range("basis_vector: index outside space");
  FockVector v;
  v.coeffs.assign(dim, complexd(0.0, 0.0));
  v.coeffs[n] = 1.0;
  return v;
}

complexd inner(const FockVector& x, const FockVector& y) {
  if (x.dim() != y.dim()) throw std::invalid_argument("inner: dimension mismatch");
  complexd s(0.0, 0.0);
  for (int i = 0; i < x.dim(); ++i) s += std::conj(x.coeffs[i]) * y.coeffs[i];
  return s;
}

FockOperator FockOperator::identity(int dim) {
  FockOperator m(dim);
  for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
  m.set_hermitian_flag(true);
  return m;
}

double FockOperator::hermiticity_defect() const {
  double d = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = i; j < dim_; ++j)
      d = std::max(d, std::abs(at(i, j) - std::conj(at(j, i))));
  return d;
}

FockOperator FockOperator::adjoint() const {
  FockOperator m(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) m.at(j, i) = std::conj(at(i, j));
  m.set_hermitian_flag(hermitian_);
  return m;
}

FockOperator FockOperator::operator*(const FockOperator& rhs) const {
  if (dim_ != rhs.dim_) throw std::invalid_argument("FockOperator: dimension mismatch");
  FockOperator m(dim_);
  for (int i = 0; i < dim_; ++i) {
    for (int k = 0; k < dim_; ++k) {
      const complexd aik = at(i, k);
      if (aik == complexd(0.0, 0.0)) continue;
      const complexd* rrow = &rhs.a_[static_cast<size_t>(k) * dim_];
      complexd* orow = &m.a_[static_cast<size_t>(i) * dim_];
      for (int j = 0; j < dim_; ++j) orow[j] += aik * rrow[j];
    }
  }
  return m;
}

FockOperator FockOperator::operator+(const FockOperator& rhs) const {
  if (dim_ != rhs.dim_) throw std::invalid_argument("FockOperator: dimension mismatch");
  FockOperator m(dim_);
  for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] + rhs.a_[i];
  m.set_hermitian_flag(hermitian_ && rhs.hermitian_);
  return m;
}

FockOperator FockOperator::operator-(const FockOperator& rhs) const {
  if (dim_ != rhs.dim_) throw std::invalid_argument("FockOperator: dimension mismatch");
  FockOperator m(dim_);
  for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] - rhs.a_[i];
  m.set_hermitian_flag(hermitian_ && rhs.hermitian_);
  return m;
}

FockOperator FockOperator::scaled(complexd s) const {
  FockOperator m(dim_);
  for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = s * a_[i];
  return m;
}

FockVector FockOperator::apply(const FockVector& v) const {
  if (v.dim() != dim_) throw std::invalid_argument("FockOperator::apply: dimension mismatch");
  FockVector out;
  out.coeffs.assign(dim_, complexd(0.0, 0.0));
  out.tail_mass = v.tail_mass;
  for (int i = 0; i < dim_; ++i) {
    complexd s(0.0, 0.0);
    const complexd* row = &a_[static_cast<size_t>(i) * dim_];
    for (int j = 0; j < dim_; ++j) s += row[j] * v.coeffs[j];
    out.coeffs[i] = s;
  }
  return out;
}

double FockOperator::one_norm() const {
  double best = 0.0;
  for (int j = 0; j < dim_; ++j) {
    double col = 0.0;
    for (int i = 0; i < dim_; ++i) col += std::abs(at(i, j));
    best = std::max(best, col);
  }
  return best;
}

double FockOperator::max_abs() const {
  double best = 0.0;
  for (const auto& c : a_) best = std::max(best, std::abs(c));
  return best;
}

std::pair<FockOperator, FockOperator> ladder_matrices(const FockCutoff& cutoff) {
  const int d = cutoff.dim();
  FockOperator a(d);
  for (int n = 1; n < d; ++n) a.at(n - 1, n) = std::sqrt(static_cast<double>(n));
  FockOperator adag = a.adjoint();
  return {std::move(a), std::move(adag)};
}

FockOperator number_operator(const FockCutoff& cutoff) {
  const int d = cutoff.dim();
  FockOperator n_op(d);
  for (int n = 0; n < d; ++n) n_op.at(n, n) = static_cast<double>(n);
  n_op.set_hermitian_flag(true);
  return n_op;
}

FockOperator matrix_exponential(const FockOperator& op) {
  const int d = op.dim();
  const double norm = op.one_norm();
  if (norm > 700.0) {
    // exp may exceed double range for a general operator of this size; the
    // skew-Hermitian generators of displacement operators stay unitary and
    // are safe at any norm
    double skew_defect = 0.0;
    for (int i = 0; i < d; ++i) {
      for (int j = i; j < d; ++j) {
        skew_defect = std::max(skew_defect, std::abs(op.at(i, j) + std::conj(op.at(j, i))));
      }
    }
    if (skew_defect > 1e-10 * norm || norm > 1e5) {
      throw std::overflow_error("matrix_exponential: operator norm too large");
    }
  }

  int squarings = 0;
  double scaled_norm = norm;
  while (scaled_norm > 0.25) {
    scaled_norm *= 0.5;
    ++squarings;
  }
  FockOperator b = op.scaled(std::ldexp(1.0, -squarings));

  // Taylor kernel: with ||B||_1 <= 1/4 the truncated series reaches machine
  // precision after ~16 terms; we stop on a term-norm criterion.
  FockOperator result = FockOperator::identity(d);
  FockOperator term = FockOperator::identity(d);
  for (int k = 1; k <= 40; ++k) {
    term = (term * b).scaled(1.0 / k);
    result = result + term;
    if (term.one_norm() <= 1e-18 * result.one_norm()) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

}  // namespace cohstate::fock
