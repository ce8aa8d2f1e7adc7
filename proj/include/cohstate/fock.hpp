// Copyright 2026 The Cohstate Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef COHSTATE_FOCK_HPP
#define COHSTATE_FOCK_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

// Truncated Fock-space linear algebra: the number basis {|0>, ..., |n_max>},
// ladder and number operators, and a dense matrix exponential for building
// displacement operators.  Values are immutable after construction and all
// operations allocate fresh results, so concurrent use is safe.

namespace cohstate::fock {

using complexd = std::complex<double>;

// Raised when a coefficient tail bound cannot be brought under tail_tol.
class truncation_error : public std::runtime_error {
 public:
  explicit truncation_error(const std::string& what) : std::runtime_error(what) {}
};

struct FockCutoff {
  int n_max = 63;           // highest retained number state
  double tail_tol = 1e-9;   // admissible discarded probability mass

  int dim() const { return n_max + 1; }
};

// Truncated expansion over the number basis together with a certified bound
// on the discarded probability mass sum_{n > n_max} |phi_n|^2.
struct FockVector {
  std::vector<complexd> coeffs;
  double tail_mass = 0.0;

  int dim() const { return static_cast<int>(coeffs.size()); }
  double norm_squared() const;
  double norm() const { return std::sqrt(norm_squared()); }
};

FockVector basis_vector(int n, int dim);
complexd inner(const FockVector& x, const FockVector& y);  // <x|y>

// Dense complex matrix on the truncated number basis.
class FockOperator {
 public:
  FockOperator() = default;
  explicit FockOperator(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim) {}

  static FockOperator identity(int dim);

  int dim() const { return dim_; }
  complexd& at(int row, int col) { return a_[static_cast<size_t>(row) * dim_ + col]; }
  const complexd& at(int row, int col) const {
    return a_[static_cast<size_t>(row) * dim_ + col];
  }

  bool hermitian_flag() const { return hermitian_; }
  void set_hermitian_flag(bool h) { hermitian_ = h; }
  // max elementwise |A - A^dag|
  double hermiticity_defect() const;

  FockOperator adjoint() const;
  FockOperator operator*(const FockOperator& rhs) const;
  FockOperator operator+(const FockOperator& rhs) const;
  FockOperator operator-(const FockOperator& rhs) const;
  FockOperator scaled(complexd s) const;
  FockVector apply(const FockVector& v) const;

  double one_norm() const;      // max column sum of |a_ij|
  double max_abs() const;
  const std::vector<complexd>& data() const { return a_; }

 private:
  int dim_ = 0;
  std::vector<complexd> a_;
  bool hermitian_ = false;
};

// (a, a^dag) with a|n> = sqrt(n)|n-1>, a^dag|n> = sqrt(n+1)|n+1>.  On the
// truncated space [a, a^dag] = I holds exactly on rows 0..n_max-1; the
// truncation corner row cannot satisfy the ccr in finite dimension.
std::pair<FockOperator, FockOperator> ladder_matrices(const FockCutoff& cutoff);

// diag(0, 1, ..., n_max) = a^dag a up to the corner row.
FockOperator number_operator(const FockCutoff& cutoff);

// exp(op) by scaling and squaring with a Taylor kernel at ||B||_1 <= 1/4.
// Backward error <= 1e-12 in operator norm for ||op||_1 <= 50; throws
// std::overflow_error once ||op||_1 is large enough that exp(op) may not be
// representable in double precision.
FockOperator matrix_exponential(const FockOperator& op);

}  // namespace cohstate::fock

#endif  // COHSTATE_FOCK_HPP
