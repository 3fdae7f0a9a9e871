#pragma once

#include "dchain/rational.hpp"

#include <cstddef>
#include <vector>

namespace dchain {

using Vector = std::vector<Rational>;
// Coefficients from the constant term upwards.
using Polynomial = std::vector<Rational>;

class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  DenseMatrix operator*(const DenseMatrix& o) const;
  DenseMatrix operator+(const DenseMatrix& o) const;
  DenseMatrix operator-(const DenseMatrix& o) const;
  DenseMatrix scaled(const Rational& s) const;
  DenseMatrix transpose() const;
  Vector apply(const Vector& v) const;       // M v
  Vector apply_left(const Vector& v) const;  // v^T M

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> a_;
};

// Fraction-free (Bareiss) elimination on a row-scaled integer copy.
std::size_t rank(const DenseMatrix& m);
// Basis of the right kernel {v : M v = 0}, from the reduced row echelon form.
std::vector<Vector> kernel(const DenseMatrix& m);

// det(x I - M), monic, via reduction to Hessenberg form.
Polynomial characteristic_polynomial(const DenseMatrix& m);
// Exact multiplicity of a rational root.
unsigned root_multiplicity(const Polynomial& p, const Rational& root);
// p / (x - root), assuming root is a root.
Polynomial deflate(const Polynomial& p, const Rational& root);
Rational evaluate(const Polynomial& p, const Rational& x);

}  // namespace dchain
