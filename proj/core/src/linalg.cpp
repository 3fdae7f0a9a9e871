#include "dchain/linalg.hpp"

#include <algorithm>
#include <utility>

namespace dchain {

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

DenseMatrix DenseMatrix::operator*(const DenseMatrix& o) const {
  if (cols_ != o.rows_) throw ContractError("matrix product: shape mismatch");
  DenseMatrix r(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rational& a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j)
        if (o(k, j) != 0) r(i, j) += a * o(k, j);
    }
  return r;
}

DenseMatrix DenseMatrix::operator+(const DenseMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw ContractError("matrix sum: shape mismatch");
  DenseMatrix r = *this;
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
  return r;
}

DenseMatrix DenseMatrix::operator-(const DenseMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw ContractError("matrix difference: shape mismatch");
  DenseMatrix r = *this;
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
  return r;
}

DenseMatrix DenseMatrix::scaled(const Rational& s) const {
  DenseMatrix r = *this;
  for (auto& x : r.a_) x *= s;
  return r;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

Vector DenseMatrix::apply(const Vector& v) const {
  if (v.size() != cols_) throw ContractError("matrix-vector product: shape mismatch");
  Vector r(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if ((*this)(i, j) != 0 && v[j] != 0) r[i] += (*this)(i, j) * v[j];
  return r;
}

Vector DenseMatrix::apply_left(const Vector& v) const {
  if (v.size() != rows_) throw ContractError("vector-matrix product: shape mismatch");
  Vector r(cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < cols_; ++j)
      if ((*this)(i, j) != 0) r[j] += v[i] * (*this)(i, j);
  }
  return r;
}

std::size_t rank(const DenseMatrix& m) {
  const std::size_t R = m.rows(), C = m.cols();
  std::vector<std::vector<Integer>> a(R, std::vector<Integer>(C));
  for (std::size_t i = 0; i < R; ++i) {
    Integer l(1);
    for (std::size_t j = 0; j < C; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
    for (std::size_t j = 0; j < C; ++j) a[i][j] = m(i, j).get_num() * (l / m(i, j).get_den());
  }
  Integer prev(1);
  std::size_t r = 0;
  for (std::size_t c = 0; c < C && r < R; ++c) {
    std::size_t p = r;
    while (p < R && a[p][c] == 0) ++p;
    if (p == R) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = r + 1; i < R; ++i) {
      for (std::size_t j = c + 1; j < C; ++j) {
        a[i][j] = a[r][c] * a[i][j] - a[i][c] * a[r][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
  }
  return r;
}

std::vector<Vector> kernel(const DenseMatrix& m) {
  const std::size_t R = m.rows(), C = m.cols();
  DenseMatrix a = m;
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < C && r < R; ++c) {
    std::size_t p = r;
    while (p < R && a(p, c) == 0) ++p;
    if (p == R) continue;
    if (p != r)
      for (std::size_t j = 0; j < C; ++j) std::swap(a(p, j), a(r, j));
    const Rational inv = 1 / a(r, c);
    for (std::size_t j = c; j < C; ++j) a(r, j) *= inv;
    for (std::size_t i = 0; i < R; ++i) {
      if (i == r || a(i, c) == 0) continue;
      const Rational f = a(i, c);
      for (std::size_t j = c; j < C; ++j)
        if (a(r, j) != 0) a(i, j) -= f * a(r, j);
    }
    pivot_cols.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(C, false);
  for (auto c : pivot_cols) is_pivot[c] = true;
  std::vector<Vector> basis;
  for (std::size_t f = 0; f < C; ++f) {
    if (is_pivot[f]) continue;
    Vector v(C);
    v[f] = 1;
    for (std::size_t k = 0; k < pivot_cols.size(); ++k) v[pivot_cols[k]] = -a(k, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

namespace {

Polynomial poly_mul_linear(const Polynomial& p, const Rational& c) {
  // (x - c) p
  Polynomial r(p.size() + 1);
  for (std::size_t i = 0; i < p.size(); ++i) {
    r[i + 1] += p[i];
    r[i] -= c * p[i];
  }
  return r;
}

void poly_sub_scaled(Polynomial& a, const Polynomial& b, const Rational& s) {
  if (a.size() < b.size()) a.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= s * b[i];
}

}  // namespace

Polynomial characteristic_polynomial(const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw ContractError("characteristic polynomial of a non-square matrix");
  const std::size_t n = m.rows();
  DenseMatrix h = m;
  // Similarity reduction to upper Hessenberg form.
  for (std::size_t j = 0; j + 2 < n; ++j) {
    std::size_t p = j + 1;
    while (p < n && h(p, j) == 0) ++p;
    if (p == n) continue;
    if (p != j + 1) {
      for (std::size_t k = 0; k < n; ++k) std::swap(h(p, k), h(j + 1, k));
      for (std::size_t k = 0; k < n; ++k) std::swap(h(k, p), h(k, j + 1));
    }
    const Rational piv = h(j + 1, j);
    for (std::size_t i = j + 2; i < n; ++i) {
      if (h(i, j) == 0) continue;
      const Rational u = h(i, j) / piv;
      for (std::size_t k = 0; k < n; ++k)
        if (h(j + 1, k) != 0) h(i, k) -= u * h(j + 1, k);
      for (std::size_t k = 0; k < n; ++k)
        if (h(k, i) != 0) h(k, j + 1) += u * h(k, i);
    }
  }
  // p_m = (x - h_mm) p_{m-1} - sum_{i<m} h_{i,m} prod_{k=i+1..m} h_{k,k-1} p_{i-1}
  std::vector<Polynomial> p(n + 1);
  p[0] = Polynomial{Rational(1)};
  for (std::size_t mm = 1; mm <= n; ++mm) {
    p[mm] = poly_mul_linear(p[mm - 1], h(mm - 1, mm - 1));
    Rational prod(1);
    for (std::size_t i = mm - 1; i >= 1; --i) {
      prod *= h(i, i - 1);
      if (prod == 0) break;
      poly_sub_scaled(p[mm], p[i - 1], prod * h(i - 1, mm - 1));
    }
  }
  return p[n];
}

Rational evaluate(const Polynomial& p, const Rational& x) {
  Rational r(0);
  for (std::size_t i = p.size(); i-- > 0;) r = r * x + p[i];
  return r;
}

Polynomial deflate(const Polynomial& p, const Rational& root) {
  if (p.size() <= 1) return {};
  Polynomial q(p.size() - 1);
  Rational carry(0);
  for (std::size_t i = p.size() - 1; i-- > 0;) {
    carry = carry * root + p[i + 1];
    q[i] = carry;
  }
  return q;
}

unsigned root_multiplicity(const Polynomial& p, const Rational& root) {
  Polynomial cur = p;
  unsigned k = 0;
  while (cur.size() > 1 && evaluate(cur, root) == 0) {
    cur = deflate(cur, root);
    ++k;
  }
  return k;
}

}  // namespace dchain
