#include "cremona3/linalg.hpp"

#include <stdexcept>

namespace cr3 {

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Mat Mat::from_rows(const std::vector<Vec>& rows) {
  if (rows.empty()) return Mat();
  Mat m((int)rows.size(), (int)rows[0].size());
  for (int i = 0; i < m.r; ++i)
    for (int j = 0; j < m.c; ++j) m(i, j) = rows[i].at(j);
  return m;
}

Vec Mat::row(int i) const { return Vec(a.begin() + (size_t)i * c, a.begin() + (size_t)(i + 1) * c); }

Vec Mat::col(int j) const {
  Vec v(r);
  for (int i = 0; i < r; ++i) v[i] = (*this)(i, j);
  return v;
}

Mat Mat::transpose() const {
  Mat t(c, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Mat operator*(const Mat& x, const Mat& y) {
  if (x.c != y.r) throw std::invalid_argument("Mat: shape mismatch");
  Mat z(x.r, y.c);
  for (int i = 0; i < x.r; ++i)
    for (int k = 0; k < x.c; ++k) {
      if (x(i, k).is_zero()) continue;
      for (int j = 0; j < y.c; ++j) z(i, j) += x(i, k) * y(k, j);
    }
  return z;
}

Vec Mat::apply(const Vec& v) const {
  Vec w(r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j)
      if (!(*this)(i, j).is_zero()) w[i] += (*this)(i, j) * v[j];
  return w;
}

std::vector<int> rref(Mat& m) {
  std::vector<int> piv;
  int row = 0;
  for (int col = 0; col < m.c && row < m.r; ++col) {
    int p = -1;
    for (int i = row; i < m.r; ++i)
      if (!m(i, col).is_zero()) {
        p = i;
        break;
      }
    if (p < 0) continue;
    if (p != row)
      for (int j = 0; j < m.c; ++j) std::swap(m(p, j), m(row, j));
    Rat iv = m(row, col).inv();
    for (int j = col; j < m.c; ++j) m(row, j) *= iv;
    for (int i = 0; i < m.r; ++i) {
      if (i == row || m(i, col).is_zero()) continue;
      Rat f = m(i, col);
      for (int j = col; j < m.c; ++j)
        if (!m(row, j).is_zero()) m(i, j) -= f * m(row, j);
    }
    piv.push_back(col);
    ++row;
  }
  return piv;
}

int rank(Mat m) { return (int)rref(m).size(); }

std::vector<Vec> nullspace(const Mat& m0) {
  Mat m = m0;
  auto piv = rref(m);
  std::vector<bool> is_piv(m.c, false);
  for (int p : piv) is_piv[p] = true;
  std::vector<Vec> basis;
  for (int f = 0; f < m.c; ++f) {
    if (is_piv[f]) continue;
    Vec v(m.c);
    v[f] = 1;
    for (size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -m((int)i, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<Vec> solve(const Mat& A, const Vec& b) {
  Mat m(A.r, A.c + 1);
  for (int i = 0; i < A.r; ++i) {
    for (int j = 0; j < A.c; ++j) m(i, j) = A(i, j);
    m(i, A.c) = b.at(i);
  }
  auto piv = rref(m);
  if (!piv.empty() && piv.back() == A.c) return std::nullopt;
  Vec x(A.c);
  for (size_t i = 0; i < piv.size(); ++i) x[piv[i]] = m((int)i, A.c);
  return x;
}

std::optional<Mat> inverse(const Mat& A) {
  if (A.r != A.c) return std::nullopt;
  int n = A.r;
  Mat m(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = A(i, j);
    m(i, n + i) = 1;
  }
  auto piv = rref(m);
  if ((int)piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
  Mat inv(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv(i, j) = m(i, n + j);
  return inv;
}

Rat det(Mat m) {
  if (m.r != m.c) throw std::invalid_argument("det: not square");
  Rat d = 1;
  for (int col = 0; col < m.c; ++col) {
    int p = -1;
    for (int i = col; i < m.r; ++i)
      if (!m(i, col).is_zero()) {
        p = i;
        break;
      }
    if (p < 0) return Rat(0);
    if (p != col) {
      for (int j = 0; j < m.c; ++j) std::swap(m(p, j), m(col, j));
      d = -d;
    }
    d *= m(col, col);
    Rat iv = m(col, col).inv();
    for (int i = col + 1; i < m.r; ++i) {
      if (m(i, col).is_zero()) continue;
      Rat f = m(i, col) * iv;
      for (int j = col; j < m.c; ++j) m(i, j) -= f * m(col, j);
    }
  }
  return d;
}

Rat dot(const Vec& x, const Vec& y) {
  Rat s = 0;
  for (size_t i = 0; i < x.size(); ++i)
    if (!x[i].is_zero() && !y[i].is_zero()) s += x[i] * y[i];
  return s;
}

Vec primitive(const Vec& v) {
  mpz_class g = 0, l = 1;
  for (const auto& x : v) {
    mpz_class n = x.num(), d = x.den();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
  }
  if (g == 0) return v;
  Rat s(mpq_class(l, g));
  for (const auto& x : v)
    if (!x.is_zero()) {
      if (x.sign() < 0) s = -s;
      break;
    }
  Vec w(v.size());
  for (size_t i = 0; i < v.size(); ++i) w[i] = v[i] * s;
  return w;
}

}  // namespace cr3
