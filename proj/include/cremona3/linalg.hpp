#pragma once
#include <optional>
#include <vector>

#include "cremona3/rat.hpp"

namespace cr3 {

using Vec = std::vector<Rat>;

struct Mat {
  int r = 0, c = 0;
  std::vector<Rat> a;
  Mat() = default;
  Mat(int rows, int cols) : r(rows), c(cols), a((size_t)rows * cols) {}
  Rat& operator()(int i, int j) { return a[(size_t)i * c + j]; }
  const Rat& operator()(int i, int j) const { return a[(size_t)i * c + j]; }
  static Mat identity(int n);
  static Mat from_rows(const std::vector<Vec>& rows);
  Vec row(int i) const;
  Vec col(int j) const;
  Mat transpose() const;
  friend Mat operator*(const Mat& x, const Mat& y);
  Vec apply(const Vec& v) const;
  friend bool operator==(const Mat& x, const Mat& y) { return x.r == y.r && x.c == y.c && x.a == y.a; }
};

// reduced row echelon form in place; returns pivot columns
std::vector<int> rref(Mat& m);
int rank(Mat m);
std::vector<Vec> nullspace(const Mat& m);  // basis of {v : m v = 0}
std::optional<Vec> solve(const Mat& m, const Vec& b);  // any solution
std::optional<Mat> inverse(const Mat& m);
Rat det(Mat m);

Rat dot(const Vec& x, const Vec& y);
Vec primitive(const Vec& v);  // integer, coprime, first nonzero positive

}  // namespace cr3
