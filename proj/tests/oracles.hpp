#pragma once

// Brute-force reference formulas shared by the unit and acceptance suites.
// Deliberately naive: direct sums over index tuples, no centering matrices.

#include <cmath>
#include <span>

#include "rankindep/core.hpp"

namespace oracle {

using rankindep::Matrix;
using rankindep::PairedDataset;

inline double sqdist(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return s;
}

// Unbiased HSIC as the U-statistic over distinct index tuples:
//   mean_{i!=j} k_ij l_ij + mean_{i,j,q,r distinct} k_ij l_qr - 2 mean_{i,j,q distinct} k_ij l_iq
inline double brute_hsic(const PairedDataset& d, double bx, double by) {
  const std::size_t n = d.n();
  auto k = [&](std::size_t i, std::size_t j) { return std::exp(-sqdist(d.x().row(i), d.x().row(j)) / (2 * bx * bx)); };
  auto l = [&](std::size_t i, std::size_t j) { return std::exp(-sqdist(d.y().row(i), d.y().row(j)) / (2 * by * by)); };
  double s2 = 0, s3 = 0, s4 = 0;
  double c2 = 0, c3 = 0, c4 = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      s2 += k(i, j) * l(i, j);
      ++c2;
      for (std::size_t q = 0; q < n; ++q) {
        if (q == i || q == j) continue;
        s3 += k(i, j) * l(i, q);
        ++c3;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == i || r == j || r == q) continue;
          s4 += k(i, j) * l(q, r);
          ++c4;
        }
      }
    }
  return s2 / c2 + s4 / c4 - 2 * s3 / c3;
}

// dCov^2 as the V-statistic S1 + S2 - 2 S3 (no centering matrices)
inline double brute_dcov2(const Matrix& a, const Matrix& b, bool l1) {
  const std::size_t n = a.rows();
  auto dist = [&](const Matrix& m, std::size_t i, std::size_t j) {
    double s = 0;
    for (std::size_t c = 0; c < m.cols(); ++c) s += l1 ? std::abs(m(i, c) - m(j, c)) : (m(i, c) - m(j, c)) * (m(i, c) - m(j, c));
    return l1 ? s : std::sqrt(s);
  };
  double s1 = 0, sa = 0, sb = 0, s3 = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      s1 += dist(a, i, j) * dist(b, i, j);
      sa += dist(a, i, j);
      sb += dist(b, i, j);
      for (std::size_t k = 0; k < n; ++k) s3 += dist(a, i, j) * dist(b, i, k);
    }
  const double nn = double(n) * n;
  return s1 / nn + (sa / nn) * (sb / nn) - 2 * s3 / (nn * n);
}

inline double brute_dcor(const PairedDataset& d, bool l1) {
  const double xy = brute_dcov2(d.x(), d.y(), l1);
  const double xx = brute_dcov2(d.x(), d.x(), l1);
  const double yy = brute_dcov2(d.y(), d.y(), l1);
  return std::sqrt(xy / std::sqrt(xx * yy));
}

inline PairedDataset hand4() {
  return {Matrix(4, 2, {0.1, 1.2, -0.7, 0.4, 1.5, -0.3, 0.2, 0.9}), Matrix(4, 1, {0.3, -1.1, 0.8, 2.0})};
}

inline PairedDataset hand5() {
  return {Matrix(5, 1, {0.0, 1.0, 3.0, -2.0, 0.5}), Matrix(5, 2, {1.0, 0.2, -0.4, 0.9, 2.2, 2.5, 0.1, -1.3, 0.7, 0.7})};
}

}  // namespace oracle
