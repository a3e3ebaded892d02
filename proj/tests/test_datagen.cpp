#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rankindep/datagen.hpp"

using namespace rankindep;

namespace {

double mean_col(const Matrix& m, std::size_t c) {
  double s = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) s += m(i, c);
  return s / double(m.rows());
}

double cov_cols(const Matrix& a, std::size_t ca, const Matrix& b, std::size_t cb) {
  const double ma = mean_col(a, ca), mb = mean_col(b, cb);
  double s = 0;
  for (std::size_t i = 0; i < a.rows(); ++i) s += (a(i, ca) - ma) * (b(i, cb) - mb);
  return s / double(a.rows() - 1);
}

std::vector<double> column(const Matrix& m, std::size_t c) {
  std::vector<double> v(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) v[i] = m(i, c);
  return v;
}

// two-sample Kolmogorov-Smirnov distance
double ks2(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    const double t = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= t) ++i;
    while (j < b.size() && b[j] <= t) ++j;
    d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
  }
  return d;
}

double ks_crit_2sample(std::size_t n, std::size_t m) {
  return 1.628 * std::sqrt(double(n + m) / double(n * m));  // level 0.01
}

}  // namespace

TEST_CASE("GL at rho = 0 has independent blocks") {
  RngStream rng(1, 0);
  const std::size_t n = 100000;
  const auto d = sample_gl(n, 4, 0.0, false, rng);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) CHECK(std::abs(cov_cols(d.x(), a, d.y(), b)) < 4 / std::sqrt(double(n)));
}

TEST_CASE("GL cross covariance (unscaled and scaled)") {
  RngStream rng(2, 0);
  const std::size_t n = 100000;
  const auto d = sample_gl(n, 4, 0.3, false, rng);
  // Var of a product of two correlated unit normals is 1 + rho^2
  const double se = std::sqrt((1 + 0.09) / n);
  CHECK(std::abs(cov_cols(d.x(), 0, d.y(), 0) - 0.3) < 4 * se);
  CHECK(std::abs(cov_cols(d.x(), 0, d.y(), 1) - 0.3) < 4 * se);
  CHECK(std::abs(cov_cols(d.x(), 1, d.y(), 0)) < 4 * se);

  RngStream rng2(2, 1);
  const auto s = sample_gl(n, 4, 0.3, true, rng2);
  const double scale = 1 / std::sqrt(4.0);
  CHECK(std::abs(cov_cols(s.x(), 0, s.y(), 1) - 0.3 * scale) < 4 * se * scale);
  CHECK(std::abs(cov_cols(s.x(), 1, s.x(), 1) - scale) < 4 * std::sqrt(2.0 / n) * scale);
}

TEST_CASE("GL rejects an indefinite covariance") {
  RngStream rng(3, 0);
  CHECK_THROWS_AS(sample_gl(10, 10, 0.99, true, rng), RhoOutOfRange);
  try {
    sample_gl(10, 10, 0.99, true, rng);
  } catch (const RhoOutOfRange& e) {
    // eigenvalues of the unscaled matrix are 1 +- rho sqrt(l)
    CHECK(e.smallest_eigenvalue() < 0);
  }
  CHECK_THROWS_AS(sample_gl(10, 3, 0.1, true, rng), InvalidArgument);
}

TEST_CASE("GL plus moves the dependence to coordinate u") {
  RngStream rng(4, 0);
  CHECK_THROWS_AS(sample_gl_plus(10, 4, 0.1, 3, rng), InvalidArgument);
  // d = 100, rho = 0.2 is indefinite: 1 - 0.2 sqrt(50) < 0
  CHECK_THROWS_AS(sample_gl_plus(10, 100, 0.2, 1, rng), RhoOutOfRange);

  const std::size_t n = 100000;
  const auto d = sample_gl_plus(n, 10, 0.3, 2, rng, false);
  const double se = std::sqrt(1.1 / n);
  for (std::size_t k = 0; k < 5; ++k) {
    CHECK(std::abs(cov_cols(d.x(), 1, d.y(), k) - 0.3) < 4 * se);
    CHECK(std::abs(cov_cols(d.x(), 0, d.y(), k)) < 4 * se);
  }

  const auto cov = gl_covariance(100, 0.1, 1, false);
  CHECK(cov(0, 50) == doctest::Approx(0.1));
  CHECK(cov(0, 99) == doctest::Approx(0.1));
  CHECK(cov(1, 50) == 0.0);
}

TEST_CASE("M1 circle law moments") {
  RngStream rng(5, 0);
  const std::size_t n = 100000;
  const auto d = sample_m1(n, 10, 2.0, M1Variant::M1, rng);
  const double var = cov_cols(d.x(), 0, d.x(), 0);
  CHECK(std::abs(mean_col(d.x(), 0)) < 4 * std::sqrt(2.0625 / n));
  // Var(X^1) = rho^2/2 + 1/16; the fourth moment of rho cos gives the se
  CHECK(std::abs(var - 2.0625) < 4 * std::sqrt(4.0 / n));
  // uniform noise coordinates
  CHECK(std::abs(mean_col(d.x(), 3) - 0.5) < 4 * std::sqrt(1.0 / 12 / n));
  // the circle makes X^1, Y^1 uncorrelated yet dependent: squares correlate
  Matrix sq(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    sq(i, 0) = d.x()(i, 0) * d.x()(i, 0);
    sq(i, 1) = d.y()(i, 0) * d.y()(i, 0);
  }
  CHECK(std::abs(cov_cols(d.x(), 0, d.y(), 0)) < 0.05);
  CHECK(cov_cols(sq, 0, sq, 1) < -0.5);
}

TEST_CASE("M1 at rho = 0 is independent noise") {
  RngStream rng(6, 0);
  const std::size_t n = 50000;
  const auto d = sample_m1(n, 4, 0.0, M1Variant::M1, rng);
  CHECK(std::abs(cov_cols(d.x(), 0, d.x(), 0) - 1.0 / 16) < 0.003);
  CHECK(std::abs(cov_cols(d.x(), 0, d.y(), 0)) < 4 * (1.0 / 16) / std::sqrt(double(n)));
}

TEST_CASE("M1d and M1s dependent pairs") {
  RngStream rng(7, 0);
  const std::size_t n = 50000;
  const auto d = sample_m1(n, 4, 1.0, M1Variant::M1d, rng);
  for (std::size_t u = 0; u < 2; ++u) CHECK(cov_cols(d.x(), u, d.x(), u) == doctest::Approx(0.5625).epsilon(0.05));
  CHECK(std::abs(cov_cols(d.x(), 0, d.y(), 1)) < 0.02);
  CHECK(std::abs(cov_cols(d.x(), 1, d.x(), 0)) < 0.02);

  // M1s with q = 25 makes floor(25/2) = 12 pairs dependent
  const auto s = sample_m1(2000, 50, 0.5, M1Variant::M1s, rng);
  CHECK(s.dim_x() == 25);
  CHECK(cov_cols(s.x(), 11, s.x(), 11) == doctest::Approx(0.125 + 0.0625).epsilon(0.15));
  CHECK(cov_cols(s.x(), 12, s.x(), 12) == doctest::Approx(1.0 / 12).epsilon(0.15));
  CHECK_THROWS_AS(sample_m1(10, 2, 0.5, M1Variant::M1s, rng), InvalidArgument);
  CHECK_THROWS_AS(sample_m1(10, 4, -1.0, M1Variant::M1, rng), InvalidArgument);
}

TEST_CASE("Gumbel copula density and marginals") {
  RngStream rng(8, 0);
  CHECK_THROWS_AS(sample_gumbel(10, 1.5, rng), InvalidArgument);

  const std::size_t n = 100000;
  const double rho = 0.8;
  const auto d = sample_gumbel(n, rho, rng);
  // chi-square against the density binned on a 10 x 10 grid
  std::vector<double> counts(100, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto bx = std::min<std::size_t>(9, std::size_t(d.x()(i, 0) * 10));
    const auto by = std::min<std::size_t>(9, std::size_t(d.y()(i, 0) * 10));
    counts[bx * 10 + by] += 1;
  }
  double chi2 = 0;
  for (int a = 0; a < 10; ++a) {
    for (int b = 0; b < 10; ++b) {
      // integral of 1 + rho (2x-1)(2y-1) over the cell, exact for a bilinear density
      const double cx = 2 * (a + 0.5) / 10 - 1, cy = 2 * (b + 0.5) / 10 - 1;
      const double p = (1 + rho * cx * cy) / 100;
      const double e = p * n;
      chi2 += (counts[a * 10 + b] - e) * (counts[a * 10 + b] - e) / e;
    }
  }
  CHECK(chi2 < 134.6);  // chi-square(99) at 0.99

  // marginal of Y is U(0,1): one-sample KS at level 0.01
  auto y = column(d.y(), 0);
  std::sort(y.begin(), y.end());
  double ks = 0;
  for (std::size_t i = 0; i < n; ++i)
    ks = std::max({ks, std::abs(y[i] - double(i) / n), std::abs(double(i + 1) / n - y[i])});
  CHECK(ks < 1.628 / std::sqrt(double(n)));
}

TEST_CASE("marginal preservation across rho") {
  const std::size_t n = 20000;
  const ModelSpec specs[] = {ModelSpec::make(ModelId::GL, 4, 0.6), ModelSpec::make(ModelId::M1, 4, 2.0),
                             ModelSpec::make(ModelId::GUMBEL, 2, -0.7)};
  for (const auto& alt : specs) {
    ModelSpec null = alt;
    null.rho = 0.0;
    RngStream r1(9, 0), r2(9, 1);
    const auto a = sample_model(alt, n, r1);
    const auto b = sample_model(null, n, r2);
    // M1 is excluded for the dependent pair: its rho = 0 law differs by design
    const std::size_t first = alt.model_id == ModelId::M1 ? 1 : 0;
    for (std::size_t c = first; c < a.dim_x(); ++c)
      CHECK(ks2(column(a.x(), c), column(b.x(), c)) < ks_crit_2sample(n, n));
    for (std::size_t c = first; c < a.dim_y(); ++c)
      CHECK(ks2(column(a.y(), c), column(b.y(), c)) < ks_crit_2sample(n, n));
  }
}

TEST_CASE("samplers are deterministic") {
  const auto spec = ModelSpec::make(ModelId::M1d, 6, 1.0);
  RngStream r1(10, 3), r2(10, 3);
  CHECK(sample_model(spec, 50, r1).x().data() == sample_model(spec, 50, r2).x().data());
  CHECK(parse_model_id("GLplus") == ModelId::GLplus);
  CHECK_THROWS_AS(parse_model_id("nope"), InvalidArgument);
}
