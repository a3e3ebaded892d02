#include "rankindep/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace rankindep {

const char* to_string(ModelId id) noexcept {
  switch (id) {
    case ModelId::GL:
      return "GL";
    case ModelId::GLplus:
      return "GLplus";
    case ModelId::M1:
      return "M1";
    case ModelId::M1s:
      return "M1s";
    case ModelId::M1d:
      return "M1d";
    case ModelId::GUMBEL:
      return "GUMBEL";
  }
  return "?";
}

ModelId parse_model_id(const std::string& text) {
  for (ModelId id : {ModelId::GL, ModelId::GLplus, ModelId::M1, ModelId::M1s, ModelId::M1d, ModelId::GUMBEL}) {
    if (text == to_string(id)) return id;
  }
  if (text == "GL+") return ModelId::GLplus;
  throw InvalidArgument("unknown model '" + text + "' (expected GL, GLplus, M1, M1s, M1d or GUMBEL)");
}

std::string ModelSpec::label() const {
  std::ostringstream os;
  os << to_string(model_id) << "_d" << d() << "_rho" << rho;
  return os.str();
}

ModelSpec ModelSpec::make(ModelId id, std::size_t d, double rho) {
  ModelSpec spec;
  spec.model_id = id;
  spec.rho = rho;
  if (id == ModelId::GUMBEL) {
    spec.dim_x = spec.dim_y = 1;
  } else {
    if (d < 2 || d % 2 != 0) throw InvalidArgument("ModelSpec: d must be even and >= 2");
    spec.dim_x = spec.dim_y = d / 2;
  }
  return spec;
}

namespace {

std::size_t half_dim(std::size_t d) {
  if (d < 2 || d % 2 != 0) throw InvalidArgument("dimension d must be even and >= 2, got " + std::to_string(d));
  return d / 2;
}

Eigen::MatrixXd cholesky_or_throw(const Eigen::MatrixXd& cov, double rho) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  bool ok = llt.info() == Eigen::Success;
  if (ok) ok = llt.matrixL().toDenseMatrix().diagonal().minCoeff() > 1e-10;
  if (!ok) {
    const double smallest = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(cov, Eigen::EigenvaluesOnly)
                                .eigenvalues()
                                .minCoeff();
    std::ostringstream os;
    os << "rho=" << rho << " makes the covariance indefinite (smallest eigenvalue " << smallest << ")";
    throw RhoOutOfRange(os.str(), smallest);
  }
  return llt.matrixL();
}

PairedDataset gaussian_draws(std::size_t n, const Eigen::MatrixXd& chol, std::size_t q, RngStream& rng) {
  const auto d = static_cast<std::size_t>(chol.rows());
  Matrix x(n, q), y(n, d - q);
  Eigen::VectorXd g(static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) g[static_cast<Eigen::Index>(k)] = rng.normal();
    const Eigen::VectorXd z = chol.triangularView<Eigen::Lower>() * g;
    for (std::size_t k = 0; k < q; ++k) x(i, k) = z[static_cast<Eigen::Index>(k)];
    for (std::size_t k = q; k < d; ++k) y(i, k - q) = z[static_cast<Eigen::Index>(k)];
  }
  return PairedDataset(std::move(x), std::move(y));
}

}  // namespace

Eigen::MatrixXd gl_covariance(std::size_t d, double rho, std::size_t u, bool scaled) {
  const std::size_t q = half_dim(d);
  if (u < 1 || u > q) throw InvalidArgument("gl_covariance: coordinate u must lie in 1..q");
  const auto di = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(di, di);
  const auto row = static_cast<Eigen::Index>(u - 1);
  for (std::size_t k = q; k < d; ++k) {
    cov(row, static_cast<Eigen::Index>(k)) = rho;
    cov(static_cast<Eigen::Index>(k), row) = rho;
  }
  if (scaled) cov /= std::sqrt(static_cast<double>(d));
  return cov;
}

PairedDataset sample_gl(std::size_t n, std::size_t d, double rho, bool scaled, RngStream& rng) {
  const Eigen::MatrixXd cov = gl_covariance(d, rho, 1, scaled);
  return gaussian_draws(n, cholesky_or_throw(cov, rho), d / 2, rng);
}

PairedDataset sample_gl_plus(std::size_t n, std::size_t d, double rho, std::size_t u, RngStream& rng, bool scaled) {
  const Eigen::MatrixXd cov = gl_covariance(d, rho, u, scaled);
  return gaussian_draws(n, cholesky_or_throw(cov, rho), d / 2, rng);
}

PairedDataset sample_m1(std::size_t n, std::size_t d, double rho, M1Variant variant, RngStream& rng) {
  const std::size_t q = half_dim(d);
  if (!(rho >= 0.0)) throw InvalidArgument("sample_m1: rho must be >= 0");
  std::size_t pairs = 1;
  if (variant == M1Variant::M1s) {
    if (q < 2) throw InvalidArgument("sample_m1: M1s needs q >= 2 so that floor(q/2) >= 1");
    pairs = q / 2;
  } else if (variant == M1Variant::M1d) {
    pairs = q;
  }
  constexpr double two_pi = 2.0 * std::numbers::pi;
  Matrix x(n, q), y(n, q);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < q; ++k) {
      if (k < pairs) {
        const double theta = two_pi * rng.uniform();
        x(i, k) = rho * std::cos(theta) + rng.normal() / 4.0;
        y(i, k) = rho * std::sin(theta) + rng.normal() / 4.0;
      } else {
        x(i, k) = rng.uniform();
        y(i, k) = rng.uniform();
      }
    }
  }
  return PairedDataset(std::move(x), std::move(y));
}

PairedDataset sample_gumbel(std::size_t n, double rho, RngStream& rng) {
  if (!(std::abs(rho) <= 1.0)) throw InvalidArgument("sample_gumbel: rho must lie in [-1, 1]");
  Matrix x(n, 1), y(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double xv = rng.uniform();
    const double v = rng.uniform();
    // Solve y - a y (1 - y) = v, i.e. a y^2 + (1 - a) y - v = 0, for the root
    // in [0, 1]; this form has no cancellation as a -> 0.
    const double a = rho * (2.0 * xv - 1.0);
    const double b = 1.0 - a;
    double yv = 2.0 * v / (b + std::sqrt(b * b + 4.0 * a * v));
    yv = std::clamp(yv, 0.0, 1.0);
    x(i, 0) = xv;
    y(i, 0) = yv;
  }
  return PairedDataset(std::move(x), std::move(y));
}

PairedDataset sample_model(const ModelSpec& spec, std::size_t n, RngStream& rng) {
  const std::size_t d = spec.d();
  if (spec.model_id != ModelId::GUMBEL && spec.dim_x != spec.dim_y) {
    throw InvalidArgument("sample_model: synthetic models use q = l = d/2");
  }
  switch (spec.model_id) {
    case ModelId::GL:
      return sample_gl(n, d, spec.rho, spec.scaled, rng);
    case ModelId::GLplus:
      return sample_gl_plus(n, d, spec.rho, spec.u, rng, spec.scaled);
    case ModelId::M1:
      return sample_m1(n, d, spec.rho, M1Variant::M1, rng);
    case ModelId::M1s:
      return sample_m1(n, d, spec.rho, M1Variant::M1s, rng);
    case ModelId::M1d:
      return sample_m1(n, d, spec.rho, M1Variant::M1d, rng);
    case ModelId::GUMBEL:
      return sample_gumbel(n, spec.rho, rng);
  }
  throw InvalidArgument("sample_model: unknown model");
}

}  // namespace rankindep
