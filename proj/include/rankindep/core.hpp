#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rankindep {

// ---------------------------------------------------------------------------
// Error types. Every failure surfaced by the library is one of these.
// ---------------------------------------------------------------------------

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Covariance parameter makes the model covariance indefinite.
class RhoOutOfRange : public InvalidArgument {
 public:
  RhoOutOfRange(const std::string& what, double smallest_eigenvalue)
      : InvalidArgument(what), smallest_eigenvalue_(smallest_eigenvalue) {}
  double smallest_eigenvalue() const noexcept { return smallest_eigenvalue_; }

 private:
  double smallest_eigenvalue_;
};

/// The requested score-generating function does not satisfy the smoothness
/// needed by a closed-form bound.
class UnsupportedPhi : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class UnsupportedModel : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Exhaustive enumeration would exceed the combinatorial budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input is well-formed but degenerate (zero variance, identical points).
class DegenerateInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Dense row-major matrix of doubles.
// ---------------------------------------------------------------------------

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0; }

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  const std::vector<double>& data() const noexcept { return data_; }

  /// Copy of the rows listed in `index`, in that order.
  Matrix select_rows(std::span<const std::size_t> index) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// ---------------------------------------------------------------------------
// PairedDataset: N observations of (X, Y), X in R^q and Y in R^l.
// ---------------------------------------------------------------------------

class PairedDataset {
 public:
  /// Throws InvalidArgument unless both blocks have the same row count N >= 2,
  /// at least one column each, and only finite entries.
  PairedDataset(Matrix x, Matrix y);

  std::size_t n() const noexcept { return x_.rows(); }
  std::size_t dim_x() const noexcept { return x_.cols(); }
  std::size_t dim_y() const noexcept { return y_.cols(); }
  std::size_t dim() const noexcept { return dim_x() + dim_y(); }

  const Matrix& x() const noexcept { return x_; }
  const Matrix& y() const noexcept { return y_; }

  /// Rows (X_{x_index[k]}, Y_{y_index[k]}) concatenated into one (q+l)-wide matrix.
  Matrix joint_rows(std::span<const std::size_t> x_index, std::span<const std::size_t> y_index) const;

  /// The dataset as-is, one concatenated row per observation.
  Matrix joint() const;

  /// Exchange the X and Y blocks.
  PairedDataset swapped() const { return PairedDataset(y_, x_); }

 private:
  Matrix x_;
  Matrix y_;
};

// ---------------------------------------------------------------------------
// RngStream: reproducible random stream addressed by (master_seed, stream_id).
//
// The engine state is derived by hashing both words through a seed sequence,
// so streams with distinct ids are independent regardless of the order in
// which they are created or consumed. Streams are single-owner.
// ---------------------------------------------------------------------------

class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// Child stream. Depends only on (master_seed, stream_id, child), never on
  /// how much of the parent has been consumed.
  RngStream substream(std::uint64_t child) const;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on [0, bound).
  std::size_t uniform_index(std::size_t bound);
  double normal();

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// SplitMix64 finalizer; used to derive stream ids.
std::uint64_t mix64(std::uint64_t x) noexcept;

// ---------------------------------------------------------------------------
// Permutation of {0, ..., m-1}.
// ---------------------------------------------------------------------------

class Permutation {
 public:
  Permutation() = default;
  /// Throws InvalidArgument if `mapping` is not a bijection on 0..m-1.
  explicit Permutation(std::vector<std::size_t> mapping);

  static Permutation identity(std::size_t m);

  std::size_t size() const noexcept { return mapping_.size(); }
  std::size_t operator[](std::size_t i) const { return mapping_[i]; }
  const std::vector<std::size_t>& mapping() const noexcept { return mapping_; }
  std::size_t fixed_points() const;

 private:
  std::vector<std::size_t> mapping_;
};

/// Fisher-Yates shuffle of 0..m-1; each of the m! outcomes has probability 1/m!.
Permutation draw_uniform_permutation(std::size_t m, RngStream& rng);

/// Uniform derangement by rejection (no fixed points). Requires m >= 2.
Permutation draw_uniform_derangement(std::size_t m, RngStream& rng);

}  // namespace rankindep
